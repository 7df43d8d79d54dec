#pragma once

#include <cmath>

namespace qtc {

/// Classical phase-space point: x in um, p in pg*um/s (or dimensionless).
struct PhaseState {
    double x = 0.0;
    double p = 0.0;

    bool finite() const { return std::isfinite(x) && std::isfinite(p); }
};

/// Centroid and second moments of a (near-)Gaussian state.
struct GaussianState {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var_x = 0.0;  // sigma_x^2
    double var_p = 0.0;  // sigma_p^2
    double cov_xp = 0.0; // <xp+px>/2 - <x><p>

    PhaseState centroid() const { return {mean_x, mean_p}; }

    /// var_x * var_p - cov_xp^2; bounded below by hbar^2/4 for quantum states.
    double uncertainty_product() const { return var_x * var_p - cov_xp * cov_xp; }

    bool finite() const
    {
        return std::isfinite(mean_x) && std::isfinite(mean_p) && std::isfinite(var_x) &&
               std::isfinite(var_p) && std::isfinite(cov_xp);
    }
};

/// Continuous position measurement; k in um^-2 s^-1. k == 0 is unobserved.
struct MeasurementConfig {
    double k = 0.0;
};

} // namespace qtc
