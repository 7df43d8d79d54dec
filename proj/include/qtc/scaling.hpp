#pragma once

#include "qtc/potentials.hpp"
#include "qtc/state.hpp"

namespace qtc {

/// Reference scales for a dimensionless description: x0 (um), p0 (pg um/s),
/// t0 (s). Consistency requires t0 = m * x0 / p0 so that the rescaled mass is 1.
struct Scales {
    double x0 = 1.0;
    double p0 = 1.0;
    double t0 = 1.0;

    double energy() const { return x0 * p0 / t0; }
    double force() const { return p0 / t0; }
    double action() const { return x0 * p0; }
};

struct DimensionlessSystem {
    SystemSpec system;
    double hbar_eff;
    Scales scales;
};

/// Same dynamics in units of (x0, p0, t0). hbar_eff = hbar / (x0 p0).
/// Throws std::invalid_argument for non-positive scales or when t0 differs
/// from m x0 / p0 by more than 1e-9 relative.
DimensionlessSystem rescale_to_dimensionless(const SystemSpec& sys, const Scales& scales,
                                             double hbar);

/// Scales with t0 chosen consistently for mass m.
Scales consistent_scales(double m, double x0, double p0);

PhaseState to_dimensionless(const PhaseState& s, const Scales& sc);
PhaseState to_physical(const PhaseState& s, const Scales& sc);
GaussianState to_dimensionless(const GaussianState& g, const Scales& sc);
GaussianState to_physical(const GaussianState& g, const Scales& sc);
MeasurementConfig to_dimensionless(const MeasurementConfig& m, const Scales& sc);
MeasurementConfig to_physical(const MeasurementConfig& m, const Scales& sc);

} // namespace qtc
