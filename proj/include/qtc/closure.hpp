#pragma once

#include "qtc/noise.hpp"
#include "qtc/potentials.hpp"
#include "qtc/state.hpp"

#include <optional>
#include <string>

namespace qtc {

/// Deterministic part of the Gaussian moment closure under continuous
/// position measurement (Ito form). The centroid force is closed at <x> as
/// F(<x>) + var_x/2 * F''(<x>); dF is evaluated at <x>.
GaussianState closure_drift(const SystemSpec& sys, const GaussianState& g, double t,
                            const MeasurementConfig& meas, double hbar);

/// One Ito step of the closure. A single Wiener increment (one draw per
/// step) drives both centroid equations with coefficients sqrt(8k) var_x and
/// sqrt(8k) cov_xp taken at the start of the step. The deterministic part is
/// integrated with RK4, sub-stepped when the measurement relaxation rate is
/// large relative to dt.
///
/// Throws NumericalHalt when the result is non-finite, a variance turns
/// non-positive, or var_x var_p - cov^2 < hbar^2/4 - 1e-6 hbar^2.
GaussianState step_gaussian_closure(const SystemSpec& sys, const GaussianState& g, double t,
                                    double dt, const MeasurementConfig& meas, double hbar,
                                    NoiseSource& noise);

/// Halts unless g is a valid quantum Gaussian (positive variances, finite,
/// uncertainty bound within slack).
void check_quantum_gaussian(const GaussianState& g, double hbar, const char* module);

struct SteadyState {
    double var_x;
    double var_p;
    double cov_xp;
};

/// Stationary (var_x, var_p, cov_xp) of the variance equations with dF
/// frozen. Closed form: cov = [dF + sqrt(dF^2 + 16 hbar^2 k^2)] / 8k,
/// var_x = sqrt(cov / 4km), var_p = m var_x (8k cov - dF). Empty when k <= 0
/// or the result is not finite.
std::optional<SteadyState> steady_state_variances(double m, double dF, const MeasurementConfig& meas,
                                                  double hbar);

/// Gaussian state at (x, p) with the steady-state moments for dF(x).
std::optional<GaussianState> localized_state(const SystemSpec& sys, PhaseState at, double t,
                                             const MeasurementConfig& meas, double hbar);

// ---------------------------------------------------------------------------
// Classicality conditions

enum class Verdict { satisfied, violated, indeterminate };

std::string_view verdict_name(Verdict v);

struct KWindow {
    double lo = 0.0; // um^-2 s^-1
    double hi = 0.0;
    bool empty = true;

    bool contains(double k) const { return !empty && k > lo && k < hi; }
    /// log10(hi/lo); 0 when empty.
    double decades() const;
};

struct ClassicalityOptions {
    double margin = 10.0;      // factor resolving "much greater than"
    int unstable_samples = 401; // x samples across the unstable region
};

struct ClassicalityReport {
    // Localization: 8k >> |F''/F| sqrt(|F'|/2m) over the unstable region.
    double localization_lhs = 0.0;
    double localization_rhs = 0.0;
    double localization_x = 0.0; // where the rhs is largest
    Verdict localization = Verdict::indeterminate;

    // Noise: 2|F'|/s << hbar k << |F'| s / 4 at the typical point.
    double noise_lower = 0.0;
    double noise_upper = 0.0;
    double hbar_k = 0.0;
    Verdict noise = Verdict::indeterminate;

    // Strong nonlinearity: hbar |F''/F| >= 4 sqrt(m |F'|); then 8k >> (F'')^2 hbar / (4 m F^2).
    bool nonlinearity_strong = false;
    double strong_rhs = 0.0;

    double action_s = 0.0;       // |x p| / hbar at the typical point
    double s_force = 0.0;        // [m F^2 / F'^2] |F/p| / hbar (NaN if indeterminate)
    double s_energy = 0.0;       // E |p / 4F| / hbar (NaN if indeterminate)
    bool action_estimates_disagree = false; // s_force and s_energy differ > 10x

    KWindow k_window;
    bool classical = false; // every determinate condition satisfied at k
    std::string notes;
};

/// Evaluates the classicality inequalities for measurement strength `meas.k`
/// at the typical phase point `typical` (force at time t) and reports the
/// admissible k window. Unstable points are those with dF > 0; there |F| is
/// replaced by its RMS over one drive period so that zeros of the drive do
/// not make the bound singular.
ClassicalityReport classicality_report(const SystemSpec& sys, const PhaseState& typical, double t,
                                       const MeasurementConfig& meas, double hbar,
                                       const ClassicalityOptions& options = {});

} // namespace qtc
