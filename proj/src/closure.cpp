#include "qtc/closure.hpp"

#include "qtc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtc {
namespace {

GaussianState axpy(const GaussianState& a, double h, const GaussianState& d)
{
    return {a.mean_x + h * d.mean_x, a.mean_p + h * d.mean_p, a.var_x + h * d.var_x,
            a.var_p + h * d.var_p, a.cov_xp + h * d.cov_xp};
}

GaussianState rk4(const SystemSpec& sys, const GaussianState& g, double t, double dt,
                  const MeasurementConfig& meas, double hbar)
{
    const double h2 = 0.5 * dt;
    const auto k1 = closure_drift(sys, g, t, meas, hbar);
    const auto k2 = closure_drift(sys, axpy(g, h2, k1), t + h2, meas, hbar);
    const auto k3 = closure_drift(sys, axpy(g, h2, k2), t + h2, meas, hbar);
    const auto k4 = closure_drift(sys, axpy(g, dt, k3), t + dt, meas, hbar);
    const double w = dt / 6.0;
    return {g.mean_x + w * (k1.mean_x + 2.0 * k2.mean_x + 2.0 * k3.mean_x + k4.mean_x),
            g.mean_p + w * (k1.mean_p + 2.0 * k2.mean_p + 2.0 * k3.mean_p + k4.mean_p),
            g.var_x + w * (k1.var_x + 2.0 * k2.var_x + 2.0 * k3.var_x + k4.var_x),
            g.var_p + w * (k1.var_p + 2.0 * k2.var_p + 2.0 * k3.var_p + k4.var_p),
            g.cov_xp + w * (k1.cov_xp + 2.0 * k2.cov_xp + 2.0 * k3.cov_xp + k4.cov_xp)};
}

// Largest rate in the deterministic moment equations.
double stiffness(const SystemSpec& sys, const GaussianState& g, double t, const MeasurementConfig& meas)
{
    const auto d = force_derivatives(sys, g.mean_x, t);
    return 16.0 * meas.k * std::abs(g.var_x) + 2.0 * std::sqrt(std::abs(d.dF) / sys.mass());
}

} // namespace

GaussianState closure_drift(const SystemSpec& sys, const GaussianState& g, double t,
                            const MeasurementConfig& meas, double hbar)
{
    const double m = sys.mass();
    const double k = meas.k;
    const auto d = force_derivatives(sys, g.mean_x, t);
    const double mean_force = force(sys, g.mean_x, t) + 0.5 * g.var_x * d.d2F;
    return {
        g.mean_p / m,
        mean_force,
        2.0 * g.cov_xp / m - 8.0 * k * g.var_x * g.var_x,
        2.0 * hbar * hbar * k - 8.0 * k * g.cov_xp * g.cov_xp + 2.0 * d.dF * g.cov_xp,
        g.var_p / m - 8.0 * k * g.var_x * g.cov_xp + d.dF * g.var_x,
    };
}

void check_quantum_gaussian(const GaussianState& g, double hbar, const char* module)
{
    std::ostringstream msg;
    msg.precision(10);
    if (!g.finite()) {
        msg << "non-finite moments";
    } else if (!(g.var_x > 0.0) || !(g.var_p > 0.0)) {
        msg << "non-positive variance (var_x = " << g.var_x << ", var_p = " << g.var_p << ")";
    } else if (g.uncertainty_product() < 0.25 * hbar * hbar - 1e-6 * hbar * hbar) {
        msg << "uncertainty bound violated: var_x var_p - cov^2 = " << g.uncertainty_product()
            << " < hbar^2/4 = " << 0.25 * hbar * hbar << " (dt too large or k outside validity)";
    } else {
        return;
    }
    throw NumericalHalt(module, msg.str());
}

GaussianState step_gaussian_closure(const SystemSpec& sys, const GaussianState& g, double t,
                                    double dt, const MeasurementConfig& meas, double hbar,
                                    NoiseSource& noise)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step_gaussian_closure: dt must be positive");
    }
    if (meas.k < 0.0) {
        throw std::invalid_argument("step_gaussian_closure: k must be >= 0");
    }
    // One draw per step regardless of sub-stepping, so the record lines up
    // with other backends fed by the same stream.
    const double dW = meas.k > 0.0 ? noise.increment(dt) : 0.0;
    const double gain = std::sqrt(8.0 * meas.k);
    const double noise_x = gain * g.var_x * dW;
    const double noise_p = gain * g.cov_xp * dW;

    const double rate = stiffness(sys, g, t, meas);
    const int substeps = std::max(1, static_cast<int>(std::ceil(rate * dt / 0.25)));
    const double h = dt / substeps;
    GaussianState next = g;
    for (int i = 0; i < substeps; ++i) {
        next = rk4(sys, next, t + i * h, h, meas, hbar);
    }
    next.mean_x += noise_x;
    next.mean_p += noise_p;
    check_quantum_gaussian(next, hbar, "gaussian-closure");
    return next;
}

std::optional<SteadyState> steady_state_variances(double m, double dF, const MeasurementConfig& meas,
                                                  double hbar)
{
    const double k = meas.k;
    if (!(k > 0.0) || !(m > 0.0)) {
        return std::nullopt;
    }
    const double root = std::hypot(dF, 4.0 * hbar * k);
    // Positive root of 8k C^2 - 2 dF C - 2 hbar^2 k = 0, in the form that
    // avoids cancellation for either sign of dF.
    const double cov = dF >= 0.0 ? (dF + root) / (8.0 * k) : 2.0 * hbar * hbar * k / (root - dF);
    const double var_x = std::sqrt(cov / (4.0 * k * m));
    const double var_p = m * var_x * root; // 8k cov - dF == root
    if (!std::isfinite(var_x) || !std::isfinite(var_p) || !(var_x > 0.0) || !(var_p > 0.0)) {
        return std::nullopt;
    }
    return SteadyState{var_x, var_p, cov};
}

std::optional<GaussianState> localized_state(const SystemSpec& sys, PhaseState at, double t,
                                             const MeasurementConfig& meas, double hbar)
{
    const auto ss = steady_state_variances(sys.mass(), force_derivatives(sys, at.x, t).dF, meas, hbar);
    if (!ss) {
        return std::nullopt;
    }
    return GaussianState{at.x, at.p, ss->var_x, ss->var_p, ss->cov_xp};
}

} // namespace qtc
