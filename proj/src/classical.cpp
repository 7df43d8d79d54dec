#include "qtc/classical.hpp"

#include "qtc/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtc {
namespace {

void check_finite(const PhaseState& s, double t)
{
    if (!s.finite()) {
        std::ostringstream msg;
        msg << "non-finite phase state at t = " << t;
        throw NumericalHalt("classical-dynamics", msg.str());
    }
}

} // namespace

PhaseState step_newton(const SystemSpec& sys, PhaseState s, double t, double dt)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step_newton: dt must be positive");
    }
    auto next = rk4_step([&](double x, double tt) { return force(sys, x, tt); }, sys.mass(), s, t, dt);
    check_finite(next, t + dt);
    return next;
}

ClassicalNoiseSpec matched_classical_noise(double m, double hbar, const MeasurementConfig& meas)
{
    if (meas.k <= 0.0) {
        return {};
    }
    const double var_x = std::sqrt(hbar / (8.0 * meas.k * m));
    return {hbar * hbar * meas.k, 4.0 * meas.k * var_x * var_x};
}

PhaseState step_noisy_classical(const SystemSpec& sys, PhaseState s, double t, double dt,
                                NoiseSource& noise, const ClassicalNoiseSpec& nspec)
{
    if (nspec.D_p < 0.0 || nspec.D_x < 0.0) {
        throw std::invalid_argument("step_noisy_classical: diffusion coefficients must be >= 0");
    }
    PhaseState next = step_newton(sys, s, t, dt);
    if (nspec.D_p == 0.0 && nspec.D_x == 0.0) {
        return next;
    }
    const double dWx = noise.increment(dt);
    const double dWp = noise.increment(dt);
    next.x += std::sqrt(2.0 * nspec.D_x) * dWx;
    next.p += std::sqrt(2.0 * nspec.D_p) * dWp;
    check_finite(next, t + dt);
    return next;
}

double classical_energy(const SystemSpec& sys, const PhaseState& s, double t)
{
    return s.p * s.p / (2.0 * sys.mass()) + potential(sys, s.x, t);
}

} // namespace qtc
