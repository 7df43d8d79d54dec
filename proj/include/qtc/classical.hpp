#pragma once

#include "qtc/noise.hpp"
#include "qtc/potentials.hpp"
#include "qtc/state.hpp"

namespace qtc {

/// Classic fourth-order Runge-Kutta step of x' = p/m, p' = force(x, t) for
/// any force callable `double(double x, double t)`.
template <class ForceFn>
PhaseState rk4_step(ForceFn&& force_fn, double m, PhaseState s, double t, double dt)
{
    const double h2 = 0.5 * dt;
    const double k1x = s.p / m;
    const double k1p = force_fn(s.x, t);
    const double k2x = (s.p + h2 * k1p) / m;
    const double k2p = force_fn(s.x + h2 * k1x, t + h2);
    const double k3x = (s.p + h2 * k2p) / m;
    const double k3p = force_fn(s.x + h2 * k2x, t + h2);
    const double k4x = (s.p + dt * k3p) / m;
    const double k4p = force_fn(s.x + dt * k3x, t + dt);
    return {s.x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            s.p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)};
}

/// Deterministic Newtonian step (RK4). Throws NumericalHalt if the result is
/// not finite and std::invalid_argument for dt <= 0.
PhaseState step_newton(const SystemSpec& sys, PhaseState s, double t, double dt);

/// Additive classical noise: dp += sqrt(2 D_p) dW_p, dx += sqrt(2 D_x) dW_x.
struct ClassicalNoiseSpec {
    double D_p = 0.0; // pg^2 um^2 s^-3
    double D_x = 0.0; // um^2 / s
};

/// The noise a continuously measured centroid receives at the free-particle
/// steady state: D_p = hbar^2 k, D_x = 4 k var_x^2 with var_x = sqrt(hbar/(8 k m)).
ClassicalNoiseSpec matched_classical_noise(double m, double hbar, const MeasurementConfig& meas);

/// Noisy classical step: RK4 drift followed by independent additive Wiener
/// kicks in x and p (two draws per step, x first). With zero diffusion this
/// is exactly step_newton and draws nothing.
PhaseState step_noisy_classical(const SystemSpec& sys, PhaseState s, double t, double dt,
                                NoiseSource& noise, const ClassicalNoiseSpec& nspec);

/// Total energy p^2/2m + V(x, t).
double classical_energy(const SystemSpec& sys, const PhaseState& s, double t);

} // namespace qtc
