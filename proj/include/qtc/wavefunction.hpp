#pragma once

#include "qtc/fft.hpp"
#include "qtc/noise.hpp"
#include "qtc/potentials.hpp"
#include "qtc/state.hpp"

#include <cstddef>
#include <vector>

namespace qtc {

/// Uniform periodic grid x_j = x_min + j dx, j = 0..n-1, n a power of two.
struct PositionGrid {
    double x_min = 0.0;
    double dx = 1.0;
    std::size_t n = 0;

    /// Grid spanning [x_min, x_max) with n points. Throws std::invalid_argument
    /// unless n is a power of two >= 4 and x_max > x_min.
    static PositionGrid span(double x_min, double x_max, std::size_t n);

    double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx; }
    double length() const { return static_cast<double>(n) * dx; }
    /// Angular wavenumber of FFT bin q (negative for q >= n/2).
    double wavenumber(std::size_t q) const;
    /// Largest momentum the grid resolves: pi hbar / dx.
    double max_momentum(double hbar) const;
};

/// Conditioned pure state on a PositionGrid, normalized so that
/// sum |psi_j|^2 dx = 1.
struct WaveFunction {
    PositionGrid grid;
    std::vector<cplx> amps;

    double norm() const;
    void normalize();
    /// Probability within `fraction` of the grid length from either edge.
    double edge_probability(double fraction = 0.05) const;
    std::vector<double> density() const;
};

/// Pure Gaussian with the given mean, var_x and cov_xp (var_p follows from
/// purity: (hbar^2/4 + cov^2) / var_x).
WaveFunction gaussian_wavepacket(const PositionGrid& grid, const GaussianState& g, double hbar);

/// Symmetric grid about x = 0 whose half-width is three times the outer
/// classical turning radius reachable from `start` (drive counted at full
/// amplitude). Minimum half-width `min_half_width`.
PositionGrid default_position_grid(const SystemSpec& sys, const PhaseState& start, std::size_t n,
                                   double min_half_width = 0.0);

/// Rough grid size needed to represent motion within |x| <= x_half, |p| <= p_max.
double required_grid_points(double x_half, double p_max, double hbar);

/// Split-step propagator for the position-measured stochastic Schroedinger
/// equation, unit efficiency. A step applies, in order:
///   1. measurement: psi *= exp(-2k dt (x - <x>)^2 + sqrt(2k) (x - <x>) dW),
///      whose Ito expansion is the norm-preserving update
///      -k (x-<x>)^2 dt + sqrt(2k) (x-<x>) dW, then renormalizes;
///   2. Strang splitting of the Hamiltonian: V/2 at t, kinetic, V/2 at t+dt.
/// Exactly one Wiener increment is drawn per step (only when k > 0).
///
/// Halts (NumericalHalt) when the Hamiltonian part changes the norm by more
/// than 1e-6, when k var_x dt > 0.1, when probability within 5% of the grid
/// edges reaches 1e-8, or on non-finite amplitudes.
class SsePropagator {
public:
    SsePropagator(const PositionGrid& grid, double hbar, double mass);

    void step(const SystemSpec& sys, WaveFunction& psi, double t, double dt,
              const MeasurementConfig& meas, NoiseSource& noise);

    /// <x>, <p>, var_x, var_p and symmetrized cov_xp; momentum moments spectrally.
    GaussianState moments(const WaveFunction& psi) const;
    double energy(const SystemSpec& sys, const WaveFunction& psi, double t) const;
    /// |phi(p_q)|^2 on the FFT momentum grid (FFT order), normalized to sum dp = 1.
    std::vector<double> momentum_density(const WaveFunction& psi) const;
    /// Translate by dx (spectrally) and boost by dp.
    void displace(WaveFunction& psi, double dx, double dp) const;

    const PositionGrid& grid() const noexcept { return grid_; }
    double hbar() const noexcept { return hbar_; }
    double last_unitary_norm_drift() const noexcept { return last_drift_; }

private:
    void to_buffer(const WaveFunction& psi) const;
    void from_buffer(WaveFunction& psi) const;
    void apply_potential_half(const SystemSpec& sys, double t, double dt) const;
    void check_grid(const WaveFunction& psi) const;

    PositionGrid grid_;
    double hbar_;
    double mass_;
    mutable FftwBuffer buf_;
    FftPlan forward_;
    FftPlan backward_;
    mutable std::vector<cplx> kinetic_;
    mutable double kinetic_dt_ = -1.0;
    double last_drift_ = 0.0;
};

/// One step with a freshly planned propagator.
WaveFunction step_sse(const SystemSpec& sys, const WaveFunction& psi, double t, double dt,
                      const MeasurementConfig& meas, double hbar, NoiseSource& noise);

GaussianState moments(const WaveFunction& psi, double hbar);

} // namespace qtc
