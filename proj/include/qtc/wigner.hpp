#pragma once

#include "qtc/fft.hpp"
#include "qtc/noise.hpp"
#include "qtc/potentials.hpp"
#include "qtc/state.hpp"
#include "qtc/wavefunction.hpp"

#include <cstddef>
#include <vector>

namespace qtc {

/// p_l = p_min + l dp, l = 0..m-1.
struct MomentumGrid {
    double p_min = 0.0;
    double dp = 1.0;
    std::size_t m = 0;

    double p(std::size_t l) const { return p_min + static_cast<double>(l) * dp; }
};

/// Wigner function sampled on an x-major grid: value(j, l) = values[j * p.m + l].
struct WignerGrid {
    PositionGrid x;
    MomentumGrid p;
    std::vector<double> values;

    double& at(std::size_t j, std::size_t l) { return values[j * p.m + l]; }
    double at(std::size_t j, std::size_t l) const { return values[j * p.m + l]; }

    /// sum W dx dp
    double total() const;
    double min() const;
    std::vector<double> x_marginal() const;
    std::vector<double> p_marginal() const;
};

/// Discrete Wigner transform
///   W(x_j, p_l) = (dx / pi hbar) sum_n psi(x_j + n dx) psi*(x_j - n dx) exp(-2 i p_l n dx / hbar),
/// n in [-M/2, M/2), with p_l = (l - M/2) dp and dp = pi hbar / (M dx). The
/// momentum window is |p| <= pi hbar / (2 dx) for any M. The x-marginal equals
/// |psi|^2 exactly. `x_stride` > 1 keeps every stride-th row only.
/// Requires M even, 2 <= M <= N.
WignerGrid wigner_transform(const WaveFunction& psi, std::size_t p_count, double hbar,
                            std::size_t x_stride = 1);

/// Moments of a Wigner function; the covariance is the symmetrized one.
GaussianState moments(const WignerGrid& W);

/// sum |a - b| dx dp on identical grids.
double l1_distance(const WignerGrid& a, const WignerGrid& b);

/// Direct evolution of a Wigner function on a phase-space grid.
///
/// Spectral split-step in two representations:
///  * mixed (x, y) with y = 2 n dx, where the potential term is the phase
///    exp(-i tau [y V'(x) + y^3 V'''(x) / 24] / hbar) (exact for quartic V) and
///    the measurement multiplies by exp(sqrt(8k)(x - <x>) dW - 4k dt (x - <x>)^2 - k dt y^2),
///    which carries both the conditioning and the hbar^2 k d^2/dp^2 diffusion;
///  * (k_x, p), where free streaming is the phase exp(-i k_x p tau / m).
/// Step order matches SsePropagator: measurement, V/2 at t, kinetic, V/2 at t+dt.
///
/// The grid must be the one produced by wigner_transform with x_stride = 1.
class WignerPropagator {
public:
    WignerPropagator(const PositionGrid& x, const MomentumGrid& p, double hbar, double mass);

    void step(const SystemSpec& sys, WignerGrid& W, double t, double dt, const MeasurementConfig& meas,
              NoiseSource& noise);
    void displace(WignerGrid& W, double dx, double dp) const;

private:
    void load(const WignerGrid& W) const;
    void store(WignerGrid& W) const;
    void to_mixed() const;
    void to_wigner() const;
    void check(const WignerGrid& W) const;

    PositionGrid xg_;
    MomentumGrid pg_;
    double hbar_;
    double mass_;
    mutable FftwBuffer buf_;
    FftPlan along_p_fwd_;
    FftPlan along_p_bwd_;
    FftPlan along_x_fwd_;
    FftPlan along_x_bwd_;
};

WignerGrid step_wigner(const SystemSpec& sys, const WignerGrid& W, double t, double dt,
                       const MeasurementConfig& meas, double hbar, NoiseSource& noise);

} // namespace qtc
