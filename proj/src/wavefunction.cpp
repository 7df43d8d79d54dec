#include "qtc/wavefunction.hpp"

#include "qtc/errors.hpp"
#include "qtc/units.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qtc {
namespace {

constexpr const char* kModule = "quantum-trajectory";

bool is_power_of_two(std::size_t n) { return n >= 4 && (n & (n - 1)) == 0; }

struct PositionMoments {
    double norm;
    double mean;
    double var;
};

PositionMoments position_moments(const WaveFunction& psi)
{
    const auto& g = psi.grid;
    double n0 = 0.0;
    double n1 = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double rho = std::norm(psi.amps[j]);
        n0 += rho;
        n1 += rho * g.x(j);
    }
    const double mean = n1 / n0;
    double var = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double d = g.x(j) - mean;
        var += std::norm(psi.amps[j]) * d * d;
    }
    return {n0 * g.dx, mean, var / n0};
}

} // namespace

PositionGrid PositionGrid::span(double x_min, double x_max, std::size_t n)
{
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("position grid size must be a power of two >= 4");
    }
    if (!(x_max > x_min)) {
        throw std::invalid_argument("position grid requires x_max > x_min");
    }
    return {x_min, (x_max - x_min) / static_cast<double>(n), n};
}

double PositionGrid::wavenumber(std::size_t q) const
{
    const auto half = n / 2;
    const double signed_q = q < half ? static_cast<double>(q) : static_cast<double>(q) - static_cast<double>(n);
    return 2.0 * constants::pi * signed_q / length();
}

double PositionGrid::max_momentum(double hbar) const
{
    return constants::pi * hbar / dx;
}

double WaveFunction::norm() const
{
    double s = 0.0;
    for (const auto& a : amps) {
        s += std::norm(a);
    }
    return s * grid.dx;
}

void WaveFunction::normalize()
{
    const double scale = 1.0 / std::sqrt(norm());
    for (auto& a : amps) {
        a *= scale;
    }
}

double WaveFunction::edge_probability(double fraction) const
{
    const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(grid.n)));
    double s = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        s += std::norm(amps[j]) + std::norm(amps[grid.n - 1 - j]);
    }
    return s * grid.dx;
}

std::vector<double> WaveFunction::density() const
{
    std::vector<double> out(amps.size());
    std::transform(amps.begin(), amps.end(), out.begin(), [](const cplx& a) { return std::norm(a); });
    return out;
}

WaveFunction gaussian_wavepacket(const PositionGrid& grid, const GaussianState& g, double hbar)
{
    if (!(g.var_x > 0.0)) {
        throw std::invalid_argument("gaussian_wavepacket: var_x must be positive");
    }
    WaveFunction psi{grid, std::vector<cplx>(grid.n)};
    const cplx width(1.0 / (4.0 * g.var_x), -g.cov_xp / (2.0 * hbar * g.var_x));
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double d = grid.x(j) - g.mean_x;
        psi.amps[j] = std::exp(-width * d * d + cplx(0.0, g.mean_p * d / hbar));
    }
    psi.normalize();
    return psi;
}

PositionGrid default_position_grid(const SystemSpec& sys, const PhaseState& start, std::size_t n,
                                   double min_half_width)
{
    const double lam = std::abs(drive_amplitude(sys));
    auto v_eff = [&](double x) { return potential(sys, x, 0.0) - drive_amplitude(sys) * x - lam * std::abs(x); };
    const double energy = start.p * start.p / (2.0 * sys.mass()) + potential(sys, start.x, 0.0) -
                          drive_amplitude(sys) * start.x + lam * std::abs(start.x);
    auto confined = [&](double r) { return v_eff(r) > energy && v_eff(-r) > energy; };

    double hi = std::max(std::abs(start.x), 1e-12);
    int guard = 0;
    while (!confined(hi) && guard++ < 200) {
        hi *= 2.0;
    }
    // Outermost radius where the particle can still reach.
    double radius = std::abs(start.x);
    const int scan = 4096;
    for (int i = 0; i <= scan; ++i) {
        const double r = std::abs(start.x) + (hi - std::abs(start.x)) * i / scan;
        if (!confined(r)) {
            radius = r;
        }
    }
    const double half = std::max(3.0 * radius, min_half_width);
    return PositionGrid::span(-half, half, n);
}

double required_grid_points(double x_half, double p_max, double hbar)
{
    return 2.0 * x_half * p_max / (constants::pi * hbar);
}

// ---------------------------------------------------------------------------

SsePropagator::SsePropagator(const PositionGrid& grid, double hbar, double mass)
    : grid_(grid), hbar_(hbar), mass_(mass), buf_(grid.n)
{
    if (!is_power_of_two(grid.n)) {
        throw std::invalid_argument("SsePropagator: grid size must be a power of two");
    }
    if (!(hbar > 0.0) || !(mass > 0.0)) {
        throw std::invalid_argument("SsePropagator: hbar and mass must be positive");
    }
    const int n = static_cast<int>(grid.n);
    forward_ = FftPlan(buf_, n, 1, 1, n, FFTW_FORWARD);
    backward_ = FftPlan(buf_, n, 1, 1, n, FFTW_BACKWARD);
}

void SsePropagator::to_buffer(const WaveFunction& psi) const
{
    if (psi.amps.size() != grid_.n) {
        throw std::invalid_argument("SsePropagator: wavefunction does not match the grid");
    }
    std::copy(psi.amps.begin(), psi.amps.end(), buf_.data());
}

void SsePropagator::from_buffer(WaveFunction& psi) const
{
    std::copy(buf_.data(), buf_.data() + grid_.n, psi.amps.begin());
}

void SsePropagator::apply_potential_half(const SystemSpec& sys, double t, double dt) const
{
    const double phase_scale = -0.5 * dt / hbar_;
    for (std::size_t j = 0; j < grid_.n; ++j) {
        buf_[j] *= std::polar(1.0, phase_scale * potential(sys, grid_.x(j), t));
    }
}

void SsePropagator::check_grid(const WaveFunction& psi) const
{
    for (const auto& a : psi.amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw NumericalHalt(kModule, "non-finite amplitude");
        }
    }
    const double edge = psi.edge_probability(0.05);
    if (edge >= 1e-8) {
        std::ostringstream msg;
        msg << "boundary leakage: probability " << edge
            << " within 5% of the grid edges (>= 1e-8); enlarge the grid";
        throw NumericalHalt(kModule, msg.str());
    }
}

void SsePropagator::step(const SystemSpec& sys, WaveFunction& psi, double t, double dt,
                         const MeasurementConfig& meas, NoiseSource& noise)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("SsePropagator::step: dt must be positive");
    }
    if (meas.k < 0.0) {
        throw std::invalid_argument("SsePropagator::step: k must be >= 0");
    }

    if (meas.k > 0.0) {
        const auto pm = position_moments(psi);
        const double strength = meas.k * pm.var * dt;
        if (strength > 0.1) {
            std::ostringstream msg;
            msg << "measurement step too large: k var_x dt = " << strength << " > 0.1; reduce dt";
            throw NumericalHalt(kModule, msg.str());
        }
        const double dW = noise.increment(dt);
        const double gain = std::sqrt(2.0 * meas.k) * dW;
        const double damp = 2.0 * meas.k * dt;
        for (std::size_t j = 0; j < grid_.n; ++j) {
            const double d = grid_.x(j) - pm.mean;
            psi.amps[j] *= std::exp(gain * d - damp * d * d);
        }
        psi.normalize();
    }

    if (kinetic_dt_ != dt) {
        kinetic_.resize(grid_.n);
        for (std::size_t q = 0; q < grid_.n; ++q) {
            const double kq = grid_.wavenumber(q);
            kinetic_[q] = std::polar(1.0 / static_cast<double>(grid_.n), -hbar_ * kq * kq * dt / (2.0 * mass_));
        }
        kinetic_dt_ = dt;
    }

    const double norm_before = psi.norm();
    to_buffer(psi);
    apply_potential_half(sys, t, dt);
    forward_.execute();
    for (std::size_t q = 0; q < grid_.n; ++q) {
        buf_[q] *= kinetic_[q];
    }
    backward_.execute();
    apply_potential_half(sys, t + dt, dt);
    from_buffer(psi);

    last_drift_ = std::abs(psi.norm() - norm_before);
    if (!(last_drift_ <= 1e-6)) {
        std::ostringstream msg;
        msg << "norm drift " << last_drift_ << " in the Hamiltonian sub-step exceeds 1e-6";
        throw NumericalHalt(kModule, msg.str());
    }
    check_grid(psi);
    psi.normalize();
}

std::vector<double> SsePropagator::momentum_density(const WaveFunction& psi) const
{
    to_buffer(psi);
    forward_.execute();
    const double dp = 2.0 * constants::pi * hbar_ / grid_.length();
    std::vector<double> out(grid_.n);
    double total = 0.0;
    for (std::size_t q = 0; q < grid_.n; ++q) {
        out[q] = std::norm(buf_[q]);
        total += out[q];
    }
    for (auto& v : out) {
        v /= total * dp;
    }
    return out;
}

GaussianState SsePropagator::moments(const WaveFunction& psi) const
{
    const auto pm = position_moments(psi);

    to_buffer(psi);
    forward_.execute();
    double w0 = 0.0;
    double w1 = 0.0;
    for (std::size_t q = 0; q < grid_.n; ++q) {
        const double w = std::norm(buf_[q]);
        w0 += w;
        w1 += w * hbar_ * grid_.wavenumber(q);
    }
    const double mean_p = w1 / w0;
    double var_p = 0.0;
    for (std::size_t q = 0; q < grid_.n; ++q) {
        const double d = hbar_ * grid_.wavenumber(q) - mean_p;
        var_p += std::norm(buf_[q]) * d * d;
        buf_[q] *= d / static_cast<double>(grid_.n);
    }
    var_p /= w0;
    backward_.execute(); // buf = (p - <p>) psi
    double cross = 0.0;
    double n0 = 0.0;
    for (std::size_t j = 0; j < grid_.n; ++j) {
        cross += (std::conj(psi.amps[j]) * (grid_.x(j) - pm.mean) * buf_[j]).real();
        n0 += std::norm(psi.amps[j]);
    }
    return {pm.mean, mean_p, pm.var, var_p, cross / n0};
}

double SsePropagator::energy(const SystemSpec& sys, const WaveFunction& psi, double t) const
{
    const auto g = moments(psi);
    double pot = 0.0;
    double n0 = 0.0;
    for (std::size_t j = 0; j < grid_.n; ++j) {
        const double rho = std::norm(psi.amps[j]);
        pot += rho * potential(sys, grid_.x(j), t);
        n0 += rho;
    }
    return (g.var_p + g.mean_p * g.mean_p) / (2.0 * mass_) + pot / n0;
}

void SsePropagator::displace(WaveFunction& psi, double dx, double dp) const
{
    to_buffer(psi);
    forward_.execute();
    for (std::size_t q = 0; q < grid_.n; ++q) {
        buf_[q] *= std::polar(1.0 / static_cast<double>(grid_.n), -grid_.wavenumber(q) * dx);
    }
    backward_.execute();
    for (std::size_t j = 0; j < grid_.n; ++j) {
        buf_[j] *= std::polar(1.0, dp * grid_.x(j) / hbar_);
    }
    from_buffer(psi);
    psi.normalize();
}

WaveFunction step_sse(const SystemSpec& sys, const WaveFunction& psi, double t, double dt,
                      const MeasurementConfig& meas, double hbar, NoiseSource& noise)
{
    SsePropagator prop(psi.grid, hbar, sys.mass());
    WaveFunction out = psi;
    prop.step(sys, out, t, dt, meas, noise);
    return out;
}

GaussianState moments(const WaveFunction& psi, double hbar)
{
    // Mass is irrelevant for moments.
    return SsePropagator(psi.grid, hbar, 1.0).moments(psi);
}

} // namespace qtc
