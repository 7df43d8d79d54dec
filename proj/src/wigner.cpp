#include "qtc/wigner.hpp"

#include "qtc/errors.hpp"
#include "qtc/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtc {
namespace {

constexpr const char* kModule = "quantum-trajectory";

// Signed shift index for FFT slot s of an M-point transform.
long signed_index(std::size_t s, std::size_t m)
{
    return s < m / 2 ? static_cast<long>(s) : static_cast<long>(s) - static_cast<long>(m);
}

double parity(std::size_t s) { return (s & 1U) ? -1.0 : 1.0; }

} // namespace

double WignerGrid::total() const
{
    double s = 0.0;
    for (double v : values) {
        s += v;
    }
    return s * x.dx * p.dp;
}

double WignerGrid::min() const
{
    return *std::min_element(values.begin(), values.end());
}

std::vector<double> WignerGrid::x_marginal() const
{
    std::vector<double> out(x.n, 0.0);
    for (std::size_t j = 0; j < x.n; ++j) {
        for (std::size_t l = 0; l < p.m; ++l) {
            out[j] += at(j, l);
        }
        out[j] *= p.dp;
    }
    return out;
}

std::vector<double> WignerGrid::p_marginal() const
{
    std::vector<double> out(p.m, 0.0);
    for (std::size_t j = 0; j < x.n; ++j) {
        for (std::size_t l = 0; l < p.m; ++l) {
            out[l] += at(j, l);
        }
    }
    for (auto& v : out) {
        v *= x.dx;
    }
    return out;
}

WignerGrid wigner_transform(const WaveFunction& psi, std::size_t p_count, double hbar, std::size_t x_stride)
{
    const auto& g = psi.grid;
    const std::size_t n = g.n;
    const std::size_t m = p_count;
    if (m < 2 || m % 2 != 0 || m > n) {
        throw std::invalid_argument("wigner_transform: p_count must be even and in [2, N]");
    }
    if (x_stride == 0 || n % x_stride != 0) {
        throw std::invalid_argument("wigner_transform: x_stride must divide the grid size");
    }
    const double dp = constants::pi * hbar / (static_cast<double>(m) * g.dx);

    WignerGrid W;
    W.x = PositionGrid{g.x_min, g.dx * static_cast<double>(x_stride), n / x_stride};
    W.p = MomentumGrid{-static_cast<double>(m / 2) * dp, dp, m};
    W.values.assign(W.x.n * m, 0.0);

    FftwBuffer row(m);
    FftPlan plan(row, static_cast<int>(m), 1, 1, static_cast<int>(m), FFTW_FORWARD);
    const double scale = g.dx / (constants::pi * hbar);
    const long nn = static_cast<long>(n);

    for (std::size_t jr = 0; jr < W.x.n; ++jr) {
        const long j = static_cast<long>(jr * x_stride);
        for (std::size_t s = 0; s < m; ++s) {
            const long k = signed_index(s, m);
            const long plus = j + k;
            const long minus = j - k;
            if (plus < 0 || plus >= nn || minus < 0 || minus >= nn) {
                row[s] = 0.0;
            } else {
                row[s] = parity(s) * psi.amps[static_cast<std::size_t>(plus)] *
                         std::conj(psi.amps[static_cast<std::size_t>(minus)]);
            }
        }
        plan.execute();
        for (std::size_t l = 0; l < m; ++l) {
            W.at(jr, l) = scale * row[l].real();
        }
    }
    return W;
}

GaussianState moments(const WignerGrid& W)
{
    double n0 = 0.0, sx = 0.0, sp = 0.0;
    for (std::size_t j = 0; j < W.x.n; ++j) {
        for (std::size_t l = 0; l < W.p.m; ++l) {
            const double w = W.at(j, l);
            n0 += w;
            sx += w * W.x.x(j);
            sp += w * W.p.p(l);
        }
    }
    const double mx = sx / n0;
    const double mp = sp / n0;
    double vx = 0.0, vp = 0.0, c = 0.0;
    for (std::size_t j = 0; j < W.x.n; ++j) {
        const double dx = W.x.x(j) - mx;
        for (std::size_t l = 0; l < W.p.m; ++l) {
            const double w = W.at(j, l);
            const double dp = W.p.p(l) - mp;
            vx += w * dx * dx;
            vp += w * dp * dp;
            c += w * dx * dp;
        }
    }
    return {mx, mp, vx / n0, vp / n0, c / n0};
}

double l1_distance(const WignerGrid& a, const WignerGrid& b)
{
    if (a.values.size() != b.values.size() || a.x.n != b.x.n || a.p.m != b.p.m) {
        throw std::invalid_argument("l1_distance: grids differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        s += std::abs(a.values[i] - b.values[i]);
    }
    return s * a.x.dx * a.p.dp;
}

// ---------------------------------------------------------------------------

WignerPropagator::WignerPropagator(const PositionGrid& x, const MomentumGrid& p, double hbar, double mass)
    : xg_(x), pg_(p), hbar_(hbar), mass_(mass), buf_(x.n * p.m)
{
    if (x.n < 4 || (x.n & (x.n - 1)) != 0) {
        throw std::invalid_argument("WignerPropagator: x grid size must be a power of two");
    }
    if (p.m < 2 || p.m % 2 != 0) {
        throw std::invalid_argument("WignerPropagator: p grid size must be even");
    }
    const double expected = constants::pi * hbar / (static_cast<double>(p.m) * x.dx);
    if (std::abs(p.dp - expected) > 1e-9 * expected) {
        throw std::invalid_argument("WignerPropagator: dp must equal pi hbar / (M dx)");
    }
    const int n = static_cast<int>(x.n);
    const int m = static_cast<int>(p.m);
    along_p_fwd_ = FftPlan(buf_, m, n, 1, m, FFTW_FORWARD);
    along_p_bwd_ = FftPlan(buf_, m, n, 1, m, FFTW_BACKWARD);
    along_x_fwd_ = FftPlan(buf_, n, m, m, 1, FFTW_FORWARD);
    along_x_bwd_ = FftPlan(buf_, n, m, m, 1, FFTW_BACKWARD);
}

void WignerPropagator::load(const WignerGrid& W) const
{
    if (W.x.n != xg_.n || W.p.m != pg_.m) {
        throw std::invalid_argument("WignerPropagator: grid mismatch");
    }
    for (std::size_t i = 0; i < W.values.size(); ++i) {
        buf_[i] = W.values[i];
    }
}

void WignerPropagator::store(WignerGrid& W) const
{
    for (std::size_t i = 0; i < W.values.size(); ++i) {
        W.values[i] = buf_[i].real();
    }
}

void WignerPropagator::to_mixed() const
{
    along_p_bwd_.execute();
    for (std::size_t j = 0; j < xg_.n; ++j) {
        for (std::size_t s = 0; s < pg_.m; ++s) {
            buf_[j * pg_.m + s] *= pg_.dp * parity(s);
        }
    }
}

void WignerPropagator::to_wigner() const
{
    const double scale = 1.0 / (static_cast<double>(pg_.m) * pg_.dp);
    for (std::size_t j = 0; j < xg_.n; ++j) {
        for (std::size_t s = 0; s < pg_.m; ++s) {
            buf_[j * pg_.m + s] *= scale * parity(s);
        }
    }
    along_p_fwd_.execute();
}

void WignerPropagator::check(const WignerGrid& W) const
{
    for (double v : W.values) {
        if (!std::isfinite(v)) {
            throw NumericalHalt(kModule, "non-finite Wigner value");
        }
    }
    const auto marg = W.x_marginal();
    const auto edge = std::max<std::size_t>(1, xg_.n / 20);
    double s = 0.0;
    for (std::size_t j = 0; j < edge; ++j) {
        s += std::abs(marg[j]) + std::abs(marg[xg_.n - 1 - j]);
    }
    if (s * xg_.dx >= 1e-8) {
        std::ostringstream msg;
        msg << "boundary leakage in Wigner grid: edge probability " << s * xg_.dx;
        throw NumericalHalt(kModule, msg.str());
    }
}

void WignerPropagator::step(const SystemSpec& sys, WignerGrid& W, double t, double dt,
                            const MeasurementConfig& meas, NoiseSource& noise)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("WignerPropagator::step: dt must be positive");
    }
    if (meas.k < 0.0) {
        throw std::invalid_argument("WignerPropagator::step: k must be >= 0");
    }
    const std::size_t n = xg_.n;
    const std::size_t m = pg_.m;

    double centre = 0.0;
    double dW = 0.0;
    const double k = meas.k;
    if (k > 0.0) {
        const auto g = moments(W);
        if (k * g.var_x * dt > 0.1) {
            std::ostringstream msg;
            msg << "measurement step too large: k var_x dt = " << k * g.var_x * dt << " > 0.1";
            throw NumericalHalt(kModule, msg.str());
        }
        centre = g.mean_x;
        dW = noise.increment(dt);
    }

    auto potential_phase = [&](double time) {
        for (std::size_t j = 0; j < n; ++j) {
            const double x = xg_.x(j);
            const double v1 = -force(sys, x, time);
            const double v3 = force_derivatives(sys, x, time).d3V;
            for (std::size_t s = 0; s < m; ++s) {
                const double y = 2.0 * xg_.dx * static_cast<double>(signed_index(s, m));
                const double phase = -0.5 * dt / hbar_ * (y * v1 + y * y * y * v3 / 24.0);
                buf_[j * m + s] *= std::polar(1.0, phase);
            }
        }
    };

    load(W);
    to_mixed();
    if (k > 0.0) {
        const double gain = std::sqrt(8.0 * k) * dW;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = xg_.x(j) - centre;
            const double row = gain * d - 4.0 * k * dt * d * d;
            for (std::size_t s = 0; s < m; ++s) {
                const double y = 2.0 * xg_.dx * static_cast<double>(signed_index(s, m));
                buf_[j * m + s] *= std::exp(row - k * dt * y * y);
            }
        }
    }
    potential_phase(t);
    to_wigner();

    along_x_fwd_.execute();
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t q = 0; q < n; ++q) {
        const double kx = xg_.wavenumber(q);
        for (std::size_t l = 0; l < m; ++l) {
            buf_[q * m + l] *= std::polar(inv_n, -kx * pg_.p(l) * dt / mass_);
        }
    }
    along_x_bwd_.execute();

    to_mixed();
    potential_phase(t + dt);
    to_wigner();
    store(W);

    const double total = W.total();
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw NumericalHalt(kModule, "Wigner normalization lost");
    }
    for (auto& v : W.values) {
        v /= total;
    }
    check(W);
}

void WignerPropagator::displace(WignerGrid& W, double dx, double dp) const
{
    const std::size_t n = xg_.n;
    const std::size_t m = pg_.m;
    load(W);
    along_x_fwd_.execute();
    for (std::size_t q = 0; q < n; ++q) {
        const auto ph = std::polar(1.0 / static_cast<double>(n), -xg_.wavenumber(q) * dx);
        for (std::size_t l = 0; l < m; ++l) {
            buf_[q * m + l] *= ph;
        }
    }
    along_x_bwd_.execute();
    to_mixed();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t s = 0; s < m; ++s) {
            const double y = 2.0 * xg_.dx * static_cast<double>(signed_index(s, m));
            buf_[j * m + s] *= std::polar(1.0, dp * y / hbar_);
        }
    }
    to_wigner();
    store(W);
}

WignerGrid step_wigner(const SystemSpec& sys, const WignerGrid& W, double t, double dt,
                       const MeasurementConfig& meas, double hbar, NoiseSource& noise)
{
    WignerPropagator prop(W.x, W.p, hbar, sys.mass());
    WignerGrid out = W;
    prop.step(sys, out, t, dt, meas, noise);
    return out;
}

} // namespace qtc
