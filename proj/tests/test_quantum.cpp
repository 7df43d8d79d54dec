#include "oracles.hpp"

#include "qtc/closure.hpp"
#include "qtc/errors.hpp"
#include "qtc/runner.hpp"
#include "qtc/stats.hpp"
#include "qtc/wavefunction.hpp"
#include "qtc/wigner.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <complex>
#include <random>

using namespace qtc;

namespace {

// Reduced-action Duffing (x0 = 0.1 um, p0 = 2.6 pg um/s).
const SystemSpec reduced_duffing = SystemSpec::duffing(1.0, 1.4644970414201186, 0.7322485207100594,
                                                       0.44378698224852076, 2.307692307692308);
const double reduced_period = 2.0 * oracle::pi / 2.307692307692308;

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double w = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        w = std::max(w, std::abs(a[i] - b[i]));
    }
    return w;
}

double max_abs(const std::vector<double>& a)
{
    double w = 0.0;
    for (double v : a) {
        w = std::max(w, std::abs(v));
    }
    return w;
}

// |phi(p)|^2 by direct summation, normalized as a continuum density.
std::vector<double> direct_momentum_density(const WaveFunction& psi, const MomentumGrid& pg, double hbar)
{
    std::vector<double> out(pg.m);
    for (std::size_t l = 0; l < pg.m; ++l) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < psi.grid.n; ++j) {
            s += psi.amps[j] * std::polar(1.0, -pg.p(l) * psi.grid.x(j) / hbar);
        }
        out[l] = std::norm(s) * psi.grid.dx * psi.grid.dx / (2.0 * oracle::pi * hbar);
    }
    return out;
}

WaveFunction random_state(const PositionGrid& grid, double hbar, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    WaveFunction psi{grid, std::vector<cplx>(grid.n, 0.0)};
    for (int c = 0; c < 3; ++c) {
        const double vx = 0.05 + 0.05 * (u(rng) + 1.0);
        const auto g = gaussian_wavepacket(grid, {u(rng), 3.0 * u(rng), vx, 0.0, 0.3 * hbar * u(rng)}, hbar);
        const cplx w = std::polar(1.0 + u(rng), oracle::pi * u(rng));
        for (std::size_t j = 0; j < grid.n; ++j) {
            psi.amps[j] += w * g.amps[j];
        }
    }
    psi.normalize();
    return psi;
}

} // namespace

TEST_CASE("grid and wave packet basics")
{
    CHECK_THROWS_AS(PositionGrid::span(-1.0, 1.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(PositionGrid::span(1.0, -1.0, 128), std::invalid_argument);
    const auto grid = PositionGrid::span(-8.0, 8.0, 256);
    CHECK(grid.dx == doctest::Approx(16.0 / 256.0));
    CHECK(grid.max_momentum(1.0) == doctest::Approx(oracle::pi / grid.dx));
    CHECK(grid.wavenumber(1) == doctest::Approx(2.0 * oracle::pi / 16.0));
    CHECK(grid.wavenumber(255) == doctest::Approx(-2.0 * oracle::pi / 16.0));

    const auto psi = gaussian_wavepacket(grid, {0.5, 0.0, 0.3, 0.0, 0.0}, 1.0);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psi.edge_probability() < 1e-12);
}

TEST_CASE("moments of analytic states")
{
    const double hbar = 0.05;
    const auto grid = PositionGrid::span(-4.0, 4.0, 512);

    SUBCASE("minimum-uncertainty Gaussian at rest")
    {
        const auto psi = gaussian_wavepacket(grid, {0.3, 0.0, 0.02, 0.0, 0.0}, hbar);
        const auto m = moments(psi, hbar);
        CHECK(m.mean_x == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(std::abs(m.mean_p) < 1e-12);
        CHECK(std::abs(m.cov_xp) < 1e-12);
        CHECK(m.var_x == doctest::Approx(0.02).epsilon(1e-10));
        CHECK(m.var_x * m.var_p == doctest::Approx(hbar * hbar / 4.0).epsilon(1e-10));
    }

    SUBCASE("boosted and chirped Gaussian")
    {
        const auto psi = gaussian_wavepacket(grid, {-0.5, 1.7, 0.03, 0.0, 0.4 * hbar}, hbar);
        const auto m = moments(psi, hbar);
        CHECK(std::abs(m.mean_p - 1.7) < 1e-8);
        CHECK(m.cov_xp == doctest::Approx(0.4 * hbar).epsilon(1e-9));
        CHECK(m.uncertainty_product() == doctest::Approx(hbar * hbar / 4.0).epsilon(1e-9));
        CHECK(m.var_p == doctest::Approx((hbar * hbar / 4.0 + 0.16 * hbar * hbar) / 0.03).epsilon(1e-9));
    }

    SUBCASE("Heisenberg bound on random superpositions")
    {
        std::mt19937_64 rng(8);
        for (int i = 0; i < 50; ++i) {
            const auto m = moments(random_state(grid, hbar, rng), hbar);
            CHECK(m.uncertainty_product() >= hbar * hbar / 4.0 * (1.0 - 1e-6));
        }
    }
}

TEST_CASE("Wigner transform")
{
    const double hbar = 0.05;
    const auto grid = PositionGrid::span(-4.0, 4.0, 512);

    SUBCASE("Gaussian maps to the analytic Gaussian Wigner function")
    {
        const double s2 = 0.04;
        const auto psi = gaussian_wavepacket(grid, {0.2, 0.5, s2, 0.0, 0.0}, hbar);
        const auto W = wigner_transform(psi, 512, hbar);
        CHECK(W.x.n == 512);
        CHECK(W.p.m == 512);
        double worst = 0.0;
        for (std::size_t j = 0; j < W.x.n; ++j) {
            for (std::size_t l = 0; l < W.p.m; ++l) {
                worst = std::max(worst, std::abs(W.at(j, l) - oracle::gaussian_wigner(W.x.x(j), W.p.p(l), 0.2, 0.5,
                                                                                        s2, hbar)));
            }
        }
        CHECK(worst * oracle::pi * hbar < 1e-9);
        const auto m = moments(W);
        CHECK(m.var_x == doctest::Approx(s2).epsilon(1e-8));
        CHECK(m.var_p == doctest::Approx(hbar * hbar / (4.0 * s2)).epsilon(1e-8));
        CHECK(std::abs(m.cov_xp) < 1e-10);
        CHECK(W.total() == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("marginals and moments of arbitrary states")
    {
        std::mt19937_64 rng(21);
        for (int i = 0; i < 5; ++i) {
            const auto psi = random_state(grid, hbar, rng);
            const auto W = wigner_transform(psi, 512, hbar);
            const auto rho = psi.density();
            const auto xm = W.x_marginal();
            CHECK(max_abs_diff(xm, rho) < 1e-6 * max_abs(rho));
            const auto pd = direct_momentum_density(psi, W.p, hbar);
            CHECK(max_abs_diff(W.p_marginal(), pd) < 1e-6 * max_abs(pd));
            CHECK(std::abs(W.total() - 1.0) < 1e-6);
            CHECK(W.min() >= -1.0 / (oracle::pi * hbar) * (1.0 + 1e-9));

            const auto a = moments(psi, hbar);
            const auto b = moments(W);
            CHECK(std::abs(a.mean_x - b.mean_x) < 1e-6);
            CHECK(std::abs(a.mean_p - b.mean_p) < 1e-6);
            CHECK(std::abs(a.var_x - b.var_x) < 1e-6 * a.var_x);
            CHECK(std::abs(a.var_p - b.var_p) < 1e-6 * a.var_p);
            CHECK(std::abs(a.cov_xp - b.cov_xp) < 1e-6 * std::sqrt(a.var_x * a.var_p));
        }
    }

    SUBCASE("cat state fringes")
    {
        const double a = 1.0, s2 = 0.01;
        auto left = gaussian_wavepacket(grid, {-a, 0.0, s2, 0.0, 0.0}, hbar);
        const auto right = gaussian_wavepacket(grid, {a, 0.0, s2, 0.0, 0.0}, hbar);
        for (std::size_t j = 0; j < grid.n; ++j) {
            left.amps[j] += right.amps[j];
        }
        left.normalize();
        const auto W = wigner_transform(left, 512, hbar);
        CHECK(W.min() < -0.5 / (oracle::pi * hbar));
        // Analytic W(0, p) = exp(-2 s2 p^2 / hbar^2) cos(2 p a / hbar) / (pi hbar) up to the
        // overlap exp(-a^2 / 2 s2) of the two packets.
        const std::size_t j0 = 256;
        REQUIRE(std::abs(W.x.x(j0)) < 1e-12);
        double worst = 0.0;
        std::vector<double> zeros;
        for (std::size_t l = 0; l < W.p.m; ++l) {
            const double p = W.p.p(l);
            const double ref = std::exp(-2.0 * s2 * p * p / (hbar * hbar)) * std::cos(2.0 * p * a / hbar) /
                               (oracle::pi * hbar);
            worst = std::max(worst, std::abs(W.at(j0, l) - ref));
            if (l > 0 && W.at(j0, l - 1) * W.at(j0, l) < 0.0 && std::abs(p) < 0.5) {
                zeros.push_back(p);
            }
        }
        CHECK(worst * oracle::pi * hbar < 1e-8);
        REQUIRE(zeros.size() >= 4);
        // Consecutive sign changes are half a fringe wavelength apart.
        const double spacing = (zeros.back() - zeros.front()) / static_cast<double>(zeros.size() - 1);
        CHECK(2.0 * spacing == doctest::Approx(oracle::pi * hbar / a).epsilon(0.02));
    }

    SUBCASE("preconditions")
    {
        const auto psi = gaussian_wavepacket(grid, {0.0, 0.0, 0.05, 0.0, 0.0}, hbar);
        CHECK_THROWS_AS(wigner_transform(psi, 513, hbar), std::invalid_argument);
        CHECK_THROWS_AS(wigner_transform(psi, 1024, hbar), std::invalid_argument);
        CHECK_THROWS_AS(wigner_transform(psi, 128, hbar, 3), std::invalid_argument);
        const auto W = wigner_transform(psi, 128, hbar, 4);
        CHECK(W.x.n == 128);
        CHECK(W.x.dx == doctest::Approx(4.0 * grid.dx));
    }
}

TEST_CASE("unobserved Schroedinger evolution")
{
    SUBCASE("harmonic ground state is stationary over 1e5 steps")
    {
        const double hbar = 1.0;
        const auto sys = SystemSpec::harmonic(1.0, 1.0);
        const auto grid = PositionGrid::span(-10.0, 10.0, 256);
        auto psi = gaussian_wavepacket(grid, {0.0, 0.0, 0.5, 0.0, 0.0}, hbar);
        const auto rho0 = psi.density();
        SsePropagator prop(grid, hbar, 1.0);
        NoiseSource noise(1);
        double worst_drift = 0.0;
        for (int i = 0; i < 100000; ++i) {
            prop.step(sys, psi, i * 5e-4, 5e-4, {}, noise);
            worst_drift = std::max(worst_drift, prop.last_unitary_norm_drift());
        }
        CHECK(max_abs_diff(psi.density(), rho0) < 1e-8);
        CHECK(worst_drift < 1e-6);
    }

    SUBCASE("undriven double well conserves energy over 1e5 steps")
    {
        const double hbar = 0.05;
        const auto sys = SystemSpec::double_well(1.0, 1.4644970414201186, 0.7322485207100594);
        const auto grid = PositionGrid::span(-3.0, 3.0, 512);
        // Small-oscillation frequency in a well: sqrt(4A/m).
        const double w_well = std::sqrt(4.0 * 1.4644970414201186);
        auto psi = gaussian_wavepacket(grid, {-1.0, 0.3, hbar / (2.0 * w_well), 0.0, 0.0}, hbar);
        SsePropagator prop(grid, hbar, 1.0);
        const double e0 = prop.energy(sys, psi, 0.0);
        const double dt = 10.0 * 2.0 * oracle::pi / w_well / 1e5;
        NoiseSource noise(1);
        double worst = 0.0;
        for (int i = 0; i < 100000; ++i) {
            prop.step(sys, psi, i * dt, dt, {}, noise);
            if (i % 100 == 99) {
                worst = std::max(worst, std::abs(prop.energy(sys, psi, 0.0) - e0));
            }
        }
        CHECK(worst / std::abs(e0) < 1e-6);
    }

    SUBCASE("Ehrenfest: harmonic centroid follows the classical orbit")
    {
        const double hbar = 0.02;
        const auto sys = SystemSpec::harmonic(1.0, 1.0);
        // The packet breathes to var_p = 0.05, so the momentum band must reach past |p| = 2.7.
        const auto grid = PositionGrid::span(-6.0, 6.0, 1024);
        auto psi = gaussian_wavepacket(grid, {1.5, -0.5, 0.05, 0.0, 0.0}, hbar);
        SsePropagator prop(grid, hbar, 1.0);
        NoiseSource noise(1);
        const int spp = 20000;
        const double dt = 2.0 * oracle::pi / spp;
        const double amp = std::hypot(1.5, 0.5);
        double worst = 0.0;
        for (int i = 0; i < 10 * spp; ++i) {
            prop.step(sys, psi, i * dt, dt, {}, noise);
            if (i % 50 == 49) {
                const auto m = prop.moments(psi);
                const auto c = oracle::harmonic_solution(1.0, 1.0, 1.5, -0.5, (i + 1) * dt);
                worst = std::max({worst, std::abs(m.mean_x - c.x), std::abs(m.mean_p - c.p)});
            }
        }
        CHECK(worst / amp < 1e-6);
    }
}

TEST_CASE("measured evolution")
{
    const double hbar = 0.01;
    const MeasurementConfig k{400.0};
    const auto grid = PositionGrid::span(-4.5, 4.5, 2048);
    const int spp = 2000;
    const double dt = reduced_period / spp;
    const auto start = localized_state(reduced_duffing, {-0.98, 1.0}, 0.0, k, hbar).value();

    SUBCASE("norm and uncertainty hold at every step")
    {
        auto psi = gaussian_wavepacket(grid, start, hbar);
        SsePropagator prop(grid, hbar, 1.0);
        NoiseSource noise(4);
        double worst_drift = 0.0, worst_det = 1e300;
        for (int i = 0; i < spp; ++i) {
            prop.step(reduced_duffing, psi, i * dt, dt, k, noise);
            worst_drift = std::max(worst_drift, prop.last_unitary_norm_drift());
            worst_det = std::min(worst_det, prop.moments(psi).uncertainty_product());
            REQUIRE(std::abs(psi.norm() - 1.0) < 1e-12);
        }
        CHECK(worst_drift < 1e-6);
        CHECK(worst_det >= hbar * hbar / 4.0 - 1e-6 * hbar * hbar);
    }

    SUBCASE("moments track the Gaussian closure driven by the same noise")
    {
        SseRunner sse(reduced_duffing, gaussian_wavepacket(grid, start, hbar), 0.0, dt, k, hbar, NoiseSource(7, 0));
        ClosureRunner clo(reduced_duffing, start, 0.0, dt, k, hbar, NoiseSource(7, 0));
        std::array<double, 5> worst{}, scale{};
        for (int i = 0; i < spp; ++i) {
            sse.step();
            clo.step();
            const auto a = sse.moments();
            const auto b = clo.moments();
            const std::array<double, 5> va{a.mean_x, a.mean_p, a.var_x, a.var_p, a.cov_xp};
            const std::array<double, 5> vb{b.mean_x, b.mean_p, b.var_x, b.var_p, b.cov_xp};
            for (int c = 0; c < 5; ++c) {
                worst[c] = std::max(worst[c], std::abs(va[c] - vb[c]));
                scale[c] = std::max(scale[c], std::abs(vb[c]));
            }
        }
        for (int c = 0; c < 5; ++c) {
            INFO("moment " << c);
            CHECK(worst[c] / scale[c] < 0.05);
        }
    }

    SUBCASE("short-time moment drift matches the Ito drift of the moment equations")
    {
        // Mean one-step increments at h, h/2 and h/4. Richardson extrapolation
        // removes the O(h) bias; the spread of two extrapolations estimates
        // what remains. For a Gaussian state Cov(p, F) = C <F'> and
        // Cov(x, F) = var_x <F'>, so with <F'> in place of F'(<x>) the variance
        // equations are exact; for a linear force the two coincide.
        SsePropagator prop(grid, hbar, 1.0);
        for (const auto& sys : {SystemSpec::harmonic(1.0, 1.2), reduced_duffing}) {
            auto g0 = start;
            g0.var_x *= 2.0;
            g0.cov_xp = 0.0;
            g0.var_p = hbar * hbar / (4.0 * g0.var_x);
            const auto psi0 = gaussian_wavepacket(grid, g0, hbar);
            const auto a0 = prop.moments(psi0);
            const auto d = force_derivatives(sys, a0.mean_x, 0.0);
            // F is at most cubic: <F'> = F'(<x>) + var_x F'''/2.
            double f3 = 0.0;
            if (const auto* m = std::get_if<Duffing>(&sys.model())) {
                f3 = -24.0 * m->B;
            }
            const double avg_dF = d.dF + 0.5 * a0.var_x * f3;
            const double kk = k.k;
            const std::array<double, 3> expect{
                2.0 * a0.cov_xp - 8.0 * kk * a0.var_x * a0.var_x,
                2.0 * hbar * hbar * kk - 8.0 * kk * a0.cov_xp * a0.cov_xp + 2.0 * avg_dF * a0.cov_xp,
                a0.var_p - 8.0 * kk * a0.var_x * a0.cov_xp + avg_dF * a0.var_x,
            };
            if (f3 == 0.0) {
                const auto rhs = closure_drift(sys, a0, 0.0, k, hbar);
                CHECK(rhs.var_x == doctest::Approx(expect[0]));
                CHECK(rhs.var_p == doctest::Approx(expect[1]));
                CHECK(rhs.cov_xp == doctest::Approx(expect[2]));
            }
            auto ensemble = [&](double h, std::uint64_t seed) {
                std::array<std::vector<double>, 3> inc;
                for (std::size_t r = 0; r < 1000; ++r) {
                    auto psi = psi0;
                    NoiseSource noise(seed, r);
                    prop.step(sys, psi, 0.0, h, k, noise);
                    const auto m = prop.moments(psi);
                    inc[0].push_back((m.var_x - a0.var_x) / h);
                    inc[1].push_back((m.var_p - a0.var_p) / h);
                    inc[2].push_back((m.cov_xp - a0.cov_xp) / h);
                }
                return inc;
            };
            const double h = dt / 8.0;
            const auto e1 = ensemble(h, 100);
            const auto e2 = ensemble(h / 2.0, 200);
            const auto e4 = ensemble(h / 4.0, 300);
            for (int c = 0; c < 3; ++c) {
                const double r12 = 2.0 * mean(e2[c]) - mean(e1[c]);
                const double r24 = 2.0 * mean(e4[c]) - mean(e2[c]);
                const double se = std::sqrt(4.0 * sample_variance(e4[c]) + sample_variance(e2[c])) / std::sqrt(1000.0);
                const double resid = std::abs(r24 - r12);
                INFO(sys.family() << " component " << c << ": estimate " << r24 << ", expected " << expect[c]
                                  << ", stderr " << se << ", residual " << resid);
                CHECK(std::abs(r24 - expect[c]) <= 3.0 * se + resid);
                CHECK(resid < 0.01 * std::abs(expect[c]));
            }
        }
    }

    SUBCASE("step size guard")
    {
        auto psi = gaussian_wavepacket(grid, {0.0, 0.0, 0.5, 0.0, 0.0}, hbar);
        SsePropagator prop(grid, hbar, 1.0);
        NoiseSource noise(1);
        CHECK_THROWS_AS(prop.step(reduced_duffing, psi, 0.0, 1.0, k, noise), NumericalHalt);
    }

    SUBCASE("boundary leakage halts")
    {
        const auto small = PositionGrid::span(-1.2, 1.2, 512);
        auto psi = gaussian_wavepacket(small, {-0.98, 1.0, 0.01, 0.0, 0.0}, hbar);
        SsePropagator prop(small, hbar, 1.0);
        NoiseSource noise(1);
        CHECK_THROWS_AS(
            {
                for (int i = 0; i < 10 * spp; ++i) {
                    prop.step(reduced_duffing, psi, i * dt, dt, {}, noise);
                }
            },
            NumericalHalt);
    }
}

TEST_CASE("Duffing delocalizes without measurement")
{
    const double hbar = 0.01;
    const auto grid = PositionGrid::span(-4.5, 4.5, 2048);
    const int spp = 2000;
    const double dt = reduced_period / spp;
    const GaussianState g{-0.98, 1.0, 1.77e-3, 0.0, 0.0};
    auto psi = gaussian_wavepacket(grid, g, hbar);
    SsePropagator prop(grid, hbar, 1.0);
    NoiseSource noise(1);
    const double v0 = prop.moments(psi).var_x;
    double grown = 0.0;
    for (int i = 0; i < 5 * spp; ++i) {
        prop.step(reduced_duffing, psi, i * dt, dt, {}, noise);
        grown = std::max(grown, prop.moments(psi).var_x / v0);
    }
    CHECK(grown >= 10.0);
    const auto W = wigner_transform(psi, 1024, hbar, 4);
    CHECK(W.min() < 0.0);
}

TEST_CASE("direct Wigner-grid evolution")
{
    SUBCASE("harmonic: rigid rotation")
    {
        const double hbar = 0.05;
        const auto sys = SystemSpec::harmonic(1.0, 1.0);
        const auto grid = PositionGrid::span(-4.0, 4.0, 256);
        const auto W0 = wigner_transform(gaussian_wavepacket(grid, {1.0, 0.0, 0.04, 0.0, 0.0}, hbar), 256, hbar);
        WignerPropagator prop(W0.x, W0.p, hbar, 1.0);
        auto W = W0;
        NoiseSource noise(1);
        const int n = 4000;
        const double dt = oracle::pi / 2.0 / n;
        for (int i = 0; i < n; ++i) {
            prop.step(sys, W, i * dt, dt, {}, noise);
        }
        // A quarter turn maps (x, p) -> (p, -x): the state is now centred at p = -1 with
        // var_p = 0.04 and var_x = hbar^2 / (4 * 0.04).
        auto ref = W;
        const double vx = hbar * hbar / (4.0 * 0.04);
        for (std::size_t j = 0; j < ref.x.n; ++j) {
            for (std::size_t l = 0; l < ref.p.m; ++l) {
                ref.at(j, l) = oracle::gaussian_wigner(ref.x.x(j), ref.p.p(l), 0.0, -1.0, vx, hbar);
            }
        }
        CHECK(l1_distance(W, ref) < 1e-4);
        CHECK(W.total() == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("quartic, k = 0: agrees with the transformed wavefunction")
    {
        const double hbar = 0.05;
        const auto grid = PositionGrid::span(-3.0, 3.0, 256);
        const auto g = GaussianState{-0.9, 0.6, 0.02, 0.0, 0.0};
        auto psi = gaussian_wavepacket(grid, g, hbar);
        auto W = wigner_transform(psi, 256, hbar);
        SsePropagator sp(grid, hbar, 1.0);
        WignerPropagator wp(W.x, W.p, hbar, 1.0);
        NoiseSource n1(1), n2(1);
        const double dt = reduced_period / 2000;
        for (int i = 0; i < 1000; ++i) {
            sp.step(reduced_duffing, psi, i * dt, dt, {}, n1);
            wp.step(reduced_duffing, W, i * dt, dt, {}, n2);
        }
        CHECK(l1_distance(W, wigner_transform(psi, 256, hbar)) < 1e-6);
    }

    SUBCASE("measured: same noise gives the same conditioned state")
    {
        const double hbar = 0.01;
        const MeasurementConfig k{400.0};
        const auto grid = PositionGrid::span(-2.5, 2.5, 512);
        const auto g = localized_state(reduced_duffing, {-0.98, 1.0}, 0.0, k, hbar).value();
        auto psi = gaussian_wavepacket(grid, g, hbar);
        auto W = wigner_transform(psi, 512, hbar);
        const auto W_start = W;
        SsePropagator sp(grid, hbar, 1.0);
        WignerPropagator wp(W.x, W.p, hbar, 1.0);
        NoiseSource n1(9, 0), n2(9, 0);
        const double dt = reduced_period / 2000;
        for (int i = 0; i < 100; ++i) {
            sp.step(reduced_duffing, psi, i * dt, dt, k, n1);
            wp.step(reduced_duffing, W, i * dt, dt, k, n2);
        }
        const double d = l1_distance(W, wigner_transform(psi, 512, hbar));
        CHECK(d < 0.05);
        CHECK(l1_distance(W, W_start) > 10.0 * d);
        CHECK(W.total() == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("grid mismatch rejected")
    {
        const auto grid = PositionGrid::span(-2.0, 2.0, 128);
        CHECK_THROWS_AS(WignerPropagator(grid, MomentumGrid{-1.0, 0.1, 128}, 0.01, 1.0), std::invalid_argument);
    }
}
