#include "oracles.hpp"

#include "qtc/classical.hpp"
#include "qtc/noise.hpp"
#include "qtc/scaling.hpp"
#include "qtc/stats.hpp"
#include "qtc/units.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

using namespace qtc;

TEST_CASE("hbar in canonical units matches the dimensional-analysis oracle")
{
    CHECK(constants::hbar == doctest::Approx(oracle::hbar_pg_um2_per_s()).epsilon(1e-9));
    CHECK(constants::hbar == doctest::Approx(1.054571817e-7).epsilon(1e-12));
    CHECK(UnitSystem::physical().hbar == constants::hbar);
    CHECK(UnitSystem::physical().is_physical());
    CHECK_THROWS_AS(UnitSystem::dimensionless(0.0), std::invalid_argument);
    CHECK_THROWS_AS(UnitSystem::dimensionless(-1.0), std::invalid_argument);
    CHECK(UnitSystem::dimensionless(0.01).hbar == 0.01);
}

TEST_CASE("paper parameter conversions")
{
    const auto m = UnitMode::physical;
    CHECK(to_canonical(Quantity::stiffness, 0.99, "pN/m", m) == doctest::Approx(990.0));
    const double A = to_canonical(Quantity::stiffness, 0.99, "pN/m", m);
    CHECK(A / to_canonical(Quantity::area, 0.02, "um^2", m) == doctest::Approx(49500.0));
    CHECK(to_canonical(Quantity::force, 0.03, "aN", m) == doctest::Approx(30.0));
    CHECK(to_canonical(Quantity::angular_frequency, 60.0, "rad/s", m) == 60.0);
    CHECK(to_canonical(Quantity::measurement_rate, 93.0, "pm^-2 s^-1", m) == doctest::Approx(9.3e13));
    CHECK(to_canonical(Quantity::length, -98.0, "nm", m) == doctest::Approx(-0.098));
    CHECK(to_canonical(Quantity::momentum, 324.0, "pg nm/s", m) == doctest::Approx(0.324));
    CHECK(to_canonical(Quantity::angular_frequency, 1.0, "Hz", m) == doctest::Approx(2.0 * oracle::pi));
    CHECK(to_canonical(Quantity::mass, 1.0, "kg", m) == 1e15);
}

TEST_CASE("unit round trips are exact to 1e-12 for every accepted unit")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mant(-10.0, 10.0);
    for (auto q : {Quantity::mass, Quantity::length, Quantity::area, Quantity::momentum, Quantity::stiffness,
                   Quantity::quartic, Quantity::force, Quantity::angular_frequency, Quantity::time,
                   Quantity::measurement_rate, Quantity::momentum_diffusion, Quantity::position_diffusion,
                   Quantity::momentum_variance, Quantity::covariance}) {
        CHECK_FALSE(accepted_units(q).empty());
        CHECK(to_canonical(q, 1.0, canonical_unit(q), UnitMode::physical) == 1.0);
        for (const auto& u : accepted_units(q)) {
            for (int i = 0; i < 50; ++i) {
                const double v = mant(rng) * std::pow(10.0, static_cast<int>(mant(rng)));
                const double back = from_canonical(q, to_canonical(q, v, u, UnitMode::physical), u, UnitMode::physical);
                CHECK(std::abs(back - v) <= 1e-12 * std::abs(v));
            }
        }
    }
}

TEST_CASE("unit errors")
{
    CHECK_THROWS_AS(to_canonical(Quantity::length, 1.0, "furlong", UnitMode::physical), std::invalid_argument);
    CHECK_THROWS_AS(to_canonical(Quantity::length, 1.0, "um", UnitMode::dimensionless), std::invalid_argument);
    CHECK(to_canonical(Quantity::length, 2.5, "1", UnitMode::dimensionless) == 2.5);
    try {
        to_canonical(Quantity::force, 1.0, "lbf", UnitMode::physical);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("aN") != std::string::npos);
    }
}

TEST_CASE("noise determinism and stream independence")
{
    NoiseSource a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    const auto va = a.increments(1e-3, 1000);
    const auto vb = b.increments(1e-3, 1000);
    CHECK(va == vb);
    CHECK(c.increments(1e-3, 1000) != va);
    CHECK(d.increments(1e-3, 1000) != va);
    CHECK_THROWS_AS(a.increment(0.0), std::invalid_argument);
    CHECK_THROWS_AS(a.increment(-1.0), std::invalid_argument);

    // A copy replays the original's future.
    NoiseSource e(5, 0);
    e.increments(1.0, 17);
    NoiseSource f = e;
    CHECK(e.increment(1.0) == f.increment(1.0));

    // Derived streams are reproducible and distinct.
    CHECK(e.derive(3).increment(1.0) == e.derive(3).increment(1.0));
    CHECK(e.derive(3).increment(1.0) != e.derive(4).increment(1.0));
}

TEST_CASE("noise statistics: variance dt and cross-stream correlation")
{
    const std::size_t n = 1000000;
    const double dt = 1e-4;
    NoiseSource a(2024, 0), b(2024, 1);
    const auto va = a.increments(dt, n);
    const auto vb = b.increments(dt, n);
    CHECK(std::abs(mean(va)) < 5.0 * std::sqrt(dt / n));
    CHECK(sample_variance(va) == doctest::Approx(dt).epsilon(0.01));
    CHECK(std::abs(correlation(va, vb)) < 0.01);
    // Increments within a stream are uncorrelated step to step.
    std::vector<double> lead(va.begin() + 1, va.end()), lag(va.begin(), va.end() - 1);
    CHECK(std::abs(correlation(lead, lag)) < 0.01);
}

TEST_CASE("dimensionless rescaling")
{
    const auto sys = SystemSpec::duffing(1.0, 990.0, 49500.0, 30.0, 60.0);

    SUBCASE("identity scaling")
    {
        const auto d = rescale_to_dimensionless(sys, {1.0, 1.0, 1.0}, constants::hbar);
        CHECK(d.hbar_eff == constants::hbar);
        const auto& m = std::get<Duffing>(d.system.model());
        CHECK(m.A == 990.0);
        CHECK(m.B == 49500.0);
        CHECK(m.Lambda == 30.0);
        CHECK(m.w == 60.0);
        CHECK(m.m == 1.0);
    }

    SUBCASE("paper scales give hbar / 0.26")
    {
        const auto sc = consistent_scales(1.0, 0.1, 2.6);
        const auto d = rescale_to_dimensionless(sys, sc, constants::hbar);
        CHECK(d.hbar_eff == doctest::Approx(4.0560454e-7).epsilon(1e-7));
        const auto& m = std::get<Duffing>(d.system.model());
        CHECK(m.m == doctest::Approx(1.0));
        CHECK(m.A == doctest::Approx(990.0 * sc.t0 * sc.t0));
        CHECK(m.w == doctest::Approx(60.0 * sc.t0));
    }

    SUBCASE("inconsistent triple rejected")
    {
        CHECK_THROWS_AS(rescale_to_dimensionless(sys, {0.1, 2.6, 0.05}, constants::hbar), std::invalid_argument);
        CHECK_THROWS_AS(rescale_to_dimensionless(sys, {-0.1, 2.6, 0.05}, constants::hbar), std::invalid_argument);
    }

    SUBCASE("classical trajectories coincide after inverse mapping")
    {
        for (const auto& s : {sys, SystemSpec::harmonic(2.0, 3.0), SystemSpec::double_well(0.5, 2.0, 7.0),
                              SystemSpec::driven_harmonic(1.5, 4.0, 0.7, 2.5)}) {
            const auto sc = consistent_scales(s.mass(), 0.1, 2.6);
            const auto d = rescale_to_dimensionless(s, sc, constants::hbar);
            PhaseState a{-0.098, 2.6};
            PhaseState b = to_dimensionless(a, sc);
            const double dt = 1e-5;
            for (int i = 0; i < 20000; ++i) {
                a = step_newton(s, a, i * dt, dt);
                b = step_newton(d.system, b, i * dt / sc.t0, dt / sc.t0);
            }
            const auto back = to_physical(b, sc);
            CHECK(std::abs(back.x - a.x) <= 1e-10 * std::max(1.0, std::abs(a.x)));
            CHECK(std::abs(back.p - a.p) <= 1e-10 * std::max(1.0, std::abs(a.p)));
        }
    }

    SUBCASE("state and measurement maps round trip")
    {
        const auto sc = consistent_scales(1.0, 0.1, 2.6);
        const GaussianState g{0.1, 2.0, 1e-6, 3e-2, 4e-7};
        const auto r = to_physical(to_dimensionless(g, sc), sc);
        CHECK(r.mean_x == doctest::Approx(g.mean_x).epsilon(1e-14));
        CHECK(r.var_p == doctest::Approx(g.var_p).epsilon(1e-14));
        CHECK(r.cov_xp == doctest::Approx(g.cov_xp).epsilon(1e-14));
        const MeasurementConfig k{9.3e13};
        CHECK(to_dimensionless(k, sc).k == doctest::Approx(9.3e13 * 0.01 * sc.t0));
        CHECK(to_physical(to_dimensionless(k, sc), sc).k == doctest::Approx(9.3e13).epsilon(1e-14));
    }
}
