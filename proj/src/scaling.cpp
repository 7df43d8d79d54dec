#include "qtc/scaling.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtc {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

Scales consistent_scales(double m, double x0, double p0)
{
    return {x0, p0, m * x0 / p0};
}

DimensionlessSystem rescale_to_dimensionless(const SystemSpec& sys, const Scales& sc, double hbar)
{
    if (!(sc.x0 > 0.0 && sc.p0 > 0.0 && sc.t0 > 0.0)) {
        throw std::invalid_argument("rescale: x0, p0 and t0 must all be positive");
    }
    const double m = sys.mass();
    const double t0_expected = m * sc.x0 / sc.p0;
    if (std::abs(sc.t0 - t0_expected) > 1e-9 * t0_expected) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "rescale: inconsistent scale triple; t0 = " << sc.t0 << " s but m*x0/p0 = "
            << t0_expected << " s (the rescaled mass must be 1)";
        throw std::invalid_argument(msg.str());
    }
    const double E0 = sc.energy();
    const double x2 = sc.x0 * sc.x0;
    const double F0 = sc.force();
    const double mr = m * sc.x0 / (sc.p0 * sc.t0);

    SystemSpec scaled = std::visit(
        overloaded{
            [&](const Harmonic& s) { return SystemSpec::harmonic(mr, s.w0 * sc.t0); },
            [&](const DoubleWell& s) {
                return SystemSpec::double_well(mr, s.A * x2 / E0, s.B * x2 * x2 / E0);
            },
            [&](const DrivenHarmonic& s) {
                return SystemSpec::driven_harmonic(mr, s.w0 * sc.t0, s.Lambda / F0, s.w * sc.t0);
            },
            [&](const Duffing& s) {
                return SystemSpec::duffing(mr, s.A * x2 / E0, s.B * x2 * x2 / E0, s.Lambda / F0,
                                           s.w * sc.t0);
            },
        },
        sys.model());
    return {scaled, hbar / sc.action(), sc};
}

PhaseState to_dimensionless(const PhaseState& s, const Scales& sc)
{
    return {s.x / sc.x0, s.p / sc.p0};
}

PhaseState to_physical(const PhaseState& s, const Scales& sc)
{
    return {s.x * sc.x0, s.p * sc.p0};
}

GaussianState to_dimensionless(const GaussianState& g, const Scales& sc)
{
    return {g.mean_x / sc.x0, g.mean_p / sc.p0, g.var_x / (sc.x0 * sc.x0),
            g.var_p / (sc.p0 * sc.p0), g.cov_xp / sc.action()};
}

GaussianState to_physical(const GaussianState& g, const Scales& sc)
{
    return {g.mean_x * sc.x0, g.mean_p * sc.p0, g.var_x * sc.x0 * sc.x0, g.var_p * sc.p0 * sc.p0,
            g.cov_xp * sc.action()};
}

MeasurementConfig to_dimensionless(const MeasurementConfig& m, const Scales& sc)
{
    return {m.k * sc.x0 * sc.x0 * sc.t0};
}

MeasurementConfig to_physical(const MeasurementConfig& m, const Scales& sc)
{
    return {m.k / (sc.x0 * sc.x0 * sc.t0)};
}

} // namespace qtc
