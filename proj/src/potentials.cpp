#include "qtc/potentials.hpp"

#include "qtc/units.hpp"

#include <cmath>
#include <stdexcept>

namespace qtc {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what)
{
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

SystemSpec SystemSpec::harmonic(double m, double w0)
{
    require(positive(m), "harmonic: m must be positive");
    require(std::isfinite(w0), "harmonic: w0 must be finite");
    return SystemSpec(Harmonic{m, w0});
}

SystemSpec SystemSpec::double_well(double m, double A, double B)
{
    require(positive(m), "double well: m must be positive");
    require(std::isfinite(A), "double well: A must be finite");
    require(positive(B), "double well: B must be positive");
    return SystemSpec(DoubleWell{m, A, B});
}

SystemSpec SystemSpec::driven_harmonic(double m, double w0, double Lambda, double w)
{
    require(positive(m), "driven harmonic: m must be positive");
    require(std::isfinite(w0) && std::isfinite(Lambda), "driven harmonic: parameters must be finite");
    require(positive(w), "driven harmonic: w must be positive");
    return SystemSpec(DrivenHarmonic{m, w0, Lambda, w});
}

SystemSpec SystemSpec::duffing(double m, double A, double B, double Lambda, double w)
{
    require(positive(m), "duffing: m must be positive");
    require(std::isfinite(A) && std::isfinite(Lambda), "duffing: parameters must be finite");
    require(positive(B), "duffing: B must be positive");
    require(positive(w), "duffing: w must be positive");
    return SystemSpec(Duffing{m, A, B, Lambda, w});
}

SystemSpec SystemSpec::from_model(const Model& model)
{
    return std::visit(overloaded{
                          [](const Harmonic& s) { return harmonic(s.m, s.w0); },
                          [](const DoubleWell& s) { return double_well(s.m, s.A, s.B); },
                          [](const DrivenHarmonic& s) { return driven_harmonic(s.m, s.w0, s.Lambda, s.w); },
                          [](const Duffing& s) { return duffing(s.m, s.A, s.B, s.Lambda, s.w); },
                      },
                      model);
}

double SystemSpec::mass() const
{
    return std::visit([](const auto& s) { return s.m; }, model_);
}

std::optional<double> SystemSpec::drive_frequency() const
{
    return std::visit(overloaded{
                          [](const DrivenHarmonic& s) -> std::optional<double> { return s.w; },
                          [](const Duffing& s) -> std::optional<double> { return s.w; },
                          [](const auto&) -> std::optional<double> { return std::nullopt; },
                      },
                      model_);
}

std::optional<double> SystemSpec::drive_period() const
{
    if (auto w = drive_frequency()) {
        return 2.0 * constants::pi / *w;
    }
    return std::nullopt;
}

bool SystemSpec::quartic() const
{
    return std::holds_alternative<DoubleWell>(model_) || std::holds_alternative<Duffing>(model_);
}

std::string_view SystemSpec::family() const
{
    return std::visit(overloaded{
                          [](const Harmonic&) { return std::string_view("harmonic"); },
                          [](const DoubleWell&) { return std::string_view("double_well"); },
                          [](const DrivenHarmonic&) { return std::string_view("driven_harmonic"); },
                          [](const Duffing&) { return std::string_view("duffing"); },
                      },
                      model_);
}

double potential(const SystemSpec& sys, double x, double t)
{
    const double x2 = x * x;
    return std::visit(overloaded{
                          [&](const Harmonic& s) { return 0.5 * s.m * s.w0 * s.w0 * x2; },
                          [&](const DoubleWell& s) { return s.B * x2 * x2 - s.A * x2; },
                          [&](const DrivenHarmonic& s) {
                              return 0.5 * s.m * s.w0 * s.w0 * x2 + s.Lambda * x * std::cos(s.w * t);
                          },
                          [&](const Duffing& s) {
                              return s.B * x2 * x2 - s.A * x2 + s.Lambda * x * std::cos(s.w * t);
                          },
                      },
                      sys.model());
}

double static_force(const SystemSpec& sys, double x)
{
    return std::visit(overloaded{
                          [&](const Harmonic& s) { return -s.m * s.w0 * s.w0 * x; },
                          [&](const DoubleWell& s) { return -4.0 * s.B * x * x * x + 2.0 * s.A * x; },
                          [&](const DrivenHarmonic& s) { return -s.m * s.w0 * s.w0 * x; },
                          [&](const Duffing& s) { return -4.0 * s.B * x * x * x + 2.0 * s.A * x; },
                      },
                      sys.model());
}

double drive_amplitude(const SystemSpec& sys)
{
    return std::visit(overloaded{
                          [](const DrivenHarmonic& s) { return s.Lambda; },
                          [](const Duffing& s) { return s.Lambda; },
                          [](const auto&) { return 0.0; },
                      },
                      sys.model());
}

double force(const SystemSpec& sys, double x, double t)
{
    double f = static_force(sys, x);
    if (auto w = sys.drive_frequency()) {
        f -= drive_amplitude(sys) * std::cos(*w * t);
    }
    return f;
}

ForceDerivatives force_derivatives(const SystemSpec& sys, double x, double /*t*/)
{
    // The drive is linear in x, so it never contributes to dF or higher.
    return std::visit(overloaded{
                          [&](const Harmonic& s) { return ForceDerivatives{-s.m * s.w0 * s.w0, 0.0, 0.0}; },
                          [&](const DrivenHarmonic& s) {
                              return ForceDerivatives{-s.m * s.w0 * s.w0, 0.0, 0.0};
                          },
                          [&](const DoubleWell& s) {
                              const double d2F = -24.0 * s.B * x;
                              return ForceDerivatives{2.0 * s.A - 12.0 * s.B * x * x, d2F, -d2F};
                          },
                          [&](const Duffing& s) {
                              const double d2F = -24.0 * s.B * x;
                              return ForceDerivatives{2.0 * s.A - 12.0 * s.B * x * x, d2F, -d2F};
                          },
                      },
                      sys.model());
}

} // namespace qtc
