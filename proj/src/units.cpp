#include "qtc/units.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace qtc {
namespace {

struct UnitEntry {
    Quantity quantity;
    std::string_view unit;
    double factor; // canonical value of one `unit`
};

constexpr double kTwoPi = 2.0 * constants::pi;

// Factors derived from 1 kg = 1e15 pg, 1 m = 1e6 um.
constexpr std::array kUnits{
    UnitEntry{Quantity::mass, "pg", 1.0},
    UnitEntry{Quantity::mass, "fg", 1e-3},
    UnitEntry{Quantity::mass, "ng", 1e3},
    UnitEntry{Quantity::mass, "ug", 1e6},
    UnitEntry{Quantity::mass, "g", 1e12},
    UnitEntry{Quantity::mass, "kg", 1e15},

    UnitEntry{Quantity::length, "um", 1.0},
    UnitEntry{Quantity::length, "nm", 1e-3},
    UnitEntry{Quantity::length, "pm", 1e-6},
    UnitEntry{Quantity::length, "mm", 1e3},
    UnitEntry{Quantity::length, "m", 1e6},

    UnitEntry{Quantity::area, "um^2", 1.0},
    UnitEntry{Quantity::area, "nm^2", 1e-6},
    UnitEntry{Quantity::area, "pm^2", 1e-12},
    UnitEntry{Quantity::area, "m^2", 1e12},

    UnitEntry{Quantity::momentum, "pg um/s", 1.0},
    UnitEntry{Quantity::momentum, "pg nm/s", 1e-3},
    UnitEntry{Quantity::momentum, "kg m/s", 1e21},

    UnitEntry{Quantity::stiffness, "pg/s^2", 1.0},
    UnitEntry{Quantity::stiffness, "pN/m", 1e3},
    UnitEntry{Quantity::stiffness, "pN/um", 1e9},
    UnitEntry{Quantity::stiffness, "N/m", 1e15},

    UnitEntry{Quantity::quartic, "pg um^-2 s^-2", 1.0},
    UnitEntry{Quantity::quartic, "J/m^4", 1e3},

    UnitEntry{Quantity::force, "pg um/s^2", 1.0},
    UnitEntry{Quantity::force, "aN", 1e3},
    UnitEntry{Quantity::force, "fN", 1e6},
    UnitEntry{Quantity::force, "pN", 1e9},
    UnitEntry{Quantity::force, "N", 1e21},

    UnitEntry{Quantity::angular_frequency, "rad/s", 1.0},
    UnitEntry{Quantity::angular_frequency, "s^-1", 1.0},
    UnitEntry{Quantity::angular_frequency, "Hz", kTwoPi},

    UnitEntry{Quantity::time, "s", 1.0},
    UnitEntry{Quantity::time, "ms", 1e-3},
    UnitEntry{Quantity::time, "us", 1e-6},

    UnitEntry{Quantity::measurement_rate, "um^-2 s^-1", 1.0},
    UnitEntry{Quantity::measurement_rate, "nm^-2 s^-1", 1e6},
    UnitEntry{Quantity::measurement_rate, "pm^-2 s^-1", 1e12},
    UnitEntry{Quantity::measurement_rate, "m^-2 s^-1", 1e-12},

    UnitEntry{Quantity::momentum_diffusion, "pg^2 um^2 s^-3", 1.0},
    UnitEntry{Quantity::position_diffusion, "um^2/s", 1.0},
    UnitEntry{Quantity::position_diffusion, "nm^2/s", 1e-6},
    UnitEntry{Quantity::momentum_variance, "pg^2 um^2 s^-2", 1.0},
    UnitEntry{Quantity::covariance, "pg um^2/s", 1.0},
};

double factor_for(Quantity q, std::string_view unit, UnitMode mode)
{
    if (mode == UnitMode::dimensionless) {
        if (unit == "1") {
            return 1.0;
        }
        throw std::invalid_argument("dimensionless mode requires unit \"1\" for " +
                                    std::string(quantity_name(q)) + ", got \"" +
                                    std::string(unit) + "\"");
    }
    for (const auto& e : kUnits) {
        if (e.quantity == q && e.unit == unit) {
            return e.factor;
        }
    }
    std::string accepted;
    for (const auto& u : accepted_units(q)) {
        accepted += accepted.empty() ? "" : ", ";
        accepted += "\"" + u + "\"";
    }
    throw std::invalid_argument("unknown unit \"" + std::string(unit) + "\" for " +
                                std::string(quantity_name(q)) + " (accepted: " + accepted + ")");
}

} // namespace

UnitSystem UnitSystem::dimensionless(double hbar_eff)
{
    if (!(hbar_eff > 0.0) || !std::isfinite(hbar_eff)) {
        throw std::invalid_argument("hbar_eff must be positive and finite");
    }
    return {UnitMode::dimensionless, hbar_eff};
}

std::string_view quantity_name(Quantity q)
{
    switch (q) {
    case Quantity::mass: return "mass";
    case Quantity::length: return "length";
    case Quantity::area: return "area";
    case Quantity::momentum: return "momentum";
    case Quantity::stiffness: return "stiffness";
    case Quantity::quartic: return "quartic coefficient";
    case Quantity::force: return "force";
    case Quantity::angular_frequency: return "angular frequency";
    case Quantity::time: return "time";
    case Quantity::measurement_rate: return "measurement strength";
    case Quantity::momentum_diffusion: return "momentum diffusion";
    case Quantity::position_diffusion: return "position diffusion";
    case Quantity::momentum_variance: return "momentum variance";
    case Quantity::covariance: return "covariance";
    }
    return "?";
}

std::string_view canonical_unit(Quantity q)
{
    for (const auto& e : kUnits) {
        if (e.quantity == q && e.factor == 1.0) {
            return e.unit;
        }
    }
    return "1";
}

std::vector<std::string> accepted_units(Quantity q)
{
    std::vector<std::string> out;
    for (const auto& e : kUnits) {
        if (e.quantity == q) {
            out.emplace_back(e.unit);
        }
    }
    return out;
}

double to_canonical(Quantity q, double value, std::string_view unit, UnitMode mode)
{
    return value * factor_for(q, unit, mode);
}

double from_canonical(Quantity q, double value, std::string_view unit, UnitMode mode)
{
    return value / factor_for(q, unit, mode);
}

} // namespace qtc
