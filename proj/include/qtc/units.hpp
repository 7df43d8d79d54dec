#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qtc {

// Canonical base units: picogram, micrometer, second.
namespace constants {

inline constexpr double pi = 3.14159265358979323846;

/// CODATA 2018 reduced Planck constant, J*s.
inline constexpr double hbar_si = 1.054571817e-34;

inline constexpr double pg_per_kg = 1e15;
inline constexpr double um_per_m = 1e6;

/// hbar in pg*um^2/s.
inline constexpr double hbar = hbar_si * pg_per_kg * um_per_m * um_per_m;

} // namespace constants

enum class UnitMode { physical, dimensionless };

struct UnitSystem {
    UnitMode mode = UnitMode::physical;
    double hbar = constants::hbar;

    static UnitSystem physical() { return {UnitMode::physical, constants::hbar}; }
    /// Throws std::invalid_argument unless hbar_eff > 0.
    static UnitSystem dimensionless(double hbar_eff);

    bool is_physical() const { return mode == UnitMode::physical; }
};

/// Physical dimension of a configuration value.
enum class Quantity {
    mass,
    length,
    area,
    momentum,
    stiffness,          // A, spring constants: pg/s^2
    quartic,            // B: pg um^-2 s^-2
    force,              // pg um/s^2
    angular_frequency,  // rad/s
    time,               // s
    measurement_rate,   // k: um^-2 s^-1
    momentum_diffusion, // pg^2 um^2 s^-3
    position_diffusion, // um^2/s
    momentum_variance,  // pg^2 um^2 s^-2
    covariance,         // pg um^2/s
};

std::string_view quantity_name(Quantity q);

/// Canonical unit label used in CSV headers and manifest echoes.
std::string_view canonical_unit(Quantity q);

/// Units accepted for `q` in physical mode.
std::vector<std::string> accepted_units(Quantity q);

/// Converts `value` expressed in `unit` to canonical units. In dimensionless
/// mode only the unit "1" is accepted. Throws std::invalid_argument with a
/// message listing the accepted units.
double to_canonical(Quantity q, double value, std::string_view unit, UnitMode mode);

/// Inverse of to_canonical.
double from_canonical(Quantity q, double value, std::string_view unit, UnitMode mode);

} // namespace qtc
