#pragma once

#include "qtc/classical.hpp"
#include "qtc/closure.hpp"
#include "qtc/lyapunov.hpp"
#include "qtc/potentials.hpp"
#include "qtc/state.hpp"
#include "qtc/units.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtc {

enum class Backend { classical, noisy_classical, closure, sse, wigner_grid };

std::string_view backend_name(Backend b);
std::optional<Backend> parse_backend(std::string_view name);

struct InitialState {
    PhaseState centroid;
    std::optional<double> var_x;
    std::optional<double> var_p;
    std::optional<double> cov_xp;
};

struct GridConfig {
    std::size_t n = 2048;
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::size_t wigner_p_count = 256;
    std::size_t wigner_x_stride = 1;
};

struct StrobeProtocol {
    std::uint64_t periods = 2000;
    double hist_x_max = 0.4;
    double hist_p_max = 8.0;
    std::size_t bins = 20;
};

struct SnapshotProtocol {
    std::vector<std::uint64_t> at_periods{0, 1, 2, 5};
    std::size_t p_count = 256;
    std::size_t x_stride = 4;
};

struct ClassicalityProtocol {
    PhaseState typical;
    ClassicalityOptions options;
};

/// Fully validated experiment in canonical units.
struct ExperimentConfig {
    UnitSystem units;
    SystemSpec system = SystemSpec::harmonic(1.0, 1.0);
    MeasurementConfig measurement;
    Backend backend = Backend::closure;
    InitialState initial;

    double period = 0.0;                 // reference period (drive period when driven)
    std::uint64_t steps_per_period = 10000;
    double dt = 0.0;                     // period / steps_per_period
    std::uint64_t periods = 1;           // simulate duration
    std::uint64_t record_every = 1;      // trajectory rows every this many steps
    GridConfig grid;

    ClassicalNoiseSpec classical_noise;  // resolved (matched noise already applied)
    bool matched_noise = true;

    LyapunovProtocol lyapunov;
    StrobeProtocol strobe;
    SnapshotProtocol snapshot;
    ClassicalityProtocol classicality;

    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";

    /// Canonical-unit echo; itself a valid config document.
    nlohmann::json canonical;
};

/// Parses and validates a config document. Throws ConfigError naming the
/// path of the offending field.
ExperimentConfig validate_config(std::string_view text);
ExperimentConfig validate_config(const nlohmann::json& doc);

ExperimentConfig load_config_file(const std::filesystem::path& path);

std::filesystem::path preset_directory();
std::vector<std::string> list_presets();
/// Loads a bundled preset by name (file <name>.json in the preset directory).
ExperimentConfig load_preset(std::string_view name);

/// Oscillation period used to size steps for undriven systems: 2pi/w0
/// (harmonic) or the small-oscillation period about a well minimum.
double reference_period(const SystemSpec& sys);

} // namespace qtc
