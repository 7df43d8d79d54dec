#pragma once

#include "qtc/config.hpp"
#include "qtc/runner.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtc {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_halt = 3;
inline constexpr int exit_io = 4;

std::string_view version();

enum class Command { simulate, lyapunov, strobe, wigner_snapshot, check_classicality };

std::string_view command_name(Command c);

/// Initial Gaussian for quantum backends: configured moments, else the
/// measurement steady state at the start point.
GaussianState initial_gaussian(const ExperimentConfig& cfg);

/// Position grid for wavefunction backends: configured bounds, else the
/// default turning-point grid (at least 12 initial widths on each side).
PositionGrid initial_grid(const ExperimentConfig& cfg);

/// Runner for the configured backend (or `backend` when given). The
/// trajectory noise is stream 0 of the configured seed for every backend, so
/// closure and wavefunction runs with equal seeds see the same increments.
std::unique_ptr<Runner> make_runner(const ExperimentConfig& cfg, std::optional<Backend> backend = std::nullopt);

struct Artifact {
    std::string file;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunResult {
    int exit_code = exit_ok;
    std::vector<Artifact> artifacts;
    std::string halt_module;
    std::string halt_message;
    nlohmann::json summary = nlohmann::json::object();
    std::filesystem::path manifest;
};

/// Executes one command into cfg.output_dir and writes manifest.json there.
/// Numerical halts are caught and recorded (exit_halt); I/O failures throw
/// IoError; command/backend mismatches throw ConfigError.
RunResult run_experiment(const ExperimentConfig& cfg, Command cmd);

} // namespace qtc
