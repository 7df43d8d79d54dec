#pragma once

#include <stdexcept>
#include <string>

namespace qtc {

/// Invalid or inconsistent experiment configuration. `path()` names the
/// offending field (e.g. "measurement.k"), empty when not field-specific.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// A stepper detected a state it cannot continue from (non-finite values,
/// uncertainty violation, grid leakage, step too large).
class NumericalHalt : public std::runtime_error {
public:
    NumericalHalt(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qtc
