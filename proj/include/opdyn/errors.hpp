#pragma once

#include <stdexcept>
#include <string>

namespace opdyn {

// Raised when a run breaks a runtime contract (non-finite opinions, a
// controller row drifting, a non-stochastic weight matrix mid-run).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File read/write failures; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ConfigErrorKind {
    Syntax, // not valid JSON at all
    Schema, // wrong type, missing key, unknown key
    Range   // right shape, value out of bounds
};

// Config validation failure with the dotted key path that caused it,
// e.g. "controllers[1].goal".
class ConfigError : public std::runtime_error {
public:
    ConfigError(ConfigErrorKind kind, std::string path, const std::string& message);

    ConfigErrorKind kind() const { return kind_; }
    const std::string& path() const { return path_; }

private:
    ConfigErrorKind kind_;
    std::string path_;
};

} // namespace opdyn
