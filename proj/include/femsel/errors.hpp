#pragma once

#include <stdexcept>
#include <string>

namespace femsel {

/// Raised when M is not positive definite and cannot be factored.
class DecompositionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when the symmetric eigen-iteration does not converge.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double off_diagonal_norm)
        : std::runtime_error(what), off_norm_(off_diagonal_norm) {}

    double off_diagonal_norm() const noexcept { return off_norm_; }

private:
    double off_norm_;
};

/// Raised when an assembled structure does not show the expected free-free behaviour.
class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration errors. Each carries the offending key (empty when not applicable).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string key)
        : std::runtime_error(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class ConfigFileError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ConfigParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ConfigValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace femsel
