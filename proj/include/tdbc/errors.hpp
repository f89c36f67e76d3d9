#pragma once

#include <stdexcept>
#include <string>

namespace tdbc {

/// Argument outside the mathematical domain of an operation (L(t) <= 0,
/// Im(kappa) <= 0, invalid basis index, node of a divisor, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A series, quadrature or time stepper failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario configuration is missing a key or holds an invalid value.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace tdbc
