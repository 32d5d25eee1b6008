#pragma once

#include <stdexcept>
#include <string>

namespace qtransfer {

// Bad parameters, malformed specs, unsupported combinations. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Mathematically undefined request (angle at a pole, degenerate basis, zero denominator).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Integration failures: step budget, stiffness, numerical blowup. CLI exit code 3.
class IntegrationError : public std::runtime_error {
public:
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qtransfer
