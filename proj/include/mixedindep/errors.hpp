#pragma once

#include <stdexcept>
#include <string>

namespace mixedindep {

// Thrown when vector/matrix shapes disagree (point vs sample vs weights).
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when data violates a domain invariant (X > 0, Y integer >= 0, ...).
// Carries enough context to name the offending cell.
class InvariantError : public std::invalid_argument {
public:
    explicit InvariantError(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown by standardized statistics when the variance estimate is zero,
// e.g. a constant column makes the test inapplicable.
class DegenerateVariance : public std::runtime_error {
public:
    explicit DegenerateVariance(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a configuration file cannot be parsed or is inconsistent.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when quadrature refinement fails to stabilize.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mixedindep
