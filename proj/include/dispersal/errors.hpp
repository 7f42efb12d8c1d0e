#pragma once

#include <stdexcept>
#include <string>

namespace dispersal {

// An iterative solver hit its cap, or a step produced an inadmissible state.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// min H is bounded away from zero, so the constrained equation has no solution.
class EssViolation : public std::runtime_error {
public:
    explicit EssViolation(const std::string& what, double min_value)
        : std::runtime_error(what), min_value_(min_value) {}

    double min_value() const noexcept { return min_value_; }

private:
    double min_value_;
};

// Ill-formed configuration text. Carries the 1-based line, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

// A computed result failed a check that must hold before it is written.
class PostconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dispersal
