#pragma once

#include <stdexcept>
#include <string>

namespace rollsim {

// Base class for all rollsim errors; carries no extra state.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: malformed files, out-of-range parameters, violated preconditions.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Bad configuration (fractions not summing to one, missing sections, ...).
class ConfigError : public ValidationError {
public:
    explicit ConfigError(const std::string& what) : ValidationError(what) {}
};

// Numerical failure inside a solver; reports where it happened.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& what) : Error(what) {}
};

// Training failed (singular normal equations, NaN loss).
class TrainingError : public Error {
public:
    TrainingError(const std::string& what, int epoch)
        : Error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

// Entry and exit pressure branches never cross.
class NoNeutralPointError : public SolverError {
public:
    explicit NoNeutralPointError(const std::string& what) : SolverError(what) {}
};

// The closed-form neutral-point formula has no solution (friction too low
// for the draft).
class NoAnalyticalNeutralError : public SolverError {
public:
    explicit NoAnalyticalNeutralError(const std::string& what) : SolverError(what) {}
};

// A command needs outputs another command has not produced yet.
class DependencyError : public Error {
public:
    explicit DependencyError(const std::string& what) : Error(what) {}
};

}  // namespace rollsim
