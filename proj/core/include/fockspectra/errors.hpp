#pragma once

#include <stdexcept>
#include <string>

namespace fockspectra {

/// A computation produced a non-finite value or an iteration failed to
/// converge. Carries a human-readable description of the offending stage.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionViolation : public std::invalid_argument {
public:
    explicit PreconditionViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Model parameters outside the admissible family (degenerate Hessian,
/// non-positive hopping weights, ...).
class InvalidModel : public std::invalid_argument {
public:
    explicit InvalidModel(const std::string& what) : std::invalid_argument(what) {}
};

/// The spherical-harmonic degree cutoff is too small for the requested
/// counting threshold.
class EllMaxTooSmall : public NumericalError {
public:
    explicit EllMaxTooSmall(const std::string& what) : NumericalError(what) {}
};

/// Malformed or constraint-violating run configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Failure to read or write an output file.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fockspectra
