#pragma once

#include <stdexcept>
#include <string>

namespace rcbf {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
struct DimensionError : Error {
    using Error::Error;
};

/// A matrix required to be symmetric positive definite is not.
struct NotSpdError : Error {
    using Error::Error;
};

/// An input matrix does not have full column rank.
struct RankError : Error {
    using Error::Error;
};

/// The estimator/barrier rate condition lambda_min(Lambda) > alpha_h fails.
/// This is a configuration error, not a runtime fallback.
struct GateViolation : Error {
    using Error::Error;
};

/// Malformed or inconsistent scenario/CLI configuration.
struct ConfigError : Error {
    using Error::Error;
};

/// Numerical failure (singular system, non-finite state, residual check).
struct NumericError : Error {
    using Error::Error;
};

/// File I/O failure; message carries the offending path.
struct IoError : Error {
    using Error::Error;
};

} // namespace rcbf
