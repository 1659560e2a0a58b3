#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elaa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An iterative kernel failed to converge or produced non-finite values.
class NumericalError : public Error {
public:
    using Error::Error;
};

class RankDeficientError : public NumericalError {
public:
    static constexpr std::size_t kNoUser = static_cast<std::size_t>(-1);

    explicit RankDeficientError(const std::string& what, std::size_t user = kNoUser)
        : NumericalError(what), user_(user) {}

    /// Index of the offending user terminal, or kNoUser for a whole-matrix check.
    std::size_t user() const noexcept { return user_; }

private:
    std::size_t user_;
};

class SingularPreconditionerError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularSigmaError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Curvature along the search direction vanished (input is not positive definite).
class BreakdownError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ZeroChannelError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Invalid configuration or geometry.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace elaa
