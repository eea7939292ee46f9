#pragma once

#include <stdexcept>
#include <string>

namespace hrp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite entries, invalid parameters, or a failed precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Operand shapes do not agree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Input is legal in form but carries no usable signal (zero data, zero vector).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// Numerically rank-deficient covariance or Gram matrix.
class ConditioningError : public Error {
public:
    using Error::Error;
};

/// Malformed delimited text; the message names line and column.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace hrp
