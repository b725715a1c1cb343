#pragma once

#include <stdexcept>
#include <string>

namespace fcmsc {

/// Root of every error this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data (NaN/Inf, empty matrices, asymmetric graphs).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A scalar parameter outside its admissible range.
/// Automatic k-NN bandwidth collapsed to zero (duplicate-heavy data).
class DegenerateBandwidth : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

/// CSV cell that does not parse as a number. Row and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t row, std::size_t col,
               const std::string& what)
        : Error(file + ":" + std::to_string(row) + ":" + std::to_string(col) +
                ": " + what),
          row(row), col(col) {}
    std::size_t row;
    std::size_t col;
};

class LabelRangeError : public Error {
public:
    using Error::Error;
};

/// Decomposition failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A Sylvester operator with alpha_i + beta_j too close to zero.
class IllConditioned : public NumericalError {
public:
    IllConditioned(const std::string& what, long i = -1, long j = -1)
        : NumericalError(what), i(i), j(j) {}
    long i;
    long j;
};

/// The ALM iteration produced a non-finite value.
class Divergence : public NumericalError {
public:
    Divergence(const std::string& what, int iteration)
        : NumericalError(what), iteration(iteration) {}
    int iteration;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace fcmsc
