#pragma once

#include <stdexcept>
#include <string>

namespace hvsparse {

// Base of every error raised by the library. The CLI maps each subclass to
// its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid dimensions, out-of-range parameters, violated preconditions.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A reference quantity that must be nonzero is zero (zero signal, zero
// ground truth, prox root of the zero vector).
class DegenerateError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Overflow or a non-finite intermediate during evaluation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hvsparse
