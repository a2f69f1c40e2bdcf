#pragma once

#include <stdexcept>
#include <string>

namespace kplane {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range (k, d), exponents or indices.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Unusable construction settings (grid sizes and the like).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or malformed sample data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (zero profile, sign change).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Geometric precondition of a bound check violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Linear algebra failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The extremizer iteration decreased the ratio beyond tolerance.
class IterationAnomaly : public Error {
 public:
  using Error::Error;
};

}  // namespace kplane
