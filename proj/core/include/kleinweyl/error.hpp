#pragma once

#include <stdexcept>
#include <string>

namespace kleinweyl {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or model parameters (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data violating a precondition, e.g. a non-timelike Killing field.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to converge or was asked for something it
/// cannot represent (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Requested spacetime dimension is outside the range a formula supports.
class UnsupportedDimension : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace kleinweyl
