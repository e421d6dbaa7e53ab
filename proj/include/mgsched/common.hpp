#pragma once

#include <stdexcept>
#include <string>

namespace mgsched {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A numeric argument is outside its admissible domain.
class ParameterError : public Error {
public:
  using Error::Error;
};

// Requested Beta moments violate sigma^2 < mu*(1-mu).
class InfeasibleMomentsError : public ParameterError {
public:
  using ParameterError::ParameterError;
};

// Two probabilistic sequences with different step sizes were combined.
class StepMismatchError : public Error {
public:
  using Error::Error;
};

// Structured input validation failure; `field` is a path like
// "load[7].sigma_kw" into the offending document.
class ValidationError : public Error {
public:
  ValidationError(std::string field_path, const std::string& message)
      : Error(field_path.empty() ? message : field_path + ": " + message),
        field(std::move(field_path)) {}
  std::string field;
};

// Numerical breakdown inside the LP machinery (singular basis, stall).
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace mgsched
