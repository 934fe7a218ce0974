#pragma once

#include <stdexcept>
#include <string>

namespace repeaterscope {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent user configuration (profiles, sweep specs, JSON).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedWavelength : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Root finding or quadrature failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A distillation herald with zero acceptance probability.
class DegenerateInput : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The chain resets with probability one at some level.
class CertainReset : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A distillation is scheduled on a level without two pairs of capacity.
class ScheduleError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace repeaterscope
