#pragma once

#include <stdexcept>
#include <string>

namespace adrflow {

/// Base class for all adrflow errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two vectors of different dimension were combined.
class DimensionError : public Error {
  using Error::Error;
};

/// A NaN or infinity entered a numeric operation.
class NonFiniteError : public Error {
  using Error::Error;
};

/// A parameter violates the admissible range of an operator or formula.
class InvalidParameterError : public Error {
  using Error::Error;
};

/// A problem instance cannot be constructed (bad moduli, singular system, ...).
class InvalidProblemError : public Error {
  using Error::Error;
};

/// The step policy cannot produce an admissible step at the current time.
class StepPolicyError : public Error {
  using Error::Error;
};

/// A regression fit has too few usable samples.
class FitError : public Error {
  using Error::Error;
};

/// A sampling-based estimate could not gather enough valid samples.
class EstimateError : public Error {
  using Error::Error;
};

/// A brute-force oracle was asked for more than it supports.
class OracleScopeError : public Error {
  using Error::Error;
};

/// A required argument combination is missing.
class ArgumentError : public Error {
  using Error::Error;
};

/// An experiment configuration failed to parse or validate.
class ConfigError : public Error {
  using Error::Error;
};

/// An iterative locator did not reach its tolerance.
class ConvergenceError : public Error {
  using Error::Error;
};

}  // namespace adrflow
