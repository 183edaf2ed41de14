#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gpoly {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Shapes of the inputs do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature hit its subdivision cap before meeting the tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value, double abs_error)
      : Error(what), best_value_(best_value), abs_error_(abs_error) {}

  double best_value() const noexcept { return best_value_; }
  double abs_error() const noexcept { return abs_error_; }

 private:
  double best_value_;
  double abs_error_;
};

/// A point set violates general position at the numeric tolerance.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a configured enumeration cap.
class ResourceBoundError : public Error {
 public:
  using Error::Error;
};

/// Wraps an exception thrown by a Monte Carlo trial.
class TrialError : public Error {
 public:
  TrialError(std::uint64_t trial, const std::string& what)
      : Error("trial " + std::to_string(trial) + ": " + what), trial_(trial) {}

  std::uint64_t trial() const noexcept { return trial_; }

 private:
  std::uint64_t trial_;
};

}  // namespace gpoly
