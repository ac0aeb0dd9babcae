#pragma once

#include <stdexcept>
#include <string>

namespace barotherm {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A velocity moment that the requested computation needs is infinite.
class MomentDivergenceError : public DomainError {
 public:
  MomentDivergenceError(int order, const std::string& what)
      : DomainError(what), order_(order) {}

  /// Power k of the divergent moment <c^k>.
  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// A ratio whose denominator vanishes for the given inputs.
class UndefinedRatioError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InsufficientDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Explicit time step larger than the stability bound of the current state.
class StepSizeError : public std::runtime_error {
 public:
  StepSizeError(double suggested_dt, const std::string& what)
      : std::runtime_error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

 private:
  double suggested_dt_;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(double residual, long steps, const std::string& what)
      : std::runtime_error(what), residual_(residual), steps_(steps) {}
  double residual() const noexcept { return residual_; }
  long steps() const noexcept { return steps_; }

 private:
  double residual_;
  long steps_;
};

}  // namespace barotherm
