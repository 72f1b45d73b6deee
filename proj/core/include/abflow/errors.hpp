#pragma once

#include <stdexcept>
#include <string>

namespace abflow {

/// Argument outside the documented support of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative numerical method did not reach its tolerance.
/// Carries the best estimate and its error bound when one exists.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate = 0.0, double error_bound = 0.0)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  [[nodiscard]] double estimate() const noexcept { return estimate_; }
  [[nodiscard]] double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Evaluation point lies on (or numerically at) a nodal set of the density.
/// Callers exclude such points; this is not a defect.
class DensityFloorError : public std::runtime_error {
 public:
  DensityFloorError(const std::string& what, double density)
      : std::runtime_error(what), density_(density) {}

  [[nodiscard]] double density() const noexcept { return density_; }

 private:
  double density_;
};

/// Too few samples for a statistical estimate.
class InsufficientSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace abflow
