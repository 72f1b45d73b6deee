#pragma once

#include "abflow/errors.hpp"
#include "abflow/types.hpp"

#include <cmath>

namespace abflow {

/// One Aharonov-Bohm setup: a long solenoid of radius `a` carrying a uniform
/// field B along e_z, with the particle confined between r = a and r = b.
struct AnnulusConfig {
  PhysicalConstants constants{};
  double B = 1.0;
  double a = 1.0;
  double b = 3.0;

  /// Throws DomainError unless 0 < a < b and every constant is positive.
  void validate() const {
    if (!(constants.hbar > 0.0) || !(constants.mass > 0.0) || !(constants.charge > 0.0) ||
        !(constants.light_speed > 0.0)) {
      throw DomainError("physical constants must be positive");
    }
    if (!(a > 0.0)) throw DomainError("inner radius a must be positive");
    if (!(a < b)) throw DomainError("a < b required");
    if (!std::isfinite(B)) throw DomainError("field B must be finite");
  }

  [[nodiscard]] double width() const { return b - a; }
  [[nodiscard]] double flux() const { return B * kPi * a * a; }
  [[nodiscard]] bool contains(double r) const { return r > a && r < b; }
};

}  // namespace abflow
