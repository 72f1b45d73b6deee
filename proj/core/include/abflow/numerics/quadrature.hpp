#pragma once

#include "abflow/annulus_config.hpp"
#include "abflow/types.hpp"

#include <functional>
#include <variant>

namespace abflow::numerics {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_depth = 48;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

using Integrand1d = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [lo, hi].
/// The rule never samples the endpoints, so weak (e.g. logarithmic) endpoint
/// singularities are tolerated. Throws ConvergenceError (with best estimate and bound) when
/// an interval needs bisecting deeper than spec.max_depth.
QuadratureResult integrate_1d_detailed(const Integrand1d& f, double lo, double hi, const QuadratureSpec& spec = {});

inline double integrate_1d(const Integrand1d& f, double lo, double hi, const QuadratureSpec& spec = {}) {
  return integrate_1d_detailed(f, lo, hi, spec).value;
}

/// Integral of f(r) r dr over [a, b]. Uses r = a + (b - a) s^2 so that the
/// algebraic behaviour (r - a)^p of Bessel-ansatz states at the inner wall
/// becomes a regular power of s.
double integrate_radial(const Integrand1d& f, double a, double b, const QuadratureSpec& spec = {});

/// Integral of f(r, theta) over the annulus a < r < b with measure r dr dtheta.
double integrate_annulus(const std::function<double(double, double)>& f, const AnnulusConfig& cfg,
                         const QuadratureSpec& spec = {});

struct IntervalDomain {
  double lo = 0.0;
  double hi = 1.0;
};

struct AnnulusDomain {
  double a = 1.0;
  double b = 3.0;
};

/// Integration region of a wavefunction: a 1-D interval (measure dx) or an
/// annulus (measure r dr dtheta).
using Domain = std::variant<IntervalDomain, AnnulusDomain>;

/// Integral of a Cartesian-point integrand over a domain.
double integrate_domain(const std::function<double(const Vec2&)>& f, const Domain& domain,
                        const QuadratureSpec& spec = {});

}  // namespace abflow::numerics
