#pragma once

// Real-order Bessel J, Airy Ai and the orthogonal polynomials needed by the
// hydrogen comparison states. All functions are pure and reentrant.

namespace abflow::numerics {

/// J_order(x) for 0 <= order <= 50 and 0 <= x <= 1e4.
///
/// Ascending series for x <= 15. Beyond that the Hankel asymptotic expansion
/// supplies J for the fractional part of the order, and the integer part is
/// reached by forward recurrence (order <= x) or normalized Miller backward
/// recurrence (order > x). Throws DomainError for negative arguments.
double bessel_j(double order, double x);

/// J_order'(x), from J_{order-1} = (2 order / x) J_order - J_{order+1}
/// substituted into (J_{order-1} - J_{order+1}) / 2. At x = 0 returns the
/// limiting value (infinity for 0 < order < 1).
double bessel_j_derivative(double order, double x);

struct BesselPair {
  double j = 0.0;       ///< J_order(x)
  double j_next = 0.0;  ///< J_{order+1}(x)
};

/// J_order and J_{order+1} from one evaluation.
BesselPair bessel_j_pair(double order, double x);

/// n-th positive zero tau_{order,n} of J_order, n in [1, 100].
/// Brackets by scanning from just above `order` with step pi/4, then bisects
/// to 1e-12 absolute. Throws ConvergenceError when the scan runs out.
double bessel_j_zero(double order, int n);

/// Airy function Ai(x); accurate on [-40, 20] (covers the first 50 zeros).
double airy_ai(double x);

/// Ai'(x) on the same range.
double airy_ai_derivative(double x);

/// n-th zero of Ai (negative), n in [1, 50].
double airy_ai_zero(int n);

/// Generalized Laguerre polynomial L_p^{(q)}(x), 0 <= p <= 6.
double assoc_laguerre(int p, double q, double x);

/// Associated Legendre function P_l^m(x) with the Condon-Shortley phase,
/// 0 <= m <= l <= 4, x in [-1, 1].
double assoc_legendre(int l, int m, double x);

/// dP_l^m/dx on the open interval (-1, 1).
double assoc_legendre_derivative(int l, int m, double x);

namespace detail {
// Exposed for seam tests. Valid for any order > -1.
double bessel_j_series(double order, double x);
double bessel_j_hankel(double order, double x);
}  // namespace detail

}  // namespace abflow::numerics
