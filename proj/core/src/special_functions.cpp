#include "abflow/numerics/special_functions.hpp"

#include "abflow/errors.hpp"
#include "abflow/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace abflow::numerics {

namespace {

constexpr double kMaxOrder = 50.0;
constexpr double kMaxArgument = 1.0e4;
// Below this the ascending series (summed in long double) loses at most
// ~1e-14 to cancellation; above it the Hankel expansion's smallest term is
// below 1e-13.
constexpr double kSeriesLimit = 15.0;

BesselPair series_pair(double order, double x) {
  if (x == 0.0) {
    if (order == 0.0) return {1.0, 0.0};
    return {order > 0.0 ? 0.0 : std::numeric_limits<double>::infinity(), 0.0};
  }
  // Extended precision absorbs the cancellation between terms of size
  // ~e^x / x near the crossover.
  const long double half = 0.5L * x;
  const long double q = -half * half;
  const long double nu = order;
  long double term = std::pow(half, nu) / std::tgamma(nu + 1.0L);
  long double sum = term;
  long double sum_next = term * half / (nu + 1.0L);
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    sum_next += term * half / (k + nu + 1.0L);
    if (k > half && std::abs(term) <= 1e-20L * std::max(std::abs(sum), std::abs(sum_next))) break;
  }
  return {static_cast<double>(sum), static_cast<double>(sum_next)};
}

void check_window(double order, double x) {
  if (!(order >= 0.0) || !(x >= 0.0)) {
    throw DomainError("bessel_j: order and argument must be non-negative");
  }
  if (order > kMaxOrder || x > kMaxArgument) {
    throw DomainError("bessel_j: outside the support window (order <= 50, x <= 1e4)");
  }
}

BesselPair large_argument_pair(double order, double x) {
  if (order < 2.0) return {detail::bessel_j_hankel(order, x), detail::bessel_j_hankel(order + 1.0, x)};

  const double whole = std::floor(order);
  const double frac = order - whole;
  const int n = static_cast<int>(whole);
  const double j_frac = detail::bessel_j_hankel(frac, x);
  const double j_frac1 = detail::bessel_j_hankel(frac + 1.0, x);

  if (order <= x) {
    // Oscillatory regime: forward recurrence is stable.
    double prev = j_frac;
    double cur = j_frac1;
    for (int k = 1; k <= n; ++k) {
      const double next = 2.0 * (frac + k) / x * cur - prev;
      prev = cur;
      cur = next;
    }
    return {prev, cur};
  }

  // Miller backward recurrence from well above the order.
  const int start = n + 21 + static_cast<int>(std::sqrt(160.0 * (n + 1)));
  double above = 0.0;
  double cur = 1.0;
  double at_n = 0.0;
  double at_n1 = 0.0;
  for (int k = start; k >= 1; --k) {
    const double below = 2.0 * (frac + k) / x * cur - above;
    above = cur;
    cur = below;
    if (k == n + 2) at_n1 = cur;  // after this step cur holds order frac + n + 1
    if (k == n + 1) at_n = cur;
    if (std::abs(cur) > 1e250) {
      above *= 1e-250;
      cur *= 1e-250;
      at_n *= 1e-250;
      at_n1 *= 1e-250;
    }
  }
  // cur = f(frac), above = f(frac + 1)
  const double scale = std::abs(j_frac) > std::abs(j_frac1) ? j_frac / cur : j_frac1 / above;
  return {scale * at_n, scale * at_n1};
}

void require_unit_range(double x, const char* who) {
  if (!(x >= -1.0 && x <= 1.0)) throw DomainError(std::string(who) + ": x must lie in [-1, 1]");
}

long double airy_maclaurin(long double x) {
  constexpr long double c1 = 0.355028053887817239260063186004183176L;
  constexpr long double c2 = 0.258819403792806798405183560189203963L;
  const long double x3 = x * x * x;
  long double f_term = 1.0L;
  long double g_term = x;
  long double f = f_term;
  long double g = g_term;
  for (int k = 1; k < 400; ++k) {
    f_term *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    g_term *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    f += f_term;
    g += g_term;
    if (std::abs(f_term) + std::abs(g_term) <= 1e-21L * (std::abs(f) + std::abs(g))) break;
  }
  return c1 * f - c2 * g;
}

long double airy_prime_maclaurin(long double x) {
  constexpr long double c1 = 0.355028053887817239260063186004183176L;
  constexpr long double c2 = 0.258819403792806798405183560189203963L;
  const long double x3 = x * x * x;
  // f' = sum 3k a_k x^(3k-1), g' = sum (3k+1) b_k x^(3k)
  long double f_term = x * x / 6.0L;
  long double g_term = 1.0L;
  long double f = 3.0L * f_term;
  long double g = g_term;
  for (int k = 1; k < 400; ++k) {
    f_term *= x3 / ((3.0L * k + 2.0L) * (3.0L * k + 3.0L));
    g_term *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    const long double f_add = (3.0L * k + 3.0L) * f_term;
    const long double g_add = (3.0L * k + 1.0L) * g_term;
    f += f_add;
    g += g_add;
    if (std::abs(f_add) + std::abs(g_add) <= 1e-21L * (std::abs(f) + std::abs(g))) break;
  }
  return c1 * f - c2 * g;
}

double airy_prime_positive_asymptotic(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  double u = 1.0;
  double sum = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 100; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    const double v = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    const double term = (k % 2 == 0 ? 1.0 : -1.0) * v / std::pow(zeta, k);
    if (std::abs(term) >= last) break;
    sum += term;
    last = std::abs(term);
    if (last < 1e-17) break;
  }
  return -std::pow(x, 0.25) * std::exp(-zeta) / (2.0 * std::sqrt(kPi)) * sum;
}

double airy_positive_asymptotic(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  double u = 1.0;
  double term = 1.0;
  double sum = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 100; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    term = (k % 2 == 0 ? 1.0 : -1.0) * u / std::pow(zeta, k);
    if (std::abs(term) >= last) break;
    sum += term;
    last = std::abs(term);
    if (last < 1e-17) break;
  }
  return std::exp(-zeta) / (2.0 * std::sqrt(kPi) * std::pow(x, 0.25)) * sum;
}

}  // namespace

namespace detail {

double bessel_j_series(double order, double x) { return series_pair(order, x).j; }

double bessel_j_hankel(double order, double x) {
  const double mu = 4.0 * order * order;
  const double inv8x = 1.0 / (8.0 * x);
  double a = 1.0;
  double p = 1.0;
  double q = 0.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) * inv8x / k;
    const double mag = std::abs(a);
    if (mag == 0.0) break;
    if (mag >= last && k > 2) break;  // asymptotic series: stop at the smallest term
    const int phase = (k / 2) % 2 == 0 ? 1 : -1;
    if (k % 2 == 0) {
      p += phase * a;
    } else {
      q += phase * a;
    }
    last = mag;
    if (mag < 1e-17) break;
  }
  const double shift = (0.5 * order + 0.25) * kPi;
  const double cos_w = std::cos(x) * std::cos(shift) + std::sin(x) * std::sin(shift);
  const double sin_w = std::sin(x) * std::cos(shift) - std::cos(x) * std::sin(shift);
  return std::sqrt(2.0 / (kPi * x)) * (p * cos_w - q * sin_w);
}

}  // namespace detail

BesselPair bessel_j_pair(double order, double x) {
  check_window(order, x);
  if (x <= kSeriesLimit) return series_pair(order, x);
  return large_argument_pair(order, x);
}

double bessel_j(double order, double x) {
  check_window(order, x);
  if (x <= kSeriesLimit) return series_pair(order, x).j;
  if (order < 2.0) return detail::bessel_j_hankel(order, x);
  return large_argument_pair(order, x).j;
}

double bessel_j_derivative(double order, double x) {
  check_window(order, x);
  if (x == 0.0) {
    if (order == 0.0 || order > 1.0) return 0.0;
    if (order == 1.0) return 0.5;
    return std::numeric_limits<double>::infinity();
  }
  const BesselPair jp = bessel_j_pair(order, x);
  return order / x * jp.j - jp.j_next;
}

double bessel_j_zero(double order, int n) {
  if (!(order >= 0.0) || order > kMaxOrder) throw DomainError("bessel_j_zero: order must lie in [0, 50]");
  if (n < 1 || n > 100) throw DomainError("bessel_j_zero: n must lie in [1, 100]");

  constexpr double step = kPi / 4.0;
  const double scan_limit = order + (n + 3) * kPi + 4.0 * std::cbrt(order + 1.0) + 10.0;
  double lo = order;
  double f_lo = bessel_j(order, lo);
  int count = 0;
  while (lo < scan_limit) {
    const double hi = lo + step;
    const double f_hi = bessel_j(order, hi);
    if (f_hi == 0.0) {
      if (++count == n) return hi;
    } else if ((f_lo > 0.0) != (f_hi > 0.0) && f_lo != 0.0) {
      if (++count == n) {
        double a = lo;
        double b = hi;
        double fa = f_lo;
        for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
          const double mid = 0.5 * (a + b);
          const double fm = bessel_j(order, mid);
          if (fm == 0.0) return mid;
          if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
        if (b - a > 1e-12) throw ConvergenceError("bessel_j_zero: bisection did not converge", 0.5 * (a + b), b - a);
        return 0.5 * (a + b);
      }
    }
    lo = hi;
    f_lo = f_hi;
  }
  throw ConvergenceError("bessel_j_zero: scan exhausted before the requested zero");
}

double airy_ai(double x) {
  if (!std::isfinite(x)) throw DomainError("airy_ai: argument must be finite");
  if (x > 6.25) return airy_positive_asymptotic(x);
  if (x >= -8.0) return static_cast<double>(airy_maclaurin(static_cast<long double>(x)));
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  return std::sqrt(z) / 3.0 * (detail::bessel_j_hankel(1.0 / 3.0, zeta) + detail::bessel_j_hankel(-1.0 / 3.0, zeta));
}

double airy_ai_derivative(double x) {
  if (!std::isfinite(x)) throw DomainError("airy_ai_derivative: argument must be finite");
  if (x > 6.25) return airy_prime_positive_asymptotic(x);
  if (x >= -8.0) return static_cast<double>(airy_prime_maclaurin(static_cast<long double>(x)));
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  return z / 3.0 * (detail::bessel_j_hankel(2.0 / 3.0, zeta) - detail::bessel_j_hankel(-2.0 / 3.0, zeta));
}

double airy_ai_zero(int n) {
  if (n < 1 || n > 50) throw DomainError("airy_ai_zero: n must lie in [1, 50]");
  constexpr double step = 0.1;
  double hi = 0.0;
  double f_hi = airy_ai(hi);
  int count = 0;
  while (hi > -45.0) {
    const double lo = hi - step;
    const double f_lo = airy_ai(lo);
    if ((f_lo > 0.0) != (f_hi > 0.0)) {
      if (++count == n) {
        double a = lo;
        double b = hi;
        double fb = f_hi;
        for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
          const double mid = 0.5 * (a + b);
          const double fm = airy_ai(mid);
          if (fm == 0.0) return mid;
          if ((fm > 0.0) == (fb > 0.0)) {
            b = mid;
            fb = fm;
          } else {
            a = mid;
          }
        }
        return 0.5 * (a + b);
      }
    }
    hi = lo;
    f_hi = f_lo;
  }
  throw ConvergenceError("airy_ai_zero: scan exhausted before the requested zero");
}

double assoc_laguerre(int p, double q, double x) {
  if (p < 0 || p > 6) throw DomainError("assoc_laguerre: degree must lie in [0, 6]");
  if (p == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + q - x;
  for (int k = 1; k < p; ++k) {
    const double next = ((2.0 * k + 1.0 + q - x) * cur - (k + q) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double assoc_legendre(int l, int m, double x) {
  if (m < 0 || m > l || l > 4) throw DomainError("assoc_legendre: need 0 <= m <= l <= 4");
  require_unit_range(x, "assoc_legendre");
  // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
  double pmm = 1.0;
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  for (int i = 1; i <= m; ++i) pmm *= -(2.0 * i - 1.0) * s;
  if (l == m) return pmm;
  double pm1 = x * (2.0 * m + 1.0) * pmm;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double next = ((2.0 * ll - 1.0) * x * pm1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pm1;
    pm1 = next;
  }
  return pm1;
}

double assoc_legendre_derivative(int l, int m, double x) {
  if (!(x > -1.0 && x < 1.0)) throw DomainError("assoc_legendre_derivative: x must lie in (-1, 1)");
  const double lower = l > m ? assoc_legendre(l - 1, m, x) : 0.0;
  // (x^2 - 1) P' = l x P_l^m - (l + m) P_{l-1}^m
  return (l * x * assoc_legendre(l, m, x) - (l + m) * lower) / (x * x - 1.0);
}

}  // namespace abflow::numerics
