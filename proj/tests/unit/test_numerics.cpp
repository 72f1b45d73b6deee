#include <doctest.h>

#include "abflow/errors.hpp"
#include "abflow/numerics/differentiate.hpp"
#include "abflow/numerics/quadrature.hpp"
#include "abflow/numerics/random.hpp"
#include "abflow/numerics/special_functions.hpp"

#include <cmath>
#include <numeric>
#include <vector>

using namespace abflow;
using namespace abflow::numerics;

// Reference values below were computed with mpmath at 30 digits.

TEST_CASE("bessel_j trivial and half-integer values") {
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(bessel_j(2.5, 0.0) == 0.0);
  for (double x : {0.5, 1.0, 2.0}) {
    CHECK(bessel_j(0.5, x) == doctest::Approx(std::sqrt(2.0 / (kPi * x)) * std::sin(x)).epsilon(1e-14));
  }
  CHECK(std::abs(bessel_j(0.0, 2.404825557695773)) < 1e-8);
}

TEST_CASE("bessel_j sin identity on (0, 30]") {
  for (int i = 1; i <= 600; ++i) {
    const double x = 0.05 * i;
    CHECK(std::abs(bessel_j(0.5, x) * std::sqrt(kPi * x / 2.0) - std::sin(x)) < 1e-10);
  }
}

TEST_CASE("bessel_j against mpmath") {
  struct Ref {
    double nu, x, j;
  };
  const Ref refs[] = {
      {0, 1, 0.765197686557966551},         {0.25, 0.7, 0.767660286468553135},
      {2.3, 17, 0.191097500533346741},      {7.5, 30, 0.131420298123189651},
      {40, 25, 1.67457741556226605e-6},     {1.5, 1000, -0.0141687061043222005},
      {0, 50, 0.055812327669251815},        {49.5, 60, -0.133003939983893618},
      {0.75, 14.9, 0.191979059606016229},   {0.75, 15.1, 0.171757227753073405},
      {3.2, 15.0, -0.20737389108593792},
  };
  for (const auto& r : refs) {
    INFO("nu=" << r.nu << " x=" << r.x);
    CHECK(bessel_j(r.nu, r.x) == doctest::Approx(r.j).epsilon(1e-11));
  }
}

TEST_CASE("bessel_j series and hankel agree across the crossover") {
  for (double nu : {0.0, 0.3, 0.5, 1.7}) {
    for (double x : {16.0, 18.0, 20.0}) {
      CHECK(std::abs(detail::bessel_j_series(nu, x) - detail::bessel_j_hankel(nu, x)) < 1e-11);
    }
  }
}

TEST_CASE("bessel_j rejects out-of-range arguments") {
  CHECK_THROWS_AS(bessel_j(0.5, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(-0.5, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(51.0, 1.0), DomainError);
}

TEST_CASE("bessel_j_derivative matches J0' = -J1") {
  CHECK(bessel_j_derivative(0.0, 1.0) == doctest::Approx(-bessel_j(1.0, 1.0)).epsilon(1e-13));
  const auto pair = bessel_j_pair(2.3, 7.0);
  CHECK(pair.j == doctest::Approx(bessel_j(2.3, 7.0)).epsilon(1e-14));
  CHECK(pair.j_next == doctest::Approx(bessel_j(3.3, 7.0)).epsilon(1e-13));
}

TEST_CASE("bessel_j_zero") {
  for (int n = 1; n <= 10; ++n) CHECK(std::abs(bessel_j_zero(0.5, n) - n * kPi) < 1e-10);
  CHECK(bessel_j_zero(0.0, 1) == doctest::Approx(2.40482555769577277).epsilon(1e-12));
  CHECK(bessel_j_zero(0.25, 1) == doctest::Approx(2.78088772399497763).epsilon(1e-12));
  CHECK(bessel_j_zero(2.5, 3) == doctest::Approx(12.3229409705665821).epsilon(1e-12));
  CHECK(bessel_j_zero(1.75, 5) == doctest::Approx(17.591588738617636).epsilon(1e-12));
  CHECK(bessel_j_zero(10.0, 2) == doctest::Approx(18.4334636669665826).epsilon(1e-12));
  CHECK_THROWS_AS(bessel_j_zero(0.5, 0), DomainError);
}

TEST_CASE("airy_ai and zeros") {
  CHECK(airy_ai(0.0) == doctest::Approx(0.355028053887817239).epsilon(1e-13));
  CHECK(airy_ai_derivative(0.0) == doctest::Approx(-0.258819403792806798).epsilon(1e-13));
  struct Ref {
    double x, ai, dai;
  };
  const Ref refs[] = {{-5.5, 0.0177815412765749756, 0.864197217771398391},
                      {3, 0.00659113935746071914, -0.0119129767059513185},
                      {-30, -0.0879681884568421628, 1.22862060263748513},
                      {2, 0.0349241304232743791, -0.0530903844336536317},
                      {-12.25, -0.267644698827142298, 0.480871368427004454}};
  for (const auto& r : refs) {
    INFO("x=" << r.x);
    CHECK(std::abs(airy_ai(r.x) - r.ai) < 1e-11);
    CHECK(std::abs(airy_ai_derivative(r.x) - r.dai) < 1e-10);
  }
  CHECK(airy_ai_zero(1) == doctest::Approx(-2.33810741045976704).epsilon(1e-11));
  CHECK(airy_ai_zero(2) == doctest::Approx(-4.08794944413097062).epsilon(1e-11));
  CHECK(airy_ai_zero(10) == doctest::Approx(-12.8287767528657572).epsilon(1e-11));
  CHECK(airy_ai_zero(50) == doctest::Approx(-38.0210086772552544).epsilon(1e-11));
  double prev = airy_ai(2.0);
  for (double x : {5.0, 10.0, 20.0}) {
    const double v = airy_ai(x);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("orthogonal polynomials") {
  CHECK(assoc_laguerre(0, 2.5, 3.7) == 1.0);
  CHECK(assoc_laguerre(3, 2.5, 1.7) == doctest::Approx(0.528666666666666865).epsilon(1e-13));
  CHECK(assoc_laguerre(5, 1.0, 4.2) == doctest::Approx(1.08146399999999961).epsilon(1e-13));
  CHECK(assoc_legendre(1, 0, 0.37) == doctest::Approx(0.37));
  CHECK(assoc_legendre(2, 1, 0.5) == doctest::Approx(-3.0 * 0.5 * std::sqrt(0.75)).epsilon(1e-14));
  CHECK(assoc_legendre(3, 2, 0.3) == doctest::Approx(4.095).epsilon(1e-14));
  CHECK(assoc_legendre(4, 3, -0.6) == doctest::Approx(32.256).epsilon(1e-14));
  const double x = 0.4;
  const double fd = central_diff([](double t) { return assoc_legendre(3, 1, t); }, x, 1e-4);
  CHECK(assoc_legendre_derivative(3, 1, x) == doctest::Approx(fd).epsilon(1e-9));
}

TEST_CASE("integrate_1d and annulus") {
  CHECK(integrate_1d([](double x) { return x; }, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  AnnulusConfig cfg;
  CHECK(integrate_annulus([](double, double) { return 1.0; }, cfg) == doctest::Approx(8.0 * kPi).epsilon(1e-12));
  const double z1 = airy_ai_zero(1);
  const double v = integrate_1d([&](double x) { return std::pow(airy_ai(x + z1), 2); }, 0.0, 20.0);
  CHECK(v == doctest::Approx(0.49169661790062885).epsilon(1e-9));
  // logarithmic endpoint singularity
  CHECK(integrate_1d([](double x) { return std::log(x); }, 0.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-9));
  const double radial = integrate_radial([](double r) { return std::sqrt(r - 1.0); }, 1.0, 3.0);
  // integral of sqrt(r-1) r dr on [1,3]
  const double exact = 2.0 / 5.0 * std::pow(2.0, 2.5) + 2.0 / 3.0 * std::pow(2.0, 1.5);
  CHECK(radial == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("integrate_1d reports non-convergence") {
  QuadratureSpec spec;
  spec.max_depth = 4;
  try {
    integrate_1d([](double x) { return 1.0 / x; }, 0.0, 1.0, spec);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.estimate() > 0.0);
    CHECK(e.error_bound() > 0.0);
  }
  spec.rel_tol = -1.0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("integrate_domain interval and annulus") {
  CHECK(integrate_domain([](const Vec2& p) { return p.x * p.x; }, IntervalDomain{0.0, 3.0}) ==
        doctest::Approx(9.0).epsilon(1e-13));
  CHECK(integrate_domain([](const Vec2& p) { return norm_sq(p); }, AnnulusDomain{1.0, 2.0}) ==
        doctest::Approx(kPi * (16.0 - 1.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("central differences") {
  CHECK(std::abs(central_diff([](double x) { return std::sin(x); }, 0.0, 1e-3) - 1.0) < 1e-10);
  CHECK(std::abs(central_diff([](double x) { return std::exp(x); }, 1.0, 1e-3) - std::exp(1.0)) < 1e-9);
  CHECK(std::abs(central_diff([](double x) { return bessel_j(0.0, x); }, 1.0, 1e-3) + bessel_j(1.0, 1.0)) < 1e-8);
  CHECK(std::abs(central_diff_2nd([](double x) { return std::sin(x); }, 0.7, 1e-3) + std::sin(0.7)) < 1e-8);
  const auto f = [](const Vec2& p) { return p.x * p.x * p.y + p.y * p.y * p.y; };
  const Vec2 g = gradient(f, {1.0, 2.0}, 1e-3);
  CHECK(g.x == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(g.y == doctest::Approx(13.0).epsilon(1e-10));
  CHECK(laplacian(f, {1.0, 2.0}, 1e-3) == doctest::Approx(16.0).epsilon(1e-8));
  // rigid rotation has curl 2
  CHECK(curl_z([](const Vec2& p) { return Vec2{-p.y, p.x}; }, {0.3, -0.2}, 1e-3) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("random streams") {
  RandomStream a(42, 7), b(42, 7);
  const auto va = normal_variates(a, 1000);
  const auto vb = normal_variates(b, 1000);
  CHECK(va == vb);

  RandomStream big(20240611, derive_stream_id(20240611, 0));
  const auto v = normal_variates(big, 100000);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  CHECK(std::abs(mean) <= 0.013);
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= v.size() - 1;
  CHECK(std::abs(var - 1.0) < 0.02);

  RandomStream s1(5, derive_stream_id(5, 1)), s2(5, derive_stream_id(5, 2));
  const auto x = normal_variates(s1, 10000);
  const auto y = normal_variates(s2, 10000);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
  }
  CHECK(std::abs(sxy / std::sqrt(sxx * syy)) <= 0.02);
  CHECK(derive_stream_id(5, 1) != derive_stream_id(5, 2));

  RandomStream u(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double r = u.uniform();
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
  }
}

TEST_CASE("special functions are pure") {
  CHECK(bessel_j(3.7, 22.1) == bessel_j(3.7, 22.1));
  CHECK(bessel_j_zero(0.3, 4) == bessel_j_zero(0.3, 4));
  CHECK(airy_ai(-7.3) == airy_ai(-7.3));
}
