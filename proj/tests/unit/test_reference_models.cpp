#include <doctest.h>

#include "abflow/errors.hpp"
#include "abflow/numerics/special_functions.hpp"
#include "abflow/reference_models.hpp"

#include <cmath>
#include <random>

using namespace abflow;
using namespace abflow::models;

namespace {

HydrogenState state(int n, int l, int ml) {
  HydrogenState s;
  s.n = n;
  s.l = l;
  s.m_l = ml;
  return s;
}

}  // namespace

TEST_CASE("hydrogen ground state") {
  const auto s = state(1, 0, 0);
  const auto f = hydrogen_fields(s, 0.8, 1.1);
  CHECK(f.J.phi == 0.0);
  CHECK(f.D.theta == doctest::Approx(0.0).scale(1.0));
  CHECK(f.D.r > 0.0);  // density falls outward so -grad rho points out
  CHECK(f.rho == doctest::Approx(std::exp(-1.6) / kPi).epsilon(1e-13));
}

TEST_CASE("hydrogen currents are orthogonal") {
  const auto s = state(2, 1, 1);
  const auto f = hydrogen_fields(s, 2.0, kPi / 2);
  CHECK(std::abs(dot(to_cartesian(f.J, kPi / 2, 0.0), to_cartesian(f.D, kPi / 2, 0.0))) <= 1e-12);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> ur(0.05, 15.0), ut(0.05, kPi - 0.05), up(0.0, kTwoPi);
  for (int n = 1; n <= 3; ++n) {
    for (int l = 0; l < n; ++l) {
      for (int ml = -l; ml <= l; ++ml) {
        for (int i = 0; i < 1000; ++i) {
          const double th = ut(gen), ph = up(gen);
          const auto g = hydrogen_fields(state(n, l, ml), ur(gen), th);
          CHECK(std::abs(dot(to_cartesian(g.J, th, ph), to_cartesian(g.D, th, ph))) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("hydrogen eta") {
  const auto s = state(2, 1, 1);
  for (int i = 0; i < 50; ++i) {
    const double r = 0.2 + 0.3 * i;
    const double th = 0.1 + 2.9 * i / 49.0;
    const auto f = hydrogen_fields(s, r, th);
    CHECK(f.eta.phi * r * std::sin(th) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(hydrogen_fields(s, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(hydrogen_fields(s, 0.0, 1.0), DomainError);
}

TEST_CASE("hydrogen D matches the density gradient") {
  for (int n = 1; n <= 3; ++n) {
    for (int l = 0; l < n; ++l) {
      for (int ml = -l; ml <= l; ++ml) {
        const auto s = state(n, l, ml);
        double peak = 0.0, diff = 0.0;
        for (double th : {0.3, 0.9, 1.4, 2.2}) {
          for (int i = 1; i <= 60; ++i) {
            const auto f = hydrogen_fields(s, 0.25 * i, th);
            peak = std::max(peak, std::hypot(f.D.r, f.D.theta));
            diff = std::max(diff, std::hypot(f.D.r - f.D_numeric.r, f.D.theta - f.D_numeric.theta));
          }
        }
        INFO("n=" << n << " l=" << l << " m=" << ml);
        CHECK(diff <= 1e-10 * peak);
      }
    }
  }
}

TEST_CASE("hydrogen normalization") {
  for (int n = 1; n <= 3; ++n) {
    for (int l = 0; l < n; ++l) {
      for (int ml = -l; ml <= l; ++ml) {
        CHECK(hydrogen_norm(state(n, l, ml)) == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }
  CHECK_THROWS_AS(state(2, 2, 0).validate(), DomainError);
}

TEST_CASE("linear potential Airy model") {
  const auto m = linear_airy_model(1.0, 0.5, 1);
  CHECK(m.energy == doctest::Approx(2.33810741045976704).epsilon(1e-11));
  CHECK(std::abs(m.density(0.0)) < 1e-20);
  CHECK(m.density(-1.0) == 0.0);
  const double total = numerics::integrate_1d([&](double x) { return m.density(x); }, 0.0, 20.0);
  CHECK(std::abs(total - 1.0) <= 0.02);
  // beyond the classical turning point the density decays monotonically
  const double turn = -m.z_n / m.scale;
  double prev = m.density(turn);
  for (double x = turn + 0.25; x < turn + 8.0; x += 0.25) {
    const double v = m.density(x);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("closed-form energies") {
  CHECK(half_harmonic_energy(1.0, 1.0, 0) == doctest::Approx(1.5));
  CHECK(box_energy(1.0, 1.0, 2) == doctest::Approx(2.0 * kPi * kPi));
  for (int n = 1; n <= 5; ++n) CHECK(box_energy(1.3, 0.7, n) / box_energy(1.3, 0.7, 1) == doctest::Approx(n * n));
}

TEST_CASE("mass scaling slopes") {
  const std::vector<double> masses{1, 2, 4, 8};
  CHECK(std::abs(mass_scaling_fit({ModelKind::linear_airy, 1.0, 1}, masses) + 1.0 / 3.0) <= 1e-10);
  CHECK(std::abs(mass_scaling_fit({ModelKind::half_harmonic, 1.0, 0}, masses) + 0.5) <= 1e-10);
  CHECK(std::abs(mass_scaling_fit({ModelKind::box, 1.0, 1}, masses) + 1.0) <= 1e-10);
  CHECK_THROWS(mass_scaling_fit({ModelKind::box, 1.0, 1}, {1.0, 1.0, 2.0}));
  CHECK(parse_model_kind("half_harmonic") == ModelKind::half_harmonic);
  CHECK(to_string(ModelKind::box) == "box");
}
