#include <doctest.h>

#include "abflow/ab_annulus.hpp"
#include "abflow/errors.hpp"
#include "abflow/nelson.hpp"
#include "abflow/numerics/random.hpp"
#include "abflow/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace abflow;
using namespace abflow::nelson;

namespace {

RadialTarget target_for(const annulus::ABState& s, const AnnulusConfig& cfg) {
  return RadialTarget([s](double r) { return s.radial.density(r); }, cfg.a, cfg.b);
}

std::vector<double> oracle_radii(const RadialTarget& t, std::uint64_t seed, std::size_t count) {
  numerics::RandomStream rs(seed, 99);
  std::vector<double> out(count);
  for (auto& r : out) r = t.inverse_cdf(rs.uniform());
  return out;
}

SdeConfig small_run(std::int64_t steps, int trajectories) {
  SdeConfig sde;
  sde.steps = steps;
  sde.n_trajectories = trajectories;
  return sde;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("statistics against scipy") {
  CHECK(stats::ks_p_value(0.02, 1000) == doctest::Approx(0.8149480335331604).epsilon(1e-9));
  CHECK(stats::ks_p_value(0.05, 200) == doctest::Approx(0.6886673872769066).epsilon(1e-9));
  CHECK(stats::ks_p_value(0.1, 50) == doctest::Approx(0.676620149700246).epsilon(1e-9));
  CHECK(stats::chi_square_tail(10.0, 12) == doctest::Approx(0.615960654833063).epsilon(1e-12));
  CHECK(stats::chi_square_tail(40.5, 30) == doctest::Approx(0.09553768209568389).epsilon(1e-12));
  CHECK(stats::chi_square_tail(3.2, 1) == doctest::Approx(0.07363827012030258).epsilon(1e-12));
  CHECK(stats::ks_distance({0.5}, [](double x) { return x; }) == doctest::Approx(0.5));
}

TEST_CASE("chi-square merges sparse bins") {
  const std::vector<double> obs{1, 2, 50, 48, 3, 1, 1};
  const std::vector<double> exp{2, 2, 50, 50, 2, 1, 1};
  const auto r = stats::chi_square(obs, exp, 20.0);
  CHECK(r.merged_bins < 7);
  CHECK(r.dof == r.merged_bins - 1);
  CHECK(r.p_value > 0.1);
  CHECK_THROWS_AS(stats::chi_square({1, 1}, {1, 1}, 20.0), InsufficientSamplesError);
  const auto g = stats::grouped_mean({{1.0, 3.0}, {2.0, 2.0}, {4.0}});
  CHECK(g.mean == doctest::Approx(8.0 / 3.0));
  CHECK(g.standard_error > 0.0);
}

TEST_CASE("sde config validation") {
  SdeConfig sde;
  CHECK_NOTHROW(sde.validate());
  sde.burn_in = sde.steps;
  CHECK_THROWS_AS(sde.validate(), DomainError);
  sde = SdeConfig{};
  sde.dt = 0.0;
  CHECK_THROWS_AS(sde.validate(), DomainError);
  sde = SdeConfig{};
  sde.n_trajectories = 0;
  CHECK_THROWS_AS(sde.validate(), DomainError);
  sde = SdeConfig{};
  sde.max_halvings = 9;
  CHECK_THROWS_AS(sde.validate(), DomainError);
}

TEST_CASE("drifts of a plane wave") {
  const double k0 = 1.3;
  const WaveField psi([k0](const Vec2& p, double) { return std::exp(Complex(0.0, k0 * p.x)); }, 1);
  const auto d = drifts(psi, PhysicalConstants{}, {0.2, 0.0});
  CHECK(d.forward.x == doctest::Approx(k0).epsilon(1e-9));
  CHECK(d.backward.x == doctest::Approx(k0).epsilon(1e-9));
  CHECK(std::abs(d.osmotic.x) < 1e-9);
}

TEST_CASE("drift identities on the reference state") {
  const AnnulusConfig cfg;
  const auto s = annulus::eigenstate(cfg, 1, 1);
  const auto psi = s.wavefield();
  for (int i = 1; i < 20; ++i) {
    const Vec2 p = from_polar(1.0 + 0.1 * i, 0.4 * i);
    const auto d = drifts(psi, cfg.constants, p);
    CHECK(norm(d.forward + d.backward - 2.0 * d.current) <= 1e-12);
    CHECK(norm(d.forward - d.backward - 2.0 * d.osmotic) <= 1e-12);
    const CVec2 half_sum = (d.mean_forward + d.mean_backward) * Complex(0.5, 0.0);
    CHECK(std::abs(half_sum.x - d.current.x) <= 1e-12);
    CHECK(std::abs(half_sum.y - d.current.y) <= 1e-12);
    const CVec2 half_diff = (d.mean_forward + d.mean_backward * Complex(-1.0, 0.0)) * Complex(0.0, 0.5);
    CHECK(std::abs(half_diff.x - d.osmotic.x) <= 1e-12);
    CHECK(std::abs(half_diff.y - d.osmotic.y) <= 1e-12);
  }

  // golden-section maximum of the radial density: no radial osmotic drift there
  double lo = 1.0, hi = 3.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    (s.radial.density(x1) < s.radial.density(x2) ? lo : hi) = (s.radial.density(x1) < s.radial.density(x2) ? x1 : x2);
  }
  const Vec2 p = from_polar(0.5 * (lo + hi), 0.8);
  const auto d = drifts(psi, cfg.constants, p);
  CHECK(std::abs(polar_components(d.osmotic, p).r) < 1e-6);
  CHECK(std::abs(polar_components(d.forward, p).theta) > 0.1);
}

TEST_CASE("radial target") {
  const AnnulusConfig cfg;
  const auto s = annulus::eigenstate(cfg, 1, 1);
  const auto t = target_for(s, cfg);
  CHECK(t.mass() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t.cdf(cfg.a) == 0.0);
  CHECK(t.cdf(cfg.b) == doctest::Approx(1.0));
  for (double u : {0.01, 0.3, 0.5, 0.9, 0.999}) CHECK(t.cdf(t.inverse_cdf(u)) == doctest::Approx(u).epsilon(1e-10));
  CHECK(t.pdf(2.0) == doctest::Approx(kTwoPi * 2.0 * s.radial.density(2.0)).epsilon(1e-9));
}

TEST_CASE("stationarity statistic self-test and power") {
  const AnnulusConfig cfg;
  const auto s1 = annulus::eigenstate(cfg, 1, 1);
  const auto t1 = target_for(s1, cfg);
  int passed = 0;
  for (int run = 0; run < 100; ++run) {
    const auto radii = oracle_radii(t1, 1000 + run, 10000);
    if (radial_sample_test(radii, radii, t1, 40).p_value > 0.01) ++passed;
  }
  CHECK(passed >= 98);

  const auto t2 = target_for(annulus::eigenstate(cfg, 1, 2), cfg);
  const auto radii = oracle_radii(t1, 7, 10000);
  const auto wrong = radial_sample_test(radii, radii, t2, 40);
  CHECK(wrong.p_value < 1e-6);
  CHECK_THROWS_AS(radial_sample_test({1.5, 2.0}, {1.5, 2.0}, t1, 40), InsufficientSamplesError);
}

TEST_CASE("simulation is deterministic and thread independent") {
  const AnnulusConfig cfg;
  const auto s = annulus::eigenstate(cfg, 1, 1);
  const auto t = target_for(s, cfg);
  const auto sde = small_run(3000, 5);
  const auto a = simulate(s.wavefield(), cfg, sde, t, 1);
  const auto b = simulate(s.wavefield(), cfg, sde, t, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].stream_id == b[i].stream_id);
    CHECK(a[i].rejected_steps == b[i].rejected_steps);
    REQUIRE(a[i].positions.size() == b[i].positions.size());
    CHECK(std::equal(a[i].positions.begin(), a[i].positions.end(), b[i].positions.begin()));
  }
  for (const auto& tr : a) {
    for (const auto& p : tr.positions) {
      CHECK(cfg.contains(norm(p)));
    }
  }
  CHECK(rejected_fraction(a) < 0.01);
}

TEST_CASE("field-free m = 0 state has no mean rotation") {
  AnnulusConfig cfg;
  cfg.B = 0.0;
  const auto s = annulus::eigenstate(cfg, 0, 1);
  const auto tr = simulate(s.wavefield(), cfg, small_run(20000, 32), target_for(s, cfg));
  std::vector<double> disp;
  for (const auto& x : tr) disp.push_back(angular_displacement(x));
  const double mean = std::accumulate(disp.begin(), disp.end(), 0.0) / disp.size();
  double var = 0.0;
  for (double d : disp) var += (d - mean) * (d - mean);
  const double se = std::sqrt(var / (disp.size() - 1) / disp.size());
  CHECK(std::abs(mean) <= 4.0 * se);

  const auto lz = ergodic_angular_momentum(tr, s.wavefield(), annulus::vector_potential_spec(cfg), cfg.constants);
  CHECK(std::abs(lz.mean) <= std::max(lz.standard_error, 1e-12));
}

TEST_CASE("ergodic angular momentum, field free m = 1") {
  AnnulusConfig cfg;
  cfg.B = 0.0;
  const auto s = annulus::eigenstate(cfg, 1, 1);
  const auto tr = simulate(s.wavefield(), cfg, small_run(20000, 16), target_for(s, cfg));
  const auto lz = ergodic_angular_momentum(tr, s.wavefield(), annulus::vector_potential_spec(cfg), cfg.constants);
  CHECK(lz.samples >= 10000);
  CHECK(std::abs(lz.mean - 1.0) <= 0.02);
  CHECK_THROWS_AS(ergodic_angular_momentum({}, s.wavefield(), annulus::vector_potential_spec(cfg), cfg.constants),
                  InsufficientSamplesError);
}

TEST_CASE("KS distance shrinks with four times the samples") {
  const AnnulusConfig cfg;
  const auto s = annulus::eigenstate(cfg, 1, 1);
  const auto t = target_for(s, cfg);
  std::vector<double> short_ks, long_ks;
  for (int seed = 0; seed < 10; ++seed) {
    for (std::int64_t steps : {25000, 100000}) {
      auto sde = small_run(steps, 4);
      sde.seed = 500 + seed;
      const auto tr = simulate(s.wavefield(), cfg, sde, t);
      (steps == 25000 ? short_ks : long_ks).push_back(stationarity_test(tr, t).ks_distance);
    }
  }
  CHECK(median(short_ks) / median(long_ks) >= 1.5);
}
