#include <doctest.h>

#include "abflow/errors.hpp"
#include "abflow/wavepackets.hpp"

#include <cmath>
#include <vector>

using namespace abflow;
using namespace abflow::packets;

TEST_CASE("gaussian fields at t = 0") {
  GaussianPacketConfig cfg;
  const auto f = gaussian_fields(cfg, 0.5, 0.0);
  CHECK(f.rho == doctest::Approx(std::sqrt(2.0 / kPi) * std::exp(-0.5)).epsilon(1e-14));
  CHECK(f.xi == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.F_Q == doctest::Approx(2.0).epsilon(1e-14));

  // F_Q against -dQ/dx of the Bohm potential of sqrt(rho)
  const auto psi = gaussian_wavefield(cfg);
  const double fq = quantum_force(psi, PhysicalConstants{}, {0.5, 0.0}).x;
  CHECK(fq == doctest::Approx(2.0).epsilon(1e-6));

  cfg.k0 = 1.5;
  const auto c = gaussian_fields(cfg, 0.0, 0.0);
  CHECK(c.eta == doctest::Approx(cfg.u0()));
  CHECK(c.xi == 0.0);
  CHECK(c.F_Q == 0.0);
}

TEST_CASE("gaussian width and spreading time") {
  GaussianPacketConfig cfg;
  cfg.alpha = 2.0;
  CHECK(cfg.T() == doctest::Approx(2.0));
  CHECK(cfg.epsilon(cfg.T()) == doctest::Approx(2.0 * std::sqrt(2.0)));
  cfg.alpha = -1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("gaussian consistency residuals") {
  GaussianPacketConfig cfg;
  cfg.k0 = 1.0;
  for (double t : {0.5 * cfg.T(), cfg.T(), 3.0 * cfg.T()}) {
    std::vector<double> grid;
    const double eps = cfg.epsilon(t);
    for (int i = 0; i < 200; ++i) grid.push_back(cfg.u0() * t - 4.0 * eps + 8.0 * eps * i / 199.0);
    const auto r = gaussian_consistency(cfg, grid, t, 1e-4);
    CHECK(r.continuity_residual <= 1e-6);
    CHECK(r.phase_relation_residual <= 1e-10);
    CHECK(r.decomposition_residual <= 1e-12);
  }
}

TEST_CASE("gaussian approaches the free particle for wide packets") {
  GaussianPacketConfig cfg;
  cfg.alpha = 1e3;
  cfg.k0 = 2.0;
  const auto g = gaussian_fields(cfg, 0.7, 1.3);
  const auto f = free_particle_fields(2.0, 1.0, 1.0, 0.7, 1.3);
  CHECK(std::abs(g.eta - f.eta) <= 1e-4);
  CHECK(f.eta == 2.0);
  CHECK(f.xi == 0.0);
  CHECK_FALSE(f.normalizable);
}

TEST_CASE("gaussian xi decays at late times") {
  GaussianPacketConfig cfg;
  const double offset = 0.5;
  double prev = INFINITY;
  for (double t = 2.0; t <= 64.0; t *= 2.0) {
    const double x = cfg.u0() * t + offset;
    const double xi = std::abs(gaussian_fields(cfg, x, t).xi);
    CHECK(xi < prev);
    prev = xi;
  }
  CHECK(cfg.epsilon(2000.0) / cfg.epsilon(1000.0) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("airy packet") {
  AiryPacketConfig cfg;
  const auto f0 = airy_fields(cfg, -1.0, 0.0);
  CHECK(std::abs(f0.psi.imag()) < 1e-14);
  CHECK(f0.eta == 0.0);
  const auto f1 = airy_fields(cfg, -1.0, 1.5);
  CHECK(f1.eta == doctest::Approx(1.5));

  // non-spreading: rho(x, t) = rho(x - k t^2 / 2m, 0)
  for (double t : {0.5, 1.0}) {
    for (double x = -6.0; x <= 1.0; x += 0.5) {
      const double shift = cfg.k * t * t / (2.0 * cfg.mass);
      CHECK(std::abs(airy_fields(cfg, x, t).rho - airy_fields(cfg, x - shift, 0.0).rho) <= 1e-10);
    }
  }
  for (int i = 0; i < 20; ++i) {
    const double x = -1.5 + 0.15 * i;
    CHECK(std::abs(airy_fields(cfg, x, 0.0).F_Q - cfg.k) <= 1e-4 * cfg.k);
  }
  CHECK_THROWS_AS(airy_fields(cfg, 50.0, 0.0), DomainError);
}
