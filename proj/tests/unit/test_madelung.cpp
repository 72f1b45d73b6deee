#include <doctest.h>

#include "abflow/ab_annulus.hpp"
#include "abflow/madelung.hpp"
#include "abflow/numerics/differentiate.hpp"
#include "abflow/wavepackets.hpp"

#include <cmath>

using namespace abflow;

namespace {

WaveField plane_wave(double k0) {
  return WaveField([k0](const Vec2& p, double) { return std::exp(Complex(0.0, k0 * p.x)); }, 1,
                   [k0](const Vec2& p, double) {
                     return CVec2{Complex(0.0, k0) * std::exp(Complex(0.0, k0 * p.x)), Complex{}};
                   });
}

AnnulusConfig default_cfg() { return AnnulusConfig{}; }

}  // namespace

TEST_CASE("decompose plane wave") {
  const auto psi = plane_wave(1.7);
  const PhysicalConstants c{};
  const auto d = decompose(psi, VectorPotentialSpec::none(), c, {0.3, 0.0});
  CHECK(d.eta.x == doctest::Approx(1.7).epsilon(1e-14));
  CHECK(d.eta.y == 0.0);
  CHECK(std::abs(d.xi_real.x) < 1e-14);
  CHECK(d.rho == doctest::Approx(1.0));
  CHECK(std::abs(quantum_potential(psi, c, {0.3, 0.0})) < 1e-10);
  CHECK(std::abs(quantum_force(psi, c, {0.3, 0.0}).x) < 1e-8);
}

TEST_CASE("decompose AB state at r = 2") {
  const auto cfg = default_cfg();
  const auto s = annulus::eigenstate(cfg, 1, 1);
  const auto A = annulus::vector_potential_spec(cfg);
  const Vec2 p = from_polar(2.0, 0.9);
  const auto d = decompose(s.wavefield(), A, cfg.constants, p);
  const auto eta = polar_components(d.eta, p);
  const auto v = polar_components(d.v_quasi, p);
  CHECK(eta.theta == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(eta.r) < 1e-12);
  CHECK(v.theta == doctest::Approx(0.25).epsilon(1e-12));
  // zeta is the negated xi
  CHECK(d.zeta_real.x == doctest::Approx(-d.xi_real.x));
  CHECK(d.zeta_imag.y == doctest::Approx(-d.xi_imag.y));
  CHECK(d.w_quasi.x == d.xi_real.x);
}

TEST_CASE("decompose real wavefunction") {
  const auto f = [](const Vec2& p) { return std::exp(-p.x * p.x) * (1.0 + 0.3 * p.y); };
  const WaveField psi([&](const Vec2& p, double) { return Complex(f(p), 0.0); });
  const PhysicalConstants c{};
  const Vec2 p{0.4, 0.2};
  const auto d = decompose(psi, VectorPotentialSpec::none(), c, p);
  CHECK(std::abs(d.eta.x) < 1e-14);
  CHECK(std::abs(d.eta.y) < 1e-14);
  const auto rho = [&](const Vec2& q) { return f(q) * f(q); };
  const Vec2 g = numerics::gradient(rho, p, 1e-4);
  CHECK(d.xi_real.x == doctest::Approx(-0.5 * g.x / rho(p)).epsilon(1e-8));
  CHECK(d.xi_real.y == doctest::Approx(-0.5 * g.y / rho(p)).epsilon(1e-8));
}

TEST_CASE("decompose at a nodal point throws") {
  const auto cfg = default_cfg();
  const auto s = annulus::eigenstate(cfg, 1, 1);
  CHECK_THROWS_AS(decompose(s.wavefield(), VectorPotentialSpec::none(), cfg.constants, {3.0, 0.0}), DensityFloorError);
}

TEST_CASE("quasi currents") {
  const auto cfg = default_cfg();
  const auto s = annulus::eigenstate(cfg, 2, 1);
  const auto psi = s.wavefield();
  const Vec2 p = from_polar(1.8, -2.1);

  const auto free = quasi_currents(psi, VectorPotentialSpec::none(), cfg.constants, p);
  const auto fd = flux_densities(psi, VectorPotentialSpec::none(), cfg.constants, p);
  CHECK(free.gamma.x == doctest::Approx(fd.rho_eta.x).epsilon(1e-13));
  CHECK(free.gamma.y == doctest::Approx(fd.rho_eta.y).epsilon(1e-13));

  const auto A = annulus::vector_potential_spec(cfg);
  const auto q = quasi_currents(psi, A, cfg.constants, p);
  CHECK(q.gamma.x == doctest::Approx(q.gamma_from_velocity.x).epsilon(1e-12));
  CHECK(q.gamma.y == doctest::Approx(q.gamma_from_velocity.y).epsilon(1e-12));
  CHECK(std::abs(dot(q.gamma, q.delta)) <= 1e-12);

  // near the inner wall delta stays finite and equals -(hbar/2M) grad rho
  const Vec2 edge = from_polar(1.0 + 1e-3, 0.3);
  const auto e = quasi_currents(psi, A, cfg.constants, edge);
  const Vec2 g = numerics::gradient([&](const Vec2& x) { return psi.density(x); }, edge, 1e-5);
  CHECK(e.delta.x == doctest::Approx(-0.5 * g.x).epsilon(1e-6));
  CHECK(e.delta.y == doctest::Approx(-0.5 * g.y).epsilon(1e-6));
  CHECK(std::isfinite(e.delta.x));
}

TEST_CASE("gamma dot delta vanishes for separable states") {
  AnnulusConfig cfg;
  cfg.B = 0.37;
  const auto A = annulus::vector_potential_spec(cfg);
  for (int m = -2; m <= 2; ++m) {
    const auto s = annulus::eigenstate(cfg, m, 2);
    const auto psi = s.wavefield();
    for (int i = 1; i < 40; ++i) {
      const Vec2 p = from_polar(1.0 + 2.0 * i / 40.0, 0.31 * i);
      try {
        const auto f = flux_densities(psi, A, cfg.constants, p);
        CHECK(std::abs(dot(f.gamma, f.delta)) <= 1e-12);
      } catch (const DensityFloorError&) {
      }
    }
  }
}

TEST_CASE("gauge transform") {
  const auto cfg = default_cfg();
  const auto s = annulus::eigenstate(cfg, 1, 1);
  const auto psi = s.wavefield();
  const Vec2 p = from_polar(2.2, 1.1);
  const auto base = decompose(psi, VectorPotentialSpec::none(), cfg.constants, p);

  const auto shifted = gauge_transform(psi, [](const Vec2&) { return 0.8; }, cfg.constants);
  const auto d0 = decompose(shifted, VectorPotentialSpec::none(), cfg.constants, p);
  CHECK(d0.rho == base.rho);
  CHECK(d0.eta.x == doctest::Approx(base.eta.x).epsilon(1e-9));
  CHECK(d0.eta.y == doctest::Approx(base.eta.y).epsilon(1e-9));
  CHECK(d0.xi_real.x == doctest::Approx(base.xi_real.x).epsilon(1e-12));

  const double sigma = 0.35;
  const auto rot = gauge_transform(
      psi, [sigma](const Vec2& q) { return sigma * std::atan2(q.y, q.x); }, cfg.constants);
  const auto d1 = decompose(rot, VectorPotentialSpec::none(), cfg.constants, p);
  const auto dv = polar_components(d1.eta - base.eta, p);
  CHECK(dv.theta == doctest::Approx(sigma / 2.2).epsilon(1e-8));
  CHECK(std::abs(dv.r) < 1e-8);
  CHECK(d1.rho == base.rho);
}

TEST_CASE("osmotic expectation") {
  const auto cfg = default_cfg();
  const auto s = annulus::eigenstate(cfg, 1, 1);
  const auto A = annulus::vector_potential_spec(cfg);
  const auto o = osmotic_expectation(s.wavefield(), A, cfg.constants, annulus::domain(cfg));
  CHECK(std::abs(o.real_part.x) < 1e-8);
  CHECK(std::abs(o.real_part.y) < 1e-8);

  AnnulusConfig free = cfg;
  free.B = 0.0;
  const auto s0 = annulus::eigenstate(free, 1, 1);
  const auto o0 = osmotic_expectation(s0.wavefield(), annulus::vector_potential_spec(free), free.constants,
                                      annulus::domain(free));
  CHECK(std::abs(o0.real_part.x) < 1e-8);
  CHECK(std::abs(o0.directional.x) < 1e-12);
  CHECK(std::abs(o0.directional.y) < 1e-12);
}

TEST_CASE("energy identity") {
  const auto cfg = default_cfg();
  const auto A = annulus::vector_potential_spec(cfg);
  {
    const auto s = annulus::eigenstate(cfg, 2, 2);
    const auto e = integrated_energy_identity(s.wavefield(), A, cfg.constants, annulus::domain(cfg));
    CHECK(e.residual <= 1e-6);
    CHECK(e.lhs == doctest::Approx(e.rhs).epsilon(1e-6));
  }
  {
    // nu = 1/2: |grad Psi|^2 ~ 1/(r - a) at the wall, both sides diverge logarithmically
    const auto s = annulus::eigenstate(cfg, 1, 1);
    CHECK_THROWS_AS(integrated_energy_identity(s.wavefield(), A, cfg.constants, annulus::domain(cfg)),
                    ConvergenceError);
  }
  {
    // uniform ring wave e^{i m theta}, A = 0
    const int m = 2;
    const double c = 1.0 / std::sqrt(kPi * (cfg.b * cfg.b - cfg.a * cfg.a));
    const WaveField ring([&](const Vec2& p, double) { return c * std::exp(Complex(0.0, m * std::atan2(p.y, p.x))); });
    const auto e = integrated_energy_identity(ring, VectorPotentialSpec::none(), cfg.constants, annulus::domain(cfg));
    const double exact = 0.5 * m * m * c * c * kTwoPi * std::log(cfg.b / cfg.a);
    CHECK(e.lhs == doctest::Approx(exact).epsilon(1e-7));
    CHECK(e.rhs == doctest::Approx(exact).epsilon(1e-7));
  }
  {
    packets::GaussianPacketConfig g;
    g.alpha = 1.3;
    g.k0 = 0.8;
    const auto e = integrated_energy_identity(packets::gaussian_wavefield(g), VectorPotentialSpec::none(),
                                              PhysicalConstants{}, numerics::IntervalDomain{-14.0, 14.0});
    const double exact = 1.0 / (2.0 * g.alpha * g.alpha) * (1.0 + g.k0 * g.k0 * g.alpha * g.alpha);
    CHECK(e.lhs == doctest::Approx(exact).epsilon(1e-7));
    CHECK(e.rhs == doctest::Approx(exact).epsilon(1e-7));
  }
}
