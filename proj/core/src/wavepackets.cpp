#include "abflow/wavepackets.hpp"

#include "abflow/errors.hpp"
#include "abflow/numerics/differentiate.hpp"
#include "abflow/numerics/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace abflow::packets {

void GaussianPacketConfig::validate() const {
  if (!(alpha > 0.0)) throw DomainError("Gaussian packet: alpha must be positive");
  if (!(mass > 0.0) || !(hbar > 0.0)) throw DomainError("Gaussian packet: mass and hbar must be positive");
  if (!std::isfinite(k0)) throw DomainError("Gaussian packet: k0 must be finite");
}

double GaussianPacketConfig::epsilon(double t) const {
  const double s = 2.0 * hbar * t / (mass * alpha * alpha);
  return alpha * std::sqrt(1.0 + s * s);
}

GaussianFields gaussian_fields(const GaussianPacketConfig& cfg, double x, double t) {
  const double eps = cfg.epsilon(t);
  const double T = cfg.T();
  const double y = x - cfg.u0() * t;
  GaussianFields f;
  f.rho = std::sqrt(2.0 / kPi) / eps * std::exp(-2.0 * y * y / (eps * eps));
  f.xi = 2.0 * cfg.hbar * y / (cfg.mass * eps * eps);
  f.eta = cfg.u0() + 2.0 * t * cfg.hbar / (cfg.mass * eps * eps * T) * y;
  f.F_Q = 4.0 * cfg.hbar * cfg.hbar * y / (cfg.mass * std::pow(eps, 4));
  f.delta = y * y / (eps * eps) * (t / T) - 0.5 * std::atan(t / T);
  return f;
}

WaveField gaussian_wavefield(const GaussianPacketConfig& cfg) {
  cfg.validate();
  auto amplitude = [cfg](double x, double t) {
    const double eps = cfg.epsilon(t);
    const double y = x - cfg.u0() * t;
    const double modulus = std::pow(2.0 / kPi, 0.25) / std::sqrt(eps) * std::exp(-y * y / (eps * eps));
    const double phase = cfg.k0 * x - cfg.hbar * cfg.k0 * cfg.k0 * t / (2.0 * cfg.mass) + gaussian_fields(cfg, x, t).delta;
    return std::polar(modulus, phase);
  };
  auto eval = [amplitude](const Vec2& p, double t) { return amplitude(p.x, t); };
  auto grad = [cfg, amplitude](const Vec2& p, double t) {
    const double eps = cfg.epsilon(t);
    const double y = p.x - cfg.u0() * t;
    const double ddelta = 2.0 * y * t / (eps * eps * cfg.T());
    const Complex log_derivative(-2.0 * y / (eps * eps), cfg.k0 + ddelta);
    return CVec2{amplitude(p.x, t) * log_derivative, Complex{}};
  };
  return WaveField(eval, 1, grad, true);
}

GaussianConsistency gaussian_consistency(const GaussianPacketConfig& cfg, const std::vector<double>& grid, double t,
                                         double h) {
  cfg.validate();
  if (t == 0.0) throw DomainError("gaussian_consistency: the phase relation needs t != 0");
  if (!(h > 0.0)) throw DomainError("gaussian_consistency: h must be positive");
  const double T = cfg.T();
  GaussianConsistency out;
  for (double x : grid) {
    const double drho_dt = numerics::central_diff([&](double tt) { return gaussian_fields(cfg, x, tt).rho; }, t, h);
    const double dflux_dx = numerics::central_diff(
        [&](double xx) {
          const GaussianFields f = gaussian_fields(cfg, xx, t);
          return f.rho * f.eta;
        },
        x, h);
    out.continuity_residual = std::max(out.continuity_residual, std::abs(drho_dt + dflux_dx));

    const GaussianFields f = gaussian_fields(cfg, x, t);
    const double eps = cfg.epsilon(t);
    // d delta / dx in closed form.
    const double ddelta_dx = 2.0 * (x - cfg.u0() * t) / (eps * eps) * (t / T);
    const double phase_rhs = cfg.hbar * T / (cfg.mass * t) * ddelta_dx;
    out.phase_relation_residual = std::max(out.phase_relation_residual, std::abs(f.xi - phase_rhs));
    out.decomposition_residual =
        std::max(out.decomposition_residual, std::abs(f.eta - cfg.u0() - (t / T) * f.xi));
  }
  return out;
}

void AiryPacketConfig::validate() const {
  if (!(k > 0.0)) throw DomainError("Airy packet: k must be positive");
  if (!(mass > 0.0) || !(hbar > 0.0)) throw DomainError("Airy packet: mass and hbar must be positive");
  if (!(x_lo < x_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) {
    throw DomainError("Airy packet: window must be finite with x_lo < x_hi");
  }
}

double AiryPacketConfig::scale() const { return std::cbrt(2.0 * mass * k) / std::pow(hbar, 2.0 / 3.0); }

WaveField airy_wavefield(const AiryPacketConfig& cfg) {
  cfg.validate();
  const double c = cfg.scale();
  auto shift = [cfg](double t) { return cfg.k * t * t / (2.0 * cfg.mass); };
  auto phase = [cfg](double x, double t) { return cfg.k * t / cfg.hbar * (x - cfg.k * t * t / (3.0 * cfg.mass)); };
  auto eval = [=](const Vec2& p, double t) {
    return std::polar(1.0, phase(p.x, t)) * numerics::airy_ai(c * (p.x - shift(t)));
  };
  auto grad = [=](const Vec2& p, double t) {
    const double z = c * (p.x - shift(t));
    const Complex rotation = std::polar(1.0, phase(p.x, t));
    const Complex d = rotation * (c * numerics::airy_ai_derivative(z) +
                                  Complex(0.0, cfg.k * t / cfg.hbar) * numerics::airy_ai(z));
    return CVec2{d, Complex{}};
  };
  return WaveField(eval, 1, grad, true);
}

AiryFields airy_fields(const AiryPacketConfig& cfg, double x, double t) {
  cfg.validate();
  if (x < cfg.x_lo || x > cfg.x_hi) throw DomainError("airy_fields: x outside the evaluation window");
  const WaveField psi = airy_wavefield(cfg);
  const PhysicalConstants constants{cfg.hbar, cfg.mass, 1.0, 1.0};
  AiryFields f;
  f.psi = psi.eval({x, 0.0}, t);
  f.rho = std::norm(f.psi);
  f.eta = decompose(psi, VectorPotentialSpec::none(), constants, {x, 0.0}, t).eta.x;
  f.F_Q = quantum_force(psi, constants, {x, 0.0}, t).x;
  return f;
}

FreeParticleFields free_particle_fields(double k0, double mass, double hbar, double x, double t) {
  if (!(mass > 0.0) || !(hbar > 0.0)) throw DomainError("free particle: mass and hbar must be positive");
  const WaveField psi(
      [=](const Vec2& p, double tt) { return std::polar(1.0, k0 * p.x - hbar * k0 * k0 * tt / (2.0 * mass)); }, 1,
      [=](const Vec2& p, double tt) {
        const Complex v = std::polar(1.0, k0 * p.x - hbar * k0 * k0 * tt / (2.0 * mass));
        return CVec2{Complex(0.0, k0) * v, Complex{}};
      },
      true);
  const VelocityDecomposition d = decompose(psi, VectorPotentialSpec::none(), {hbar, mass, 1.0, 1.0}, {x, 0.0}, t);
  return {d.eta.x, d.xi_real.x, false};
}

}  // namespace abflow::packets
