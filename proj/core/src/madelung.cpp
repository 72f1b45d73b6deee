#include "abflow/madelung.hpp"

#include "abflow/errors.hpp"
#include "abflow/numerics/differentiate.hpp"

#include <cmath>
#include <utility>

namespace abflow {

namespace {

Complex complex_diff(const std::function<Complex(double)>& f, double x, double h) {
  const Complex d1 = f(x + h) - f(x - h);
  const Complex d2 = f(x + 2.0 * h) - f(x - 2.0 * h);
  return (8.0 * d1 - d2) / (12.0 * h);
}

// Psi* grad Psi, the building block of every current.
CVec2 conj_times_grad(const WaveSample& s) {
  const Complex c = std::conj(s.value);
  return {c * s.grad.x, c * s.grad.y};
}

void require_density(double rho) {
  if (!(rho > kDensityFloor)) throw DensityFloorError("density below floor at evaluation point", rho);
}

Vec2 density_gradient(const WaveSample& s) { return real(conj_times_grad(s)) * 2.0; }

}  // namespace

WaveField::WaveField(Eval eval, int dimension, Grad grad, bool time_dependent, double fd_step)
    : eval_(std::move(eval)),
      grad_(std::move(grad)),
      dimension_(dimension),
      time_dependent_(time_dependent),
      fd_step_(fd_step) {
  if (!eval_) throw DomainError("WaveField: evaluation function required");
  if (dimension_ != 1 && dimension_ != 2) throw DomainError("WaveField: dimension must be 1 or 2");
  if (!(fd_step_ > 0.0)) throw DomainError("WaveField: fd_step must be positive");
}

CVec2 WaveField::grad(const Vec2& p, double t) const {
  if (grad_) return grad_(p, t);
  const double h = fd_step_;
  CVec2 g;
  g.x = complex_diff([&](double x) { return eval_({x, p.y}, t); }, p.x, h);
  if (dimension_ == 2) g.y = complex_diff([&](double y) { return eval_({p.x, y}, t); }, p.y, h);
  return g;
}

double WaveField::density(const Vec2& p, double t) const {
  if (density_) return density_(p, t);
  // Same rounding as sample(), so copies built by with_density agree bitwise.
  if (sampler_) return sampler_(p, t).density;
  return std::norm(eval_(p, t));
}

WaveSample WaveField::sample(const Vec2& p, double t) const {
  if (sampler_) {
    WaveSample s = sampler_(p, t);
    if (density_) s.density = density_(p, t);
    return s;
  }
  WaveSample s;
  s.value = eval_(p, t);
  s.grad = grad(p, t);
  s.density = density_ ? density_(p, t) : std::norm(s.value);
  return s;
}

WaveField WaveField::with_sampler(Sampler sampler) const {
  WaveField copy = *this;
  copy.sampler_ = std::move(sampler);
  return copy;
}

Complex WaveField::eval_t(const Vec2& p, double t, double h) const {
  if (!time_dependent_) return {};
  return complex_diff([&](double tt) { return eval_(p, tt); }, t, h);
}

WaveField WaveField::with_density(Density density) const {
  WaveField copy = *this;
  copy.density_ = std::move(density);
  return copy;
}

VelocityDecomposition decompose(const WaveField& psi, const VectorPotentialSpec& A, const PhysicalConstants& cfg,
                                const Vec2& p, double t) {
  const WaveSample s = psi.sample(p, t);
  require_density(s.density);
  const double rho = s.density;
  const double hm = cfg.hbar / cfg.mass;
  const Vec2 a_field = A.at(p);

  VelocityDecomposition d;
  d.rho = rho;
  const CVec2 cg = conj_times_grad(s);
  d.eta = imag(cg) * (hm / rho);
  d.delta = density_gradient(s) * (-0.5 * hm);
  d.xi_real = d.delta / rho;
  d.xi_imag = a_field * cfg.coupling();
  d.zeta_real = -d.xi_real;
  d.zeta_imag = -d.xi_imag;
  d.v_quasi = d.eta - d.xi_imag;
  d.w_quasi = d.xi_real;

  // (i hbar / 2M)(Psi grad Psi* - Psi* grad Psi) - (q/Mc) A rho
  const Complex i(0.0, 1.0);
  const Complex gx = i * (s.value * std::conj(s.grad.x) - std::conj(s.value) * s.grad.x);
  const Complex gy = i * (s.value * std::conj(s.grad.y) - std::conj(s.value) * s.grad.y);
  d.gamma = Vec2{gx.real(), gy.real()} * (0.5 * hm) - a_field * (cfg.coupling() * rho);
  return d;
}

QuasiCurrents quasi_currents(const WaveField& psi, const VectorPotentialSpec& A, const PhysicalConstants& cfg,
                             const Vec2& p, double t) {
  const VelocityDecomposition d = decompose(psi, A, cfg, p, t);
  return {d.gamma, d.v_quasi * d.rho, d.delta};
}

FluxDensities flux_densities(const WaveField& psi, const VectorPotentialSpec& A, const PhysicalConstants& cfg,
                             const Vec2& p, double t) {
  const WaveSample s = psi.sample(p, t);
  const double hm = cfg.hbar / cfg.mass;
  FluxDensities f;
  f.rho = s.density;
  f.rho_eta = imag(conj_times_grad(s)) * hm;
  f.rho_xi_imag = A.at(p) * (cfg.coupling() * s.density);
  f.gamma = f.rho_eta - f.rho_xi_imag;
  f.delta = density_gradient(s) * (-0.5 * hm);
  return f;
}

double quantum_potential(const WaveField& psi, const PhysicalConstants& cfg, const Vec2& p, double t, double h) {
  const WaveSample s = psi.sample(p, t);
  require_density(s.density);
  const double rho = s.density;
  const Vec2 grad_rho = density_gradient(s);

  double lap_rho = numerics::central_diff(
      [&](double x) { return density_gradient(psi.sample({x, p.y}, t)).x; }, p.x, h);
  if (psi.dimension() == 2) {
    lap_rho += numerics::central_diff(
        [&](double y) { return density_gradient(psi.sample({p.x, y}, t)).y; }, p.y, h);
  }
  const double bracket = lap_rho / (2.0 * rho) - norm_sq(grad_rho) / (4.0 * rho * rho);
  return -(cfg.hbar * cfg.hbar / (2.0 * cfg.mass)) * bracket;
}

Vec2 quantum_force(const WaveField& psi, const PhysicalConstants& cfg, const Vec2& p, double t, double h) {
  const double inner = h * 0.1;
  Vec2 f;
  f.x = -numerics::central_diff([&](double x) { return quantum_potential(psi, cfg, {x, p.y}, t, inner); }, p.x, h);
  if (psi.dimension() == 2) {
    f.y = -numerics::central_diff([&](double y) { return quantum_potential(psi, cfg, {p.x, y}, t, inner); }, p.y,
                                  h);
  }
  return f;
}

WaveField gauge_transform(const WaveField& psi, GaugeFunction lambda, const PhysicalConstants& cfg,
                          GaugeGradient grad_lambda) {
  const double scale = cfg.charge / (cfg.hbar * cfg.light_speed);
  if (!grad_lambda) {
    const double h = psi.fd_step();
    grad_lambda = [lambda, h](const Vec2& p) { return numerics::gradient(lambda, p, h); };
  }
  auto eval = [psi, lambda, scale](const Vec2& p, double t) {
    return std::polar(1.0, scale * lambda(p)) * psi.eval(p, t);
  };
  auto grad = [psi, lambda, grad_lambda, scale](const Vec2& p, double t) {
    const Complex phase = std::polar(1.0, scale * lambda(p));
    const Complex value = psi.eval(p, t);
    const CVec2 g = psi.grad(p, t);
    const Vec2 gl = grad_lambda(p);
    const Complex i(0.0, 1.0);
    CVec2 out;
    out.x = phase * (g.x + i * scale * gl.x * value);
    out.y = phase * (g.y + i * scale * gl.y * value);
    return out;
  };
  WaveField transformed(eval, psi.dimension(), grad, psi.time_dependent(), psi.fd_step());
  return transformed.with_density([psi](const Vec2& p, double t) { return psi.density(p, t); });
}

OsmoticExpectation osmotic_expectation(const WaveField& psi, const VectorPotentialSpec& A,
                                       const PhysicalConstants& cfg, const numerics::Domain& domain,
                                       const numerics::QuadratureSpec& spec) {
  // rho Re(zeta) = (hbar/2M) grad rho needs no division, so nodal points are harmless.
  const double half_hm = 0.5 * cfg.hbar / cfg.mass;
  auto osmotic = [&](const Vec2& p) { return density_gradient(psi.sample(p)) * half_hm; };
  auto weighted_a = [&](const Vec2& p) { return A.at(p) * (cfg.coupling() * psi.density(p)); };

  numerics::QuadratureSpec loose = spec;
  // A component that integrates to zero has no relative scale.
  if (loose.abs_tol == 0.0) loose.abs_tol = 1e-13;

  OsmoticExpectation out;
  out.real_part.x = numerics::integrate_domain([&](const Vec2& p) { return osmotic(p).x; }, domain, loose);
  out.real_part.y = numerics::integrate_domain([&](const Vec2& p) { return osmotic(p).y; }, domain, loose);
  if (A.active()) {
    out.directional.x = numerics::integrate_domain([&](const Vec2& p) { return weighted_a(p).x; }, domain, loose);
    out.directional.y = numerics::integrate_domain([&](const Vec2& p) { return weighted_a(p).y; }, domain, loose);
  }
  return out;
}

double kinetic_energy_density(const WaveField& psi, const VectorPotentialSpec& A, const PhysicalConstants& cfg,
                              const Vec2& p, double t) {
  const WaveSample s = psi.sample(p, t);
  const Vec2 a_field = A.at(p);
  const Complex minus_i_hbar(0.0, -cfg.hbar);
  const double qc = cfg.charge / cfg.light_speed;
  const Complex px = minus_i_hbar * s.grad.x - qc * a_field.x * s.value;
  const Complex py = minus_i_hbar * s.grad.y - qc * a_field.y * s.value;
  return (std::norm(px) + std::norm(py)) / (2.0 * cfg.mass);
}

double hydrodynamic_energy_density(const WaveField& psi, const VectorPotentialSpec& A,
                                   const PhysicalConstants& cfg, const Vec2& p, double t) {
  const FluxDensities f = flux_densities(psi, A, cfg, p, t);
  if (!(f.rho > 0.0)) return 0.0;
  return 0.5 * cfg.mass * (norm_sq(f.gamma) + norm_sq(f.delta)) / f.rho;
}

EnergyIdentity integrated_energy_identity(const WaveField& psi, const VectorPotentialSpec& A,
                                          const PhysicalConstants& cfg, const numerics::Domain& domain,
                                          const numerics::QuadratureSpec& spec) {
  EnergyIdentity e;
  e.lhs = numerics::integrate_domain([&](const Vec2& p) { return kinetic_energy_density(psi, A, cfg, p); }, domain,
                                     spec);
  e.rhs = numerics::integrate_domain([&](const Vec2& p) { return hydrodynamic_energy_density(psi, A, cfg, p); },
                                     domain, spec);
  e.residual = std::abs(e.lhs - e.rhs) / std::abs(e.lhs);
  return e;
}

}  // namespace abflow
