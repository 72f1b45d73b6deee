#include "abflow/ab_annulus.hpp"

#include "abflow/errors.hpp"
#include "abflow/numerics/differentiate.hpp"
#include "abflow/numerics/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abflow::annulus {

namespace {

constexpr double kCurlInnerStep = 1e-3;
constexpr double kCurlOuterStep = 1e-2;

numerics::QuadratureSpec normalization_spec() {
  numerics::QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  return spec;
}

double theta_component(const Vec2& v, const Vec2& p) { return dot(v, unit_theta(p)); }

bool close(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)}); }

}  // namespace

double flux_parameter(const AnnulusConfig& cfg) {
  const auto& c = cfg.constants;
  return -c.charge * cfg.B * cfg.a * cfg.a / (2.0 * c.hbar * c.light_speed);
}

Vec2 vector_potential(const AnnulusConfig& cfg, const Vec2& p) {
  const double r = norm(p);
  if (!(r > 0.0)) throw DomainError("vector potential is singular at r = 0");
  const double magnitude = r >= cfg.a ? cfg.B * cfg.a * cfg.a / (2.0 * r) : cfg.B * r / 2.0;
  return unit_theta(p) * magnitude;
}

double vector_potential_curl(const AnnulusConfig& cfg, const Vec2& p) {
  return norm(p) < cfg.a ? cfg.B : 0.0;
}

VectorPotentialSpec vector_potential_spec(const AnnulusConfig& cfg) {
  VectorPotentialSpec spec;
  spec.A = [cfg](const Vec2& p) { return vector_potential(cfg, p); };
  spec.curl = [cfg](const Vec2& p) { return vector_potential_curl(cfg, p); };
  return spec;
}

Vec2 solenoid_current_check(const AnnulusConfig& cfg, const GaugeGradient& grad_lambda, const Vec2& p) {
  const double h_in = kCurlInnerStep * cfg.a;
  const double h_out = kCurlOuterStep * cfg.a;
  const double reach = 2.0 * (h_in + h_out) * 1.01;
  const double r = norm(p);
  if (r <= reach || std::abs(r - cfg.a) <= reach) {
    throw DomainError("solenoid_current_check: point too close to r = 0 or r = a");
  }
  auto a_prime = [&](const Vec2& q) {
    Vec2 v = vector_potential(cfg, q);
    if (grad_lambda) v += grad_lambda(q);
    return v;
  };
  auto curl = [&](const Vec2& q) { return numerics::curl_z(a_prime, q, h_in); };
  return numerics::curl_of_axial(curl, p, h_out);
}

double RadialMode::value(double r) const {
  if (!(r > a && r < b)) return 0.0;
  return norm * numerics::bessel_j(nu, k * (r - a));
}

double RadialMode::derivative(double r) const {
  if (!(r >= a && r <= b)) return 0.0;
  return norm * k * numerics::bessel_j_derivative(nu, k * (r - a));
}

double RadialMode::second_derivative(double r) const {
  if (!(r > a && r < b)) return 0.0;
  const double x = k * (r - a);
  const double j = numerics::bessel_j(nu, x);
  const double jp = numerics::bessel_j_derivative(nu, x);
  const double jpp = -jp / x - (1.0 - nu * nu / (x * x)) * j;
  return norm * k * k * jpp;
}

RadialMode radial_mode(const AnnulusConfig& cfg, double nu, int n) {
  cfg.validate();
  RadialMode mode;
  mode.nu = nu;
  mode.n = n;
  mode.a = cfg.a;
  mode.b = cfg.b;
  mode.tau = numerics::bessel_j_zero(nu, n);
  mode.k = mode.tau / cfg.width();
  const double k = mode.k;
  const double a = cfg.a;
  const double integral = numerics::integrate_radial(
      [&](double r) {
        const double j = numerics::bessel_j(nu, k * (r - a));
        return j * j;
      },
      cfg.a, cfg.b, normalization_spec());
  mode.norm = 1.0 / std::sqrt(kTwoPi * integral);
  return mode;
}

Complex ABState::value(const Vec2& p) const {
  const Polar q = to_polar(p);
  const double radial_value = radial.value(q.r);
  if (radial_value == 0.0) return {};
  return std::polar(radial_value, m * q.theta);
}

CVec2 ABState::grad(const Vec2& p) const {
  const Polar q = to_polar(p);
  if (!(q.r > radial.a && q.r < radial.b)) return {};
  const double R = radial.value(q.r);
  const double dR = radial.derivative(q.r);
  const Complex phase = std::polar(1.0, m * q.theta);
  const double c = std::cos(q.theta);
  const double s = std::sin(q.theta);
  const Complex tangential(0.0, m * R / q.r);
  return {phase * (dR * c - tangential * s), phase * (dR * s + tangential * c)};
}

WaveField ABState::wavefield() const {
  const ABState self = *this;
  WaveField field([self](const Vec2& p, double) { return self.value(p); }, 2,
                  [self](const Vec2& p, double) { return self.grad(p); });
  // One Bessel pair yields value and derivative together.
  return field.with_sampler([self](const Vec2& p, double) {
    WaveSample s;
    const double r = abflow::norm(p);
    const RadialMode& mode = self.radial;
    if (!(r > mode.a && r < mode.b)) return s;
    const double x = mode.k * (r - mode.a);
    const numerics::BesselPair jp = numerics::bessel_j_pair(mode.nu, x);
    const double R = mode.norm * jp.j;
    const double dR = mode.norm * mode.k * (mode.nu / x * jp.j - jp.j_next);
    const double c = p.x / r;
    const double sn = p.y / r;
    const Complex phase = std::polar(1.0, self.m * std::atan2(p.y, p.x));
    const Complex tangential(0.0, self.m * R / r);
    s.value = phase * R;
    s.grad = {phase * (dR * c - tangential * sn), phase * (dR * sn + tangential * c)};
    s.density = R * R;
    return s;
  });
}

ABState eigenstate(const AnnulusConfig& cfg, int m, int n) {
  cfg.validate();
  if (n < 1) throw DomainError("eigenstate: radial index n must be >= 1");
  ABState s;
  s.m = m;
  s.n = n;
  s.lambda = flux_parameter(cfg);
  s.nu = std::abs(m + s.lambda);
  s.radial = radial_mode(cfg, s.nu, n);
  s.tau = s.radial.tau;
  s.k = s.radial.k;
  s.norm = s.radial.norm;
  const auto& c = cfg.constants;
  s.energy = c.hbar * c.hbar * s.k * s.k / (2.0 * c.mass);
  return s;
}

numerics::Domain domain(const AnnulusConfig& cfg) { return numerics::AnnulusDomain{cfg.a, cfg.b}; }

AngularMomenta angular_momenta(const ABState& state, const AnnulusConfig& cfg, const numerics::QuadratureSpec& spec) {
  const WaveField psi = state.wavefield();
  const VectorPotentialSpec A = vector_potential_spec(cfg);
  const double M = cfg.constants.mass;
  numerics::QuadratureSpec s = spec;
  if (s.abs_tol == 0.0) s.abs_tol = 1e-14 * cfg.constants.hbar;

  AngularMomenta out;
  out.total = numerics::integrate_domain(
      [&](const Vec2& p) { return M * norm(p) * theta_component(flux_densities(psi, A, cfg.constants, p).gamma, p); },
      domain(cfg), s);
  out.osmotic = numerics::integrate_domain(
      [&](const Vec2& p) {
        return -M * norm(p) * theta_component(flux_densities(psi, A, cfg.constants, p).rho_xi_imag, p);
      },
      domain(cfg), s);
  out.canonical = out.total - out.osmotic;
  return out;
}

EnergyDecomposition energy_decomposition(const ABState& state, const AnnulusConfig& cfg,
                                         const numerics::QuadratureSpec& spec) {
  const WaveField psi = state.wavefield();
  const VectorPotentialSpec A = vector_potential_spec(cfg);
  const auto& c = cfg.constants;
  const numerics::Domain dom = domain(cfg);

  auto weighted_square = [&](const Vec2& p, bool rotational) {
    const FluxDensities f = flux_densities(psi, A, c, p);
    if (!(f.rho > 0.0)) return 0.0;
    const Vec2& current = rotational ? f.gamma : f.delta;
    return 0.5 * c.mass * norm_sq(current) / f.rho;
  };

  EnergyDecomposition e;
  e.helmholtz_energy = state.energy;
  e.rotational = numerics::integrate_domain([&](const Vec2& p) { return weighted_square(p, true); }, dom, spec);
  const double lam = state.lambda;
  e.t_m_lambda = numerics::integrate_domain(
      [&](const Vec2& p) {
        const double r2 = norm_sq(p);
        return (lam * lam + 2.0 * state.m * lam) * c.hbar * c.hbar / (2.0 * c.mass * r2) * psi.density(p);
      },
      dom, spec);
  e.radial = numerics::integrate_domain([&](const Vec2& p) { return weighted_square(p, false); }, dom, spec);
  e.total = numerics::integrate_domain([&](const Vec2& p) { return kinetic_energy_density(psi, A, c, p); }, dom,
                                       spec);
  e.residual = std::abs(e.total - e.rotational - e.radial) / std::abs(e.total);
  return e;
}

QuantumPotentialClosedForm closed_form_Q_and_force(const ABState& state, const AnnulusConfig& cfg, double r) {
  const auto& c = cfg.constants;
  const double ml = state.m + state.lambda;
  const double v = c.hbar * ml / (c.mass * r);
  QuantumPotentialClosedForm out;
  out.Q = -c.hbar * c.hbar * ml * ml / (2.0 * c.mass * r * r);
  out.F_r = -c.hbar * c.hbar * ml * ml / (c.mass * r * r * r);
  out.centripetal = -c.mass * v * v / r;
  return out;
}

VortexFields vortex_fields(const AnnulusConfig& cfg, double r, int m) {
  if (!(r > 0.0)) throw DomainError("vortex_fields: r must be positive");
  const auto& c = cfg.constants;
  VortexFields out;
  out.omega = -c.coupling() * cfg.B;
  out.dv_in = out.omega * r / 2.0;
  out.dv_out = out.omega * cfg.a * cfg.a / (2.0 * r);
  const double v = c.hbar * (m + flux_parameter(cfg)) / (c.mass * r);
  out.pressure_analogue = -0.5 * c.mass * v * v;
  return out;
}

Vec2 diffusion_velocity(const AnnulusConfig& cfg, const Vec2& p) {
  return vector_potential(cfg, p) * (-cfg.constants.coupling());
}

MagneticForce magnetic_force(const AnnulusConfig& cfg, const Vec3& v, const Vec2& p) {
  const auto& c = cfg.constants;
  const Vec3 field{0.0, 0.0, norm(p) < cfg.a ? cfg.B : 0.0};
  const Vec3 omega = (-c.coupling()) * field;
  return {(c.charge / c.light_speed) * cross(v, field), (-c.mass) * cross(v, omega)};
}

double circulation(const std::function<Vec2(const Vec2&)>& field, const Loop& loop, int segments) {
  if (segments < 4) throw DomainError("circulation: at least 4 segments required");
  if (!(loop.radius > 0.0)) throw DomainError("circulation: loop radius must be positive");

  // Sum of F . t over the nodes at angles (offset + j) * 2 pi / count.
  auto node_sum = [&](int count, double offset, double& magnitude) {
    double sum = 0.0;
    for (int j = 0; j < count; ++j) {
      const double phi = (offset + j) * kTwoPi / count;
      const Vec2 tangent{-std::sin(phi), std::cos(phi)};
      const double value = dot(field(loop.center + from_polar(loop.radius, phi)), tangent);
      sum += value;
      magnitude += std::abs(value);
    }
    return sum;
  };

  constexpr int kMaxSegments = 1 << 22;
  double magnitude = 0.0;
  int n = segments;
  double sum = node_sum(n, 0.0, magnitude);
  double previous = sum * loop.radius * kTwoPi / n;
  while (n < kMaxSegments) {
    sum += node_sum(n, 0.5, magnitude);
    n *= 2;
    const double current = sum * loop.radius * kTwoPi / n;
    const double scale = std::max(std::abs(current), magnitude * loop.radius * kTwoPi / (1.5 * n));
    if (std::abs(current - previous) <= 1e-9 * scale || (scale == 0.0 && current == previous)) return current;
    previous = current;
  }
  throw ConvergenceError("circulation: refinement did not settle", previous);
}

SystemBReport system_b_equivalence(const AnnulusConfig& cfg, int m, double r) {
  if (!(r > cfg.a && r < cfg.b)) throw DomainError("system_b_equivalence: r must lie inside the annulus");
  const auto& c = cfg.constants;
  const double lam = flux_parameter(cfg);
  const double h2m = c.hbar * c.hbar / c.mass;

  SystemBReport rep;
  rep.r = r;
  rep.lambda = lam;
  rep.V_ext = h2m * m * (m + 2.0 * lam) / (2.0 * r * r);
  rep.F_ext = h2m * m * (m + 2.0 * lam) / (r * r * r);
  const double dv = vortex_fields(cfg, r).dv_out;
  const double v_initial = c.hbar * m / (c.mass * r);
  rep.F_vortex = c.mass * dv * dv / r + c.mass * dv * v_initial / r;
  rep.F_matching = h2m * lam * (2.0 * m + lam) / (r * r * r);

  // A potential C hbar^2 / (2 M r^2) shifts the centrifugal order to sqrt(m^2 + C).
  rep.nu_system_a = std::abs(m + lam);
  rep.nu_from_V_ext = std::sqrt(std::max(0.0, double(m) * m + m * (m + 2.0 * lam)));
  rep.nu_from_F_vortex = std::sqrt(std::max(0.0, double(m) * m + lam * lam + lam * m));
  rep.ext_matches_vortex = close(rep.F_ext, rep.F_vortex);
  rep.ext_matches_system_a = close(rep.nu_from_V_ext, rep.nu_system_a);
  rep.vortex_matches_system_a = close(rep.nu_from_F_vortex, rep.nu_system_a);

  std::ostringstream out;
  out.precision(12);
  out << "F_ext=" << rep.F_ext << (rep.ext_matches_vortex ? " agrees with " : " disagrees with ")
      << "F_vortex=" << rep.F_vortex << "; nu(system A)=" << rep.nu_system_a << ", nu(V_ext)=" << rep.nu_from_V_ext
      << (rep.ext_matches_system_a ? " (match)" : " (mismatch)") << ", nu(F_vortex)=" << rep.nu_from_F_vortex
      << (rep.vortex_matches_system_a ? " (match)" : " (mismatch)");
  rep.summary = out.str();
  return rep;
}

GaugeFamilyReport gauge_family(const ABState& state, const AnnulusConfig& cfg, const std::vector<double>& deltas,
                               int grid_points) {
  if (grid_points < 2) throw DomainError("gauge_family: grid needs at least two points");
  for (double d : deltas) {
    if (!(d >= 0.0)) throw DomainError("gauge_family: deltas must be non-negative");
    if (state.nu - d < 0.0) throw DomainError("gauge_family: nu - delta must be non-negative");
  }
  GaugeFamilyReport rep;
  for (double d : deltas) {
    GaugeFamilyMember member;
    member.delta = d;
    member.plus = radial_mode(cfg, state.nu + d, state.n);
    member.minus = radial_mode(cfg, state.nu - d, state.n);
    for (int i = 0; i < grid_points; ++i) {
      const double r = cfg.a + cfg.width() * i / (grid_points - 1);
      const double mean = 0.5 * (member.plus.density(r) + member.minus.density(r));
      member.deviation = std::max(member.deviation, std::abs(mean - state.radial.density(r)));
    }
    auto mass = [&](const RadialMode& mode) {
      return kTwoPi * numerics::integrate_radial([&](double r) { return mode.density(r); }, cfg.a, cfg.b,
                                                 normalization_spec());
    };
    member.norm_plus = mass(member.plus);
    member.norm_minus = mass(member.minus);
    rep.members.push_back(member);
  }
  for (std::size_t i = 0; i + 1 < rep.members.size(); ++i) {
    rep.ratios.push_back(rep.members[i].deviation / rep.members[i + 1].deviation);
  }
  return rep;
}

double helmholtz_residual(const ABState& state, double r) {
  const RadialMode& R = state.radial;
  const double value = R.value(r);
  if (value == 0.0) return 0.0;
  const double k2 = state.k * state.k;
  const double residual =
      R.second_derivative(r) + R.derivative(r) / r - state.nu * state.nu * value / (r * r) + k2 * value;
  return residual / (k2 * std::abs(value));
}

}  // namespace abflow::annulus
