#include "abflow/reference_models.hpp"

#include "abflow/errors.hpp"
#include "abflow/numerics/differentiate.hpp"
#include "abflow/numerics/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace abflow::models {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double radial_prefactor(const HydrogenState& s) {
  const double c = 2.0 / (s.n * s.a0);
  return std::sqrt(c * c * c * factorial(s.n - s.l - 1) / (2.0 * s.n * factorial(s.n + s.l)));
}

double polar_prefactor(const HydrogenState& s) {
  const int m = std::abs(s.m_l);
  return std::sqrt((2.0 * s.l + 1.0) / 2.0 * factorial(s.l - m) / factorial(s.l + m));
}

double density_at(const HydrogenState& s, double r, double theta) {
  const double R = hydrogen_radial(s, r);
  const double P = hydrogen_polar(s, theta);
  return R * R * P * P / kTwoPi;
}

}  // namespace

void HydrogenState::validate() const {
  if (n < 1 || n > 4) throw DomainError("hydrogen: n must lie in [1, 4]");
  if (l < 0 || l >= n) throw DomainError("hydrogen: need 0 <= l < n");
  if (std::abs(m_l) > l) throw DomainError("hydrogen: need |m_l| <= l");
  if (!(a0 > 0.0) || !(mass > 0.0) || !(hbar > 0.0)) throw DomainError("hydrogen: a0, mass, hbar must be positive");
}

Vec3 to_cartesian(const SphericalVector& v, double theta, double phi) {
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  const Vec3 e_r{st * cp, st * sp, ct};
  const Vec3 e_t{ct * cp, ct * sp, -st};
  const Vec3 e_p{-sp, cp, 0.0};
  return v.r * e_r + v.theta * e_t + v.phi * e_p;
}

double hydrogen_radial(const HydrogenState& s, double r) {
  const double x = 2.0 * r / (s.n * s.a0);
  return radial_prefactor(s) * std::exp(-x / 2.0) * std::pow(x, s.l) *
         numerics::assoc_laguerre(s.n - s.l - 1, 2.0 * s.l + 1.0, x);
}

double hydrogen_radial_derivative(const HydrogenState& s, double r) {
  const double c = 2.0 / (s.n * s.a0);
  const double x = c * r;
  const int p = s.n - s.l - 1;
  const double q = 2.0 * s.l + 1.0;
  const double L = numerics::assoc_laguerre(p, q, x);
  // d/dx L_p^{(q)} = -L_{p-1}^{(q+1)}
  const double dL = p > 0 ? -numerics::assoc_laguerre(p - 1, q + 1.0, x) : 0.0;
  const double xl = std::pow(x, s.l);
  const double dxl = s.l > 0 ? s.l * std::pow(x, s.l - 1) : 0.0;
  return c * radial_prefactor(s) * std::exp(-x / 2.0) * (-0.5 * xl * L + dxl * L + xl * dL);
}

double hydrogen_polar(const HydrogenState& s, double theta) {
  return polar_prefactor(s) * numerics::assoc_legendre(s.l, std::abs(s.m_l), std::cos(theta));
}

double hydrogen_polar_derivative(const HydrogenState& s, double theta) {
  return -polar_prefactor(s) * std::sin(theta) *
         numerics::assoc_legendre_derivative(s.l, std::abs(s.m_l), std::cos(theta));
}

HydrogenFields hydrogen_fields(const HydrogenState& s, double r, double theta) {
  s.validate();
  if (!(r > 0.0)) throw DomainError("hydrogen_fields: r must be positive");
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("hydrogen_fields: theta must lie in [0, pi]");
  const double st = std::sin(theta);
  const bool on_axis = theta == 0.0 || theta == kPi;
  if (on_axis && s.m_l != 0) throw DomainError("hydrogen_fields: azimuthal current singular on the axis");

  const double R = hydrogen_radial(s, r);
  const double dR = hydrogen_radial_derivative(s, r);
  const double P = hydrogen_polar(s, theta);
  const double dP = on_axis ? 0.0 : hydrogen_polar_derivative(s, theta);

  HydrogenFields f;
  f.rho = R * R * P * P / kTwoPi;
  if (s.m_l != 0) {
    f.eta.phi = s.m_l * s.hbar / (s.mass * r * st);
    f.J.phi = f.eta.phi * f.rho;
  }
  const double pref = -s.hbar / (4.0 * kPi * s.mass);
  f.D.r = pref * (2.0 * R * dR) * P * P;
  f.D.theta = pref * (R * R / r) * (2.0 * P * dP);

  const double h = 1e-3 * std::min(r, s.a0);
  const double minus_half = -s.hbar / (2.0 * s.mass);
  f.D_numeric.r = minus_half * numerics::central_diff([&](double rr) { return density_at(s, rr, theta); }, r, h);
  if (!on_axis && theta > 2.0 * h && theta < kPi - 2.0 * h) {
    f.D_numeric.theta = minus_half / r *
                        numerics::central_diff([&](double tt) { return density_at(s, r, tt); }, theta, h);
  }
  return f;
}

double hydrogen_norm(const HydrogenState& s, const numerics::QuadratureSpec& spec) {
  s.validate();
  // exp(-2r/(n a0)) is below 1e-30 past this radius.
  const double r_max = 40.0 * s.n * s.a0;
  const double radial = numerics::integrate_1d(
      [&](double r) {
        const double R = hydrogen_radial(s, r);
        return R * R * r * r;
      },
      0.0, r_max, spec);
  const double polar = numerics::integrate_1d(
      [&](double t) {
        const double P = hydrogen_polar(s, t);
        return P * P * std::sin(t);
      },
      0.0, kPi, spec);
  return radial * polar;
}

double LinearAiryModel::density(double x) const {
  if (x < 0.0) return 0.0;
  const double ai = numerics::airy_ai(scale * x + z_n);
  return scale * kPi / std::sqrt(-z_n) * ai * ai;
}

LinearAiryModel linear_airy_model(double k, double mass, int n, double hbar) {
  if (!(k > 0.0) || !(mass > 0.0) || !(hbar > 0.0)) throw DomainError("linear_airy_model: k, mass, hbar must be positive");
  if (n < 1 || n > 20) throw DomainError("linear_airy_model: n must lie in [1, 20]");
  LinearAiryModel model;
  model.k = k;
  model.mass = mass;
  model.hbar = hbar;
  model.n = n;
  model.z_n = numerics::airy_ai_zero(n);
  model.scale = std::cbrt(2.0 * mass * k) / std::pow(hbar, 2.0 / 3.0);
  model.energy = -model.z_n * std::cbrt(hbar * hbar * k * k / (2.0 * mass));
  return model;
}

double half_harmonic_energy(double k, double mass, int n, double hbar) {
  if (n < 0) throw DomainError("half_harmonic_energy: n must be >= 0");
  if (!(k > 0.0) || !(mass > 0.0) || !(hbar > 0.0)) throw DomainError("half_harmonic_energy: parameters must be positive");
  return (2.0 * n + 1.5) * hbar * std::sqrt(k / mass);
}

double box_energy(double L, double mass, int n, double hbar) {
  if (n < 1) throw DomainError("box_energy: n must be >= 1");
  if (!(L > 0.0) || !(mass > 0.0) || !(hbar > 0.0)) throw DomainError("box_energy: parameters must be positive");
  return n * n * kPi * kPi * hbar * hbar / (2.0 * mass * L * L);
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "linear_airy") return ModelKind::linear_airy;
  if (name == "half_harmonic") return ModelKind::half_harmonic;
  if (name == "box") return ModelKind::box;
  throw DomainError("unknown model kind: " + name);
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::linear_airy:
      return "linear_airy";
    case ModelKind::half_harmonic:
      return "half_harmonic";
    case ModelKind::box:
      return "box";
  }
  return "unknown";
}

double ScalingModel::energy(double mass) const {
  switch (kind) {
    case ModelKind::linear_airy:
      return linear_airy_model(parameter, mass, n, hbar).energy;
    case ModelKind::half_harmonic:
      return half_harmonic_energy(parameter, mass, n, hbar);
    case ModelKind::box:
      return box_energy(parameter, mass, n, hbar);
  }
  throw DomainError("unknown model kind");
}

double mass_scaling_fit(const ScalingModel& model, const std::vector<double>& masses) {
  const std::set<double> distinct(masses.begin(), masses.end());
  if (distinct.size() < 3) throw DomainError("mass_scaling_fit: need at least three distinct masses");
  double sx = 0.0;
  double sy = 0.0;
  for (double m : masses) {
    if (!(m > 0.0)) throw DomainError("mass_scaling_fit: masses must be positive");
    sx += std::log(m);
    sy += std::log(model.energy(m));
  }
  const double count = static_cast<double>(masses.size());
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (double m : masses) {
    const double dx = std::log(m) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(model.energy(m)) - my);
  }
  return sxy / sxx;
}

}  // namespace abflow::models
