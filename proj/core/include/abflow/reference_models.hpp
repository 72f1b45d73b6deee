#pragma once

#include "abflow/numerics/quadrature.hpp"
#include "abflow/types.hpp"

#include <string>
#include <vector>

namespace abflow::models {

struct HydrogenState {
  int n = 1;
  int l = 0;
  int m_l = 0;
  double a0 = 1.0;
  double mass = 1.0;
  double hbar = 1.0;

  /// n in [1, 4], 0 <= l < n, |m_l| <= l.
  void validate() const;
};

/// Components along (e_r, e_theta, e_phi).
struct SphericalVector {
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

Vec3 to_cartesian(const SphericalVector& v, double theta, double phi);

/// Radial function R_{n,l} with integral R^2 r^2 dr = 1, and dR/dr.
double hydrogen_radial(const HydrogenState& s, double r);
double hydrogen_radial_derivative(const HydrogenState& s, double r);
/// Polar factor Theta_l^m with integral Theta^2 sin(theta) dtheta = 1, and dTheta/dtheta.
double hydrogen_polar(const HydrogenState& s, double theta);
double hydrogen_polar_derivative(const HydrogenState& s, double theta);

struct HydrogenFields {
  double rho = 0.0;           ///< R^2 Theta^2 / (2 pi)
  SphericalVector J;          ///< e_phi m_l hbar rho / (M r sin theta)
  SphericalVector D;          ///< -(hbar / 4 pi M)[e_r (R^2)' Theta^2 + e_theta R^2 (Theta^2)' / r]
  SphericalVector D_numeric;  ///< -(hbar / 2M) grad rho by central differences
  SphericalVector eta;        ///< e_phi m_l hbar / (M r sin theta)
};

/// Throws DomainError for r <= 0, or theta on the axis when m_l != 0.
HydrogenFields hydrogen_fields(const HydrogenState& s, double r, double theta);

/// 2 pi times the integral of rho r^2 sin(theta) over r in [0, r_max] and theta in [0, pi].
double hydrogen_norm(const HydrogenState& s, const numerics::QuadratureSpec& spec = {});

/// Particle on a half-line x >= 0 in the potential k x.
struct LinearAiryModel {
  double k = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  int n = 1;
  double z_n = 0.0;    ///< n-th zero of Ai
  double scale = 0.0;  ///< (2 m k)^{1/3} / hbar^{2/3}
  double energy = 0.0; ///< -z_n (hbar^2 k^2 / 2m)^{1/3}

  /// scale * pi / sqrt(-z_n) * Ai(scale x + z_n)^2, zero for x < 0.
  [[nodiscard]] double density(double x) const;
};

/// n in [1, 20].
LinearAiryModel linear_airy_model(double k, double mass, int n, double hbar = 1.0);

/// (2n + 3/2) hbar sqrt(k/m), n >= 0.
double half_harmonic_energy(double k, double mass, int n, double hbar = 1.0);
/// n^2 pi^2 hbar^2 / (2 m L^2), n >= 1.
double box_energy(double L, double mass, int n, double hbar = 1.0);

enum class ModelKind { linear_airy, half_harmonic, box };

ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

struct ScalingModel {
  ModelKind kind = ModelKind::linear_airy;
  double parameter = 1.0;  ///< k for linear_airy and half_harmonic, L for box
  int n = 1;
  double hbar = 1.0;

  [[nodiscard]] double energy(double mass) const;
};

/// Least-squares slope of log E against log m. Needs at least three distinct
/// positive masses.
double mass_scaling_fit(const ScalingModel& model, const std::vector<double>& masses);

}  // namespace abflow::models
