#pragma once

#include "abflow/annulus_config.hpp"
#include "abflow/madelung.hpp"
#include "abflow/numerics/quadrature.hpp"

#include <string>
#include <vector>

namespace abflow::annulus {

/// lambda = -q B a^2 / (2 hbar c).
double flux_parameter(const AnnulusConfig& cfg);

/// (B a^2 / 2r) e_theta outside the solenoid, (B r / 2) e_theta inside.
/// Throws DomainError at r = 0.
Vec2 vector_potential(const AnnulusConfig& cfg, const Vec2& p);

/// z-component of curl A in closed form: B inside, 0 outside.
double vector_potential_curl(const AnnulusConfig& cfg, const Vec2& p);

VectorPotentialSpec vector_potential_spec(const AnnulusConfig& cfg);

/// curl(curl A') with A' = A + grad Lambda, by nested central differences.
/// `grad_lambda` may be empty (Lambda = 0). Throws DomainError when the
/// stencil would touch r = 0 or the solenoid wall r = a.
Vec2 solenoid_current_check(const AnnulusConfig& cfg, const GaugeGradient& grad_lambda, const Vec2& p);

/// Radial Bessel profile N J_nu(k (r - a)) vanishing at r = b.
struct RadialMode {
  double nu = 0.0;
  int n = 1;
  double tau = 0.0;
  double k = 0.0;
  double norm = 0.0;
  double a = 1.0;
  double b = 3.0;

  [[nodiscard]] double value(double r) const;
  [[nodiscard]] double derivative(double r) const;
  /// Second radial derivative from Bessel's equation.
  [[nodiscard]] double second_derivative(double r) const;
  /// |Psi|^2 as a function of r (the angular factor has unit modulus).
  [[nodiscard]] double density(double r) const { return value(r) * value(r); }
};

/// Normalized radial mode of order nu and radial index n for the annulus.
RadialMode radial_mode(const AnnulusConfig& cfg, double nu, int n);

/// Bound state N J_nu(tau (r - a)/d) e^{i m theta} with nu = |m + lambda|.
struct ABState {
  int m = 0;
  int n = 1;
  double lambda = 0.0;
  double nu = 0.0;
  double tau = 0.0;
  double k = 0.0;
  double norm = 0.0;
  double energy = 0.0;  ///< hbar^2 k^2 / 2M
  RadialMode radial;

  /// Zero outside the open annulus.
  [[nodiscard]] Complex value(const Vec2& p) const;
  [[nodiscard]] CVec2 grad(const Vec2& p) const;
  [[nodiscard]] WaveField wavefield() const;
};

ABState eigenstate(const AnnulusConfig& cfg, int m, int n);

/// The (a, b) annulus as a quadrature domain.
numerics::Domain domain(const AnnulusConfig& cfg);

struct AngularMomenta {
  double total = 0.0;      ///< integral of rho M r v_quasi_theta
  double canonical = 0.0;  ///< total - osmotic
  double osmotic = 0.0;    ///< integral of rho M r Im(-xi)_theta
};

AngularMomenta angular_momenta(const ABState& state, const AnnulusConfig& cfg,
                               const numerics::QuadratureSpec& spec = {});

struct EnergyDecomposition {
  double rotational = 0.0;  ///< integral of (1/2) M rho v_quasi^2
  double radial = 0.0;      ///< integral of (1/2) M rho (Re xi)^2
  double total = 0.0;       ///< integral of |P' Psi|^2 / 2M
  double residual = 0.0;    ///< |total - rotational - radial| / total
  double t_m_lambda = 0.0;  ///< integral of (lambda^2 + 2 m lambda)(hbar^2 / 2M r^2) rho
  double helmholtz_energy = 0.0;
};

EnergyDecomposition energy_decomposition(const ABState& state, const AnnulusConfig& cfg,
                                         const numerics::QuadratureSpec& spec = {});

struct QuantumPotentialClosedForm {
  double Q = 0.0;            ///< -hbar^2 (m + lambda)^2 / (2 M r^2)
  double F_r = 0.0;          ///< -hbar^2 (m + lambda)^2 / (M r^3)
  double centripetal = 0.0;  ///< -M v_quasi^2 / r
};

QuantumPotentialClosedForm closed_form_Q_and_force(const ABState& state, const AnnulusConfig& cfg, double r);

struct VortexFields {
  double omega = 0.0;              ///< z-component of the vorticity inside, -qB/(Mc)
  double dv_in = 0.0;              ///< theta-component omega r / 2
  double dv_out = 0.0;             ///< theta-component omega a^2 / (2 r)
  double pressure_analogue = 0.0;  ///< -(1/2) M v_quasi^2 for angular number m
};

/// Throws DomainError at r <= 0.
VortexFields vortex_fields(const AnnulusConfig& cfg, double r, int m = 0);

/// Im(-xi) = -(q/Mc) A as a planar field: rigid rotation inside, 1/r outside.
Vec2 diffusion_velocity(const AnnulusConfig& cfg, const Vec2& p);

struct MagneticForce {
  Vec3 lorentz;  ///< (q/c) v x B
  Vec3 vortex;   ///< -M v x omega
};

MagneticForce magnetic_force(const AnnulusConfig& cfg, const Vec3& v, const Vec2& p);

struct Loop {
  Vec2 center;
  double radius = 1.0;
};

/// Line integral of `field` around the loop by composite trapezoid, doubling
/// the segment count until successive values agree to 1e-9 relative.
double circulation(const std::function<Vec2(const Vec2&)>& field, const Loop& loop, int segments = 64);

struct SystemBReport {
  double r = 0.0;
  double lambda = 0.0;
  double V_ext = 0.0;       ///< hbar^2 m (m + 2 lambda) / (2 M r^2)
  double F_ext = 0.0;       ///< hbar^2 m (m + 2 lambda) / (M r^3)
  double F_vortex = 0.0;    ///< M dv^2 / r + M dv . v_i / r with dv = Im(-xi_out), v_i = hbar m / (M r)
  double F_matching = 0.0;  ///< hbar^2 lambda (2m + lambda) / (M r^3), reproduces nu = |m + lambda|
  double nu_system_a = 0.0;
  double nu_from_V_ext = 0.0;
  double nu_from_F_vortex = 0.0;
  bool ext_matches_vortex = false;
  bool ext_matches_system_a = false;
  bool vortex_matches_system_a = false;
  std::string summary;
};

/// Evaluates the three system-B force/potential expressions as written and reports
/// how they compare. Never asserts agreement.
SystemBReport system_b_equivalence(const AnnulusConfig& cfg, int m, double r);

struct GaugeFamilyMember {
  double delta = 0.0;
  RadialMode plus;
  RadialMode minus;
  double deviation = 0.0;  ///< max_r |(rho_plus + rho_minus)/2 - rho|
  double norm_plus = 0.0;  ///< 2 pi integral of rho_plus r dr
  double norm_minus = 0.0;
};

struct GaugeFamilyReport {
  std::vector<GaugeFamilyMember> members;
  /// deviation[i] / deviation[i+1] for consecutive entries.
  std::vector<double> ratios;
};

/// Throws DomainError when nu - delta < 0 for any delta.
GaugeFamilyReport gauge_family(const ABState& state, const AnnulusConfig& cfg, const std::vector<double>& deltas,
                               int grid_points = 2001);

/// (lap_lambda + k^2) Psi / (k^2 |Psi|) at radius r, where lap_lambda has the
/// centrifugal term nu^2/r^2. Nonzero because the ansatz is shifted by a.
double helmholtz_residual(const ABState& state, double r);

}  // namespace abflow::annulus
