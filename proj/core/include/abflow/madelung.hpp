#pragma once

#include "abflow/numerics/quadrature.hpp"
#include "abflow/types.hpp"

#include <functional>
#include <optional>

namespace abflow {

/// Densities at or below this are treated as nodal.
inline constexpr double kDensityFloor = 1e-30;

/// Amplitude, gradient and density of a wavefunction at one point.
struct WaveSample {
  Complex value{};
  CVec2 grad{};
  double density = 0.0;
};

/// A complex wavefunction on the plane (dimension 2) or a line (dimension 1,
/// evaluated at (x, 0) with y ignored). Immutable once built.
class WaveField {
 public:
  using Eval = std::function<Complex(const Vec2&, double)>;
  using Grad = std::function<CVec2(const Vec2&, double)>;
  using Density = std::function<double(const Vec2&, double)>;
  using Sampler = std::function<WaveSample(const Vec2&, double)>;

  /// Without `grad`, gradients come from five-point central differences with
  /// step `fd_step`.
  explicit WaveField(Eval eval, int dimension = 2, Grad grad = {}, bool time_dependent = false,
                     double fd_step = 1e-4);

  [[nodiscard]] Complex eval(const Vec2& p, double t = 0.0) const { return eval_(p, t); }
  [[nodiscard]] CVec2 grad(const Vec2& p, double t = 0.0) const;
  [[nodiscard]] double density(const Vec2& p, double t = 0.0) const;
  [[nodiscard]] WaveSample sample(const Vec2& p, double t = 0.0) const;
  /// dPsi/dt by central differences; zero for stationary fields.
  [[nodiscard]] Complex eval_t(const Vec2& p, double t, double h = 1e-4) const;

  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  [[nodiscard]] bool time_dependent() const noexcept { return time_dependent_; }
  [[nodiscard]] bool has_analytic_grad() const noexcept { return static_cast<bool>(grad_); }
  [[nodiscard]] double fd_step() const noexcept { return fd_step_; }

  /// Copy whose density is computed by `density` instead of |Psi|^2.
  [[nodiscard]] WaveField with_density(Density density) const;
  /// Copy that evaluates value, gradient and density together (hot loops).
  [[nodiscard]] WaveField with_sampler(Sampler sampler) const;

 private:
  Eval eval_;
  Grad grad_;
  Density density_;
  Sampler sampler_;
  int dimension_;
  bool time_dependent_;
  double fd_step_;
};

/// A planar vector potential A (units of B times length) and, optionally,
/// the z-component of its curl in closed form.
struct VectorPotentialSpec {
  std::function<Vec2(const Vec2&)> A;
  std::function<double(const Vec2&)> curl;

  [[nodiscard]] bool active() const { return static_cast<bool>(A); }
  [[nodiscard]] Vec2 at(const Vec2& p) const { return A ? A(p) : Vec2{}; }
  static VectorPotentialSpec none() { return {}; }
};

struct VelocityDecomposition {
  double rho = 0.0;
  Vec2 eta;        ///< current velocity (hbar/M) Im(Psi* grad Psi) / rho
  Vec2 xi_real;    ///< -(hbar/2M) grad rho / rho
  Vec2 xi_imag;    ///< (q/Mc) A
  Vec2 zeta_real;  ///< osmotic velocity, -xi_real
  Vec2 zeta_imag;  ///< -xi_imag
  Vec2 gamma;      ///< quasi-probability current from the gauge-covariant flux
  Vec2 delta;      ///< quasi-diffusion current -(hbar/2M) grad rho
  Vec2 v_quasi;    ///< eta - (q/Mc) A
  Vec2 w_quasi;    ///< xi_real
};

/// Throws DensityFloorError when rho(p) <= kDensityFloor.
VelocityDecomposition decompose(const WaveField& psi, const VectorPotentialSpec& A, const PhysicalConstants& cfg,
                                const Vec2& p, double t = 0.0);

struct QuasiCurrents {
  Vec2 gamma;                ///< (i hbar/2M)(Psi grad Psi* - Psi* grad Psi) - (q/Mc) A rho
  Vec2 gamma_from_velocity;  ///< rho v_quasi
  Vec2 delta;                ///< -(hbar/2M) grad rho
};

QuasiCurrents quasi_currents(const WaveField& psi, const VectorPotentialSpec& A, const PhysicalConstants& cfg,
                             const Vec2& p, double t = 0.0);

/// Density-weighted quantities that stay finite on nodal sets (no division
/// by rho): the integrands of expectation values.
struct FluxDensities {
  double rho = 0.0;
  Vec2 gamma;        ///< rho v_quasi
  Vec2 delta;        ///< rho w_quasi
  Vec2 rho_eta;      ///< (hbar/M) Im(Psi* grad Psi)
  Vec2 rho_xi_imag;  ///< rho (q/Mc) A
};

FluxDensities flux_densities(const WaveField& psi, const VectorPotentialSpec& A, const PhysicalConstants& cfg,
                             const Vec2& p, double t = 0.0);

/// Bohm potential Q = -(hbar^2/2M) lap(sqrt rho)/sqrt rho, written as
/// -(hbar^2/2M)[lap rho/(2 rho) - |grad rho|^2/(4 rho^2)] with grad rho from
/// the field's gradient and its divergence by central differences (step h).
double quantum_potential(const WaveField& psi, const PhysicalConstants& cfg, const Vec2& p, double t = 0.0,
                         double h = 1e-3);

/// -grad Q by central differences of quantum_potential with step h.
Vec2 quantum_force(const WaveField& psi, const PhysicalConstants& cfg, const Vec2& p, double t = 0.0,
                   double h = 1e-2);

using GaugeFunction = std::function<double(const Vec2&)>;
using GaugeGradient = std::function<Vec2(const Vec2&)>;

/// Psi -> exp(i q Lambda / (hbar c)) Psi. The returned field reuses the
/// original density function, so rho is preserved exactly. When `grad_lambda`
/// is empty the gradient of Lambda is taken by central differences.
WaveField gauge_transform(const WaveField& psi, GaugeFunction lambda, const PhysicalConstants& cfg,
                          GaugeGradient grad_lambda = {});

struct OsmoticExpectation {
  Vec2 real_part;    ///< integral of rho Re(zeta)
  Vec2 directional;  ///< (q/Mc) integral of rho A, the imaginary-part magnitude
};

OsmoticExpectation osmotic_expectation(const WaveField& psi, const VectorPotentialSpec& A,
                                       const PhysicalConstants& cfg, const numerics::Domain& domain,
                                       const numerics::QuadratureSpec& spec = {});

/// |(P - (q/c) A) Psi|^2 / 2M at p.
double kinetic_energy_density(const WaveField& psi, const VectorPotentialSpec& A, const PhysicalConstants& cfg,
                              const Vec2& p, double t = 0.0);

/// (1/2) M rho (v_quasi^2 + w_quasi^2) at p, evaluated as (M/2)(Gamma^2 + Delta^2)/rho.
double hydrodynamic_energy_density(const WaveField& psi, const VectorPotentialSpec& A,
                                   const PhysicalConstants& cfg, const Vec2& p, double t = 0.0);

struct EnergyIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// Integrates kinetic_energy_density (lhs) and hydrodynamic_energy_density
/// (rhs) over the domain. Quadrature failure propagates as ConvergenceError.
EnergyIdentity integrated_energy_identity(const WaveField& psi, const VectorPotentialSpec& A,
                                          const PhysicalConstants& cfg, const numerics::Domain& domain,
                                          const numerics::QuadratureSpec& spec = {});

}  // namespace abflow
