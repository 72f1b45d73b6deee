#pragma once

#include "abflow/annulus_config.hpp"
#include "abflow/madelung.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace abflow::nelson {

enum class BoundaryPolicy { reject_resample };

struct SdeConfig {
  double dt = 1e-3;
  std::int64_t steps = 200'000;
  std::int64_t burn_in = 0;
  int n_trajectories = 64;
  std::uint64_t seed = 20240611;
  BoundaryPolicy boundary_policy = BoundaryPolicy::reject_resample;
  int max_retries = 16;
  /// Keep every record_stride-th position after burn-in.
  int record_stride = 10;
  int max_halvings = 8;

  void validate() const;
};

struct Trajectory {
  std::vector<Vec2> positions;
  double dt = 0.0;
  int record_stride = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::size_t index = 0;
  std::int64_t accepted_steps = 0;
  std::int64_t rejected_steps = 0;  ///< proposals discarded by the boundary policy
  std::int64_t halvings = 0;
  bool aborted = false;
  std::string diagnostic;
};

struct Drifts {
  Vec2 current;       ///< v = eta
  Vec2 osmotic;       ///< u = (hbar/2M) grad rho / rho
  Vec2 forward;       ///< b = v + u
  Vec2 backward;      ///< b* = v - u
  CVec2 mean_forward;   ///< D+ = v - i u
  CVec2 mean_backward;  ///< D- = v + i u
};

/// Throws DensityFloorError at nodal points.
Drifts drifts(const WaveField& psi, const PhysicalConstants& cfg, const Vec2& p);

/// Radial marginal 2 pi r rho(r) of a separable annulus density, tabulated as
/// a CDF with exact derivatives and interpolated by cubic Hermite segments.
class RadialTarget {
 public:
  RadialTarget(std::function<double(double)> rho_of_r, double a, double b, int grid = 4096);

  [[nodiscard]] double pdf(double r) const;
  [[nodiscard]] double cdf(double r) const;
  [[nodiscard]] double inverse_cdf(double u) const;
  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }
  /// Integral of 2 pi r rho before normalization.
  [[nodiscard]] double mass() const { return mass_; }

 private:
  std::function<double(double)> rho_;
  double a_;
  double b_;
  double mass_ = 0.0;
  std::vector<double> r_;
  std::vector<double> cdf_;
  std::vector<double> pdf_;
};

/// Euler-Maruyama in Cartesian coordinates with drift b = eta + u and noise
/// sqrt(2 beta^2 dt). Proposals leaving the open annulus or landing below the
/// density floor are redrawn up to max_retries times, after which the step is
/// split into two half steps (recursively, at most max_halvings deep).
/// Starting radii come from `target`, angles are uniform. Each trajectory owns
/// a RandomStream keyed by (seed, index), so results do not depend on
/// `threads`.
std::vector<Trajectory> simulate(const WaveField& psi, const AnnulusConfig& cfg, const SdeConfig& sde,
                                 const RadialTarget& target, int threads = 0);

struct StationarityResult {
  std::size_t samples = 0;
  double ks_distance = 0.0;
  double ks_p_value = 0.0;
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

/// Radial samples against target.cdf: KS on every sample, chi-square on
/// `bins` equal-width bins using every `thin`-th sample (to reduce serial
/// correlation). Needs >= 1e4 pooled samples.
StationarityResult stationarity_test(const std::vector<Trajectory>& trajectories, const RadialTarget& target,
                                     int bins = 40, int thin = 1);

/// Same statistics for a plain list of radii.
StationarityResult radial_sample_test(const std::vector<double>& radii, const std::vector<double>& chi_radii,
                                      const RadialTarget& target, int bins);

struct UniformityResult {
  std::size_t samples = 0;
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

/// Chi-square of polar angles against the uniform law using every
/// `thin`-th recorded sample.
UniformityResult angular_uniformity_test(const std::vector<Trajectory>& trajectories, int bins = 12, int thin = 1);

struct ErgodicEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Average of M r v_quasi_theta over every recorded position, with the
/// standard error from the spread of per-trajectory means.
ErgodicEstimate ergodic_angular_momentum(const std::vector<Trajectory>& trajectories, const WaveField& psi,
                                         const VectorPotentialSpec& A, const PhysicalConstants& cfg);

/// Unwrapped change of polar angle along a trajectory.
double angular_displacement(const Trajectory& trajectory);

/// Pooled fraction of rejected proposals.
double rejected_fraction(const std::vector<Trajectory>& trajectories);

}  // namespace abflow::nelson
