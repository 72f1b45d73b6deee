#include "abflow/nelson.hpp"

#include "abflow/errors.hpp"
#include "abflow/numerics/quadrature.hpp"
#include "abflow/numerics/random.hpp"
#include "abflow/statistics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace abflow::nelson {

namespace {

// b = (hbar/M)(Re + Im)(Psi* grad Psi)/rho without the intermediate structs.
bool forward_drift(const WaveField& psi, const PhysicalConstants& cfg, const Vec2& p, Vec2& b) {
  const WaveSample s = psi.sample(p);
  if (!(s.density > kDensityFloor)) return false;
  const Complex c = std::conj(s.value);
  const Complex gx = c * s.grad.x;
  const Complex gy = c * s.grad.y;
  const double scale = cfg.hbar / (cfg.mass * s.density);
  b = {(gx.real() + gx.imag()) * scale, (gy.real() + gy.imag()) * scale};
  return std::isfinite(b.x) && std::isfinite(b.y);
}

class Stepper {
 public:
  Stepper(const WaveField& psi, const AnnulusConfig& cfg, const SdeConfig& sde, numerics::RandomStream& stream,
          Trajectory& out)
      : psi_(psi), cfg_(cfg), sde_(sde), stream_(stream), out_(out) {}

  // Advances x by one interval of length dt; false when every retry and
  // halving failed.
  bool advance(Vec2& x, const Vec2& drift, double dt, int depth) {
    const double sigma = std::sqrt(2.0 * cfg_.constants.diffusion() * dt);
    for (int attempt = 0; attempt <= sde_.max_retries; ++attempt) {
      const double z1 = stream_.normal();
      const double z2 = stream_.normal();
      const Vec2 proposal = x + drift * dt + Vec2{z1, z2} * sigma;
      const double r = norm(proposal);
      Vec2 next_drift;
      if (r > cfg_.a && r < cfg_.b && forward_drift(psi_, cfg_.constants, proposal, next_drift)) {
        x = proposal;
        drift_ = next_drift;
        return true;
      }
      ++out_.rejected_steps;
    }
    if (depth >= sde_.max_halvings) return false;
    ++out_.halvings;
    if (!advance(x, drift, 0.5 * dt, depth + 1)) return false;
    const Vec2 mid_drift = drift_;
    return advance(x, mid_drift, 0.5 * dt, depth + 1);
  }

  [[nodiscard]] const Vec2& drift() const { return drift_; }
  void set_drift(const Vec2& d) { drift_ = d; }

 private:
  const WaveField& psi_;
  const AnnulusConfig& cfg_;
  const SdeConfig& sde_;
  numerics::RandomStream& stream_;
  Trajectory& out_;
  Vec2 drift_;
};

Trajectory run_one(const WaveField& psi, const AnnulusConfig& cfg, const SdeConfig& sde, const RadialTarget& target,
                   std::size_t index) {
  Trajectory t;
  t.dt = sde.dt;
  t.record_stride = sde.record_stride;
  t.seed = sde.seed;
  t.index = index;
  t.stream_id = numerics::derive_stream_id(sde.seed, index);
  numerics::RandomStream stream(sde.seed, t.stream_id);

  Vec2 x;
  Vec2 drift;
  bool placed = false;
  for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
    const double r = target.inverse_cdf(stream.uniform());
    const double theta = kTwoPi * stream.uniform();
    x = from_polar(r, theta);
    placed = r > cfg.a && r < cfg.b && forward_drift(psi, cfg.constants, x, drift);
  }
  if (!placed) {
    t.aborted = true;
    t.diagnostic = "could not place the initial position inside the support";
    return t;
  }

  Stepper stepper(psi, cfg, sde, stream, t);
  stepper.set_drift(drift);
  const std::int64_t kept = (sde.steps - sde.burn_in) / sde.record_stride;
  t.positions.reserve(static_cast<std::size_t>(std::max<std::int64_t>(kept, 0)));
  for (std::int64_t step = 1; step <= sde.steps; ++step) {
    if (!stepper.advance(x, stepper.drift(), sde.dt, 0)) {
      t.aborted = true;
      t.diagnostic = "step " + std::to_string(step) + " failed after retries and halvings at r = " +
                     std::to_string(norm(x));
      return t;
    }
    ++t.accepted_steps;
    if (step > sde.burn_in && (step - sde.burn_in) % sde.record_stride == 0) t.positions.push_back(x);
  }
  return t;
}

std::vector<double> pooled_radii(const std::vector<Trajectory>& trajectories, int thin) {
  std::vector<double> radii;
  for (const auto& t : trajectories) {
    for (std::size_t i = 0; i < t.positions.size(); i += static_cast<std::size_t>(thin)) {
      radii.push_back(norm(t.positions[i]));
    }
  }
  return radii;
}

}  // namespace

void SdeConfig::validate() const {
  if (!(dt > 0.0)) throw DomainError("sde: dt must be positive");
  if (steps < 1) throw DomainError("sde: steps must be >= 1");
  if (burn_in < 0 || burn_in >= steps) throw DomainError("sde: need 0 <= burn_in < steps");
  if (n_trajectories < 1) throw DomainError("sde: n_trajectories must be >= 1");
  if (max_retries < 0) throw DomainError("sde: max_retries must be >= 0");
  if (record_stride < 1) throw DomainError("sde: record_stride must be >= 1");
  if (max_halvings < 0 || max_halvings > 8) throw DomainError("sde: max_halvings must lie in [0, 8]");
}

Drifts drifts(const WaveField& psi, const PhysicalConstants& cfg, const Vec2& p) {
  const VelocityDecomposition d = decompose(psi, VectorPotentialSpec::none(), cfg, p);
  Drifts out;
  out.current = d.eta;
  out.osmotic = d.zeta_real;
  out.forward = out.current + out.osmotic;
  out.backward = out.current - out.osmotic;
  const Complex i(0.0, 1.0);
  out.mean_forward = {Complex(out.current.x) - i * out.osmotic.x, Complex(out.current.y) - i * out.osmotic.y};
  out.mean_backward = {Complex(out.current.x) + i * out.osmotic.x, Complex(out.current.y) + i * out.osmotic.y};
  return out;
}

RadialTarget::RadialTarget(std::function<double(double)> rho_of_r, double a, double b, int grid)
    : rho_(std::move(rho_of_r)), a_(a), b_(b) {
  if (!(a < b)) throw DomainError("RadialTarget: a < b required");
  if (grid < 2) throw DomainError("RadialTarget: grid needs at least two points");
  numerics::QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-15;
  r_.resize(static_cast<std::size_t>(grid) + 1);
  cdf_.assign(r_.size(), 0.0);
  pdf_.assign(r_.size(), 0.0);
  auto density = [this](double r) { return kTwoPi * r * rho_(r); };
  for (std::size_t i = 0; i < r_.size(); ++i) {
    r_[i] = a + (b - a) * static_cast<double>(i) / grid;
    pdf_[i] = density(r_[i]);
    if (i > 0) cdf_[i] = cdf_[i - 1] + numerics::integrate_1d(density, r_[i - 1], r_[i], spec);
  }
  mass_ = cdf_.back();
  if (!(mass_ > 0.0)) throw DomainError("RadialTarget: density integrates to zero");
  for (std::size_t i = 0; i < r_.size(); ++i) {
    cdf_[i] /= mass_;
    pdf_[i] /= mass_;
  }
}

double RadialTarget::pdf(double r) const {
  if (!(r > a_ && r < b_)) return 0.0;
  return kTwoPi * r * rho_(r) / mass_;
}

double RadialTarget::cdf(double r) const {
  if (r <= a_) return 0.0;
  if (r >= b_) return 1.0;
  const double h = r_[1] - r_[0];
  const auto i = std::min(static_cast<std::size_t>((r - a_) / h), r_.size() - 2);
  const double s = (r - r_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * cdf_[i] + h10 * h * pdf_[i] + h01 * cdf_[i + 1] + h11 * h * pdf_[i + 1];
}

double RadialTarget::inverse_cdf(double u) const {
  if (u <= 0.0) return a_;
  if (u >= 1.0) return b_;
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto hi = static_cast<std::size_t>(std::distance(cdf_.begin(), it));
  double lo_r = r_[hi - 1];
  double hi_r = r_[std::min(hi, r_.size() - 1)];
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo_r + hi_r);
    if (cdf(mid) < u) {
      lo_r = mid;
    } else {
      hi_r = mid;
    }
  }
  return 0.5 * (lo_r + hi_r);
}

std::vector<Trajectory> simulate(const WaveField& psi, const AnnulusConfig& cfg, const SdeConfig& sde,
                                 const RadialTarget& target, int threads) {
  cfg.validate();
  sde.validate();
  const auto count = static_cast<std::size_t>(sde.n_trajectories);
  std::vector<Trajectory> out(count);
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(count));

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      out[i] = run_one(psi, cfg, sde, target, i);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

StationarityResult radial_sample_test(const std::vector<double>& radii, const std::vector<double>& chi_radii,
                                      const RadialTarget& target, int bins) {
  if (radii.size() < 10'000) throw InsufficientSamplesError("stationarity_test: need at least 1e4 pooled samples");
  if (bins < 2) throw DomainError("stationarity_test: need at least two bins");
  StationarityResult res;
  res.samples = radii.size();
  const auto cdf = [&](double r) { return target.cdf(r); };
  res.ks_distance = stats::ks_distance(radii, cdf);
  res.ks_p_value = stats::ks_p_value(res.ks_distance, radii.size());

  std::vector<double> observed(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> expected(static_cast<std::size_t>(bins), 0.0);
  const double width = (target.b() - target.a()) / bins;
  for (double r : chi_radii) {
    auto k = static_cast<int>((r - target.a()) / width);
    k = std::clamp(k, 0, bins - 1);
    observed[static_cast<std::size_t>(k)] += 1.0;
  }
  const double n = static_cast<double>(chi_radii.size());
  for (int k = 0; k < bins; ++k) {
    const double lo = target.a() + k * width;
    expected[static_cast<std::size_t>(k)] = n * (target.cdf(lo + width) - target.cdf(lo));
  }
  const stats::ChiSquareResult chi = stats::chi_square(observed, expected);
  res.chi2 = chi.chi2;
  res.dof = chi.dof;
  res.p_value = chi.p_value;
  return res;
}

StationarityResult stationarity_test(const std::vector<Trajectory>& trajectories, const RadialTarget& target,
                                     int bins, int thin) {
  if (thin < 1) throw DomainError("stationarity_test: thin must be >= 1");
  return radial_sample_test(pooled_radii(trajectories, 1), pooled_radii(trajectories, thin), target, bins);
}

UniformityResult angular_uniformity_test(const std::vector<Trajectory>& trajectories, int bins, int thin) {
  if (bins < 2) throw DomainError("angular_uniformity_test: need at least two bins");
  if (thin < 1) throw DomainError("angular_uniformity_test: thin must be >= 1");
  std::vector<double> observed(static_cast<std::size_t>(bins), 0.0);
  std::size_t n = 0;
  for (const auto& t : trajectories) {
    for (std::size_t i = 0; i < t.positions.size(); i += static_cast<std::size_t>(thin)) {
      const double theta = std::atan2(t.positions[i].y, t.positions[i].x) + kPi;
      auto k = static_cast<int>(theta / kTwoPi * bins);
      k = std::clamp(k, 0, bins - 1);
      observed[static_cast<std::size_t>(k)] += 1.0;
      ++n;
    }
  }
  if (n == 0) throw InsufficientSamplesError("angular_uniformity_test: no samples");
  const std::vector<double> expected(static_cast<std::size_t>(bins), static_cast<double>(n) / bins);
  const stats::ChiSquareResult chi = stats::chi_square(observed, expected);
  return {n, chi.chi2, chi.dof, chi.p_value};
}

ErgodicEstimate ergodic_angular_momentum(const std::vector<Trajectory>& trajectories, const WaveField& psi,
                                         const VectorPotentialSpec& A, const PhysicalConstants& cfg) {
  std::vector<std::vector<double>> groups;
  std::size_t total = 0;
  for (const auto& t : trajectories) {
    std::vector<double> values;
    values.reserve(t.positions.size());
    for (const Vec2& p : t.positions) {
      const VelocityDecomposition d = decompose(psi, A, cfg, p);
      values.push_back(cfg.mass * norm(p) * dot(d.v_quasi, unit_theta(p)));
    }
    total += values.size();
    groups.push_back(std::move(values));
  }
  if (total < 10'000) throw InsufficientSamplesError("ergodic_angular_momentum: need at least 1e4 samples");
  const stats::MeanEstimate m = stats::grouped_mean(groups);
  return {m.mean, m.standard_error, total};
}

double angular_displacement(const Trajectory& trajectory) {
  double total = 0.0;
  for (std::size_t i = 1; i < trajectory.positions.size(); ++i) {
    const Vec2& p = trajectory.positions[i - 1];
    const Vec2& q = trajectory.positions[i];
    total += std::atan2(cross(p, q), dot(p, q));
  }
  return total;
}

double rejected_fraction(const std::vector<Trajectory>& trajectories) {
  double rejected = 0.0;
  double proposals = 0.0;
  for (const auto& t : trajectories) {
    rejected += static_cast<double>(t.rejected_steps);
    proposals += static_cast<double>(t.rejected_steps + t.accepted_steps);
  }
  return proposals > 0.0 ? rejected / proposals : 0.0;
}

}  // namespace abflow::nelson
