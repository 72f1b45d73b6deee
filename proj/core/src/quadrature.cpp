#include "abflow/numerics/quadrature.hpp"

#include "abflow/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace abflow::numerics {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kMaxEvaluations = 4'000'000;

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  int depth;
};

struct ByError {
  bool operator()(const Segment& a, const Segment& b) const { return a.error < b.error; }
};

Segment kronrod15(const Integrand1d& f, double lo, double hi, int depth) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  std::array<double, 15> fv{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    fv[2 * j] = f(centre - dx);
    fv[2 * j + 1] = f(centre + dx);
  }
  fv[14] = f(centre);

  double kron = kKronrod[7] * fv[14];
  double gauss = kGauss[3] * fv[14];
  double abs_sum = std::abs(kron);
  for (int j = 0; j < 7; ++j) {
    const double pair = fv[2 * j] + fv[2 * j + 1];
    kron += kKronrod[j] * pair;
    abs_sum += kKronrod[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
    if (j % 2 == 1) gauss += kGauss[j / 2] * pair;
  }
  const double mean = 0.5 * kron;
  double asc = kKronrod[7] * std::abs(fv[14] - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrod[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
  }

  const double value = kron * half;
  double err = std::abs((kron - gauss) * half);
  const double resasc = asc * std::abs(half);
  const double resabs = abs_sum * std::abs(half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
  return {lo, hi, value, err, depth};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be positive");
  if (!(abs_tol >= 0.0)) throw DomainError("QuadratureSpec: abs_tol must be non-negative");
  if (max_depth < 1) throw DomainError("QuadratureSpec: max_depth must be at least 1");
}

QuadratureResult integrate_1d_detailed(const Integrand1d& f, double lo, double hi, const QuadratureSpec& spec) {
  spec.validate();
  if (lo == hi) return {};
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("integrate_1d: limits must be finite");

  std::priority_queue<Segment, std::vector<Segment>, ByError> active;
  std::vector<Segment> frozen;  // reached max_depth; cannot be refined further
  active.push(kronrod15(f, lo, hi, 0));
  int evaluations = 15;

  double total = active.top().value;
  double total_err = active.top().error;
  for (;;) {
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_err <= target) break;
    if (active.empty()) {
      throw ConvergenceError("integrate_1d: maximum bisection depth exceeded", total, total_err);
    }
    const Segment worst = active.top();
    active.pop();
    if (worst.depth >= spec.max_depth) {
      // The largest contribution can no longer be refined; give up as soon as
      // it alone blows the budget instead of refining everything else.
      if (worst.error > target) {
        throw ConvergenceError("integrate_1d: maximum bisection depth exceeded", total, total_err);
      }
      frozen.push_back(worst);
      continue;
    }
    if (evaluations > kMaxEvaluations) {
      throw ConvergenceError("integrate_1d: evaluation budget exhausted", total, total_err);
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Segment left = kronrod15(f, worst.lo, mid, worst.depth + 1);
    const Segment right = kronrod15(f, mid, worst.hi, worst.depth + 1);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    if (!std::isfinite(total)) throw ConvergenceError("integrate_1d: integrand is not finite", total, total_err);
  }

  // Re-sum to shed the drift from incremental updates.
  double value = 0.0;
  double error = 0.0;
  for (const auto& s : frozen) {
    value += s.value;
    error += s.error;
  }
  while (!active.empty()) {
    value += active.top().value;
    error += active.top().error;
    active.pop();
  }
  return {value, error, evaluations};
}

double integrate_radial(const Integrand1d& f, double a, double b, const QuadratureSpec& spec) {
  const double d = b - a;
  auto g = [&](double s) {
    const double r = a + d * s * s;
    return f(r) * r * 2.0 * d * s;
  };
  // Below s ~ sqrt(eps a / d) the nodes a + d s^2 collapse onto a, so deeper
  // bisection only resolves rounding steps.
  QuadratureSpec capped = spec;
  if (a != 0.0) {
    const double ratio = d / (std::numeric_limits<double>::epsilon() * std::abs(a));
    const int resolvable = static_cast<int>(std::floor(0.5 * std::log2(ratio)));
    capped.max_depth = std::clamp(resolvable, 1, spec.max_depth);
  }
  return integrate_1d(g, 0.0, 1.0, capped);
}

double integrate_annulus(const std::function<double(double, double)>& f, const AnnulusConfig& cfg,
                         const QuadratureSpec& spec) {
  // An inner error delta moves the total by at most delta (b^2 - a^2) / 2, so
  // inner integrals get an absolute share of the outer budget taken from a
  // coarse product-rule estimate. Without it, rings where the integrand is
  // tiny chase relative accuracy into roundoff.
  const double d = cfg.b - cfg.a;
  double coarse = 0.0;
  constexpr int kPanels = 8;
  for (int i = 0; i < kPanels; ++i) {
    const double s = (i + 0.5) / kPanels;
    const double r = cfg.a + d * s * s;
    double ring = 0.0;
    for (int j = 0; j < kPanels; ++j) ring += std::abs(f(r, (j + 0.5) * kTwoPi / kPanels));
    coarse += ring * (kTwoPi / kPanels) * r * 2.0 * d * s / kPanels;
  }
  QuadratureSpec inner = spec;
  inner.rel_tol = spec.rel_tol * 0.1;
  inner.abs_tol = std::max(spec.abs_tol, 0.1 * spec.rel_tol * coarse / (0.5 * (cfg.b * cfg.b - cfg.a * cfg.a)));
  auto radial = [&](double r) {
    return integrate_1d([&](double theta) { return f(r, theta); }, 0.0, kTwoPi, inner);
  };
  return integrate_radial(radial, cfg.a, cfg.b, spec);
}

double integrate_domain(const std::function<double(const Vec2&)>& f, const Domain& domain,
                        const QuadratureSpec& spec) {
  if (const auto* interval = std::get_if<IntervalDomain>(&domain)) {
    return integrate_1d([&](double x) { return f({x, 0.0}); }, interval->lo, interval->hi, spec);
  }
  const auto& annulus = std::get<AnnulusDomain>(domain);
  AnnulusConfig cfg;
  cfg.a = annulus.a;
  cfg.b = annulus.b;
  return integrate_annulus([&](double r, double theta) { return f(from_polar(r, theta)); }, cfg, spec);
}

}  // namespace abflow::numerics
