#include "abflow/statistics.hpp"

#include "abflow/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace abflow::stats {

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InsufficientSamplesError("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_p_value(double distance, std::size_t n) {
  if (n == 0) throw InsufficientSamplesError("ks_p_value: no samples");
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * distance;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double chi_square_tail(double chi2, int dof) {
  if (dof < 1) throw InsufficientSamplesError("chi_square_tail: need at least one degree of freedom");
  if (!(chi2 >= 0.0)) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * chi2);
}

ChiSquareResult chi_square(const std::vector<double>& observed, const std::vector<double>& expected,
                           double min_expected, int fitted_parameters) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw InsufficientSamplesError("chi_square: observed and expected must be non-empty and equal length");
  }
  std::vector<double> obs;
  std::vector<double> exp;
  double acc_o = 0.0;
  double acc_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    acc_o += observed[i];
    acc_e += expected[i];
    if (acc_e >= min_expected) {
      obs.push_back(acc_o);
      exp.push_back(acc_e);
      acc_o = 0.0;
      acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (exp.empty()) {
      obs.push_back(acc_o);
      exp.push_back(acc_e);
    } else {
      obs.back() += acc_o;
      exp.back() += acc_e;
    }
  }
  ChiSquareResult r;
  r.merged_bins = static_cast<int>(exp.size());
  r.dof = r.merged_bins - 1 - fitted_parameters;
  if (r.dof < 1) throw InsufficientSamplesError("chi_square: too few bins after merging");
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double diff = obs[i] - exp[i];
    r.chi2 += diff * diff / exp[i];
  }
  r.p_value = chi_square_tail(r.chi2, r.dof);
  return r;
}

MeanEstimate grouped_mean(const std::vector<std::vector<double>>& groups) {
  std::vector<double> means;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    means.push_back(std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size()));
  }
  if (means.empty()) throw InsufficientSamplesError("grouped_mean: no samples");
  MeanEstimate e;
  e.mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
  if (means.size() > 1) {
    double ss = 0.0;
    for (double m : means) ss += (m - e.mean) * (m - e.mean);
    e.standard_error = std::sqrt(ss / static_cast<double>(means.size() - 1) / static_cast<double>(means.size()));
  }
  return e;
}

}  // namespace abflow::stats
