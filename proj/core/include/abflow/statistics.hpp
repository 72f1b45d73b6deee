#pragma once

#include <functional>
#include <vector>

namespace abflow::stats {

/// Two-sided Kolmogorov-Smirnov distance sup |F_n - F| of a sample against a
/// continuous CDF. The sample is copied and sorted.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov tail probability P(D_n > d) with the Stephens
/// small-sample correction.
double ks_p_value(double distance, std::size_t n);

struct ChiSquareResult {
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 0.0;
  int merged_bins = 0;  ///< bins left after merging
};

/// Pearson chi-square of observed counts against expected counts. Adjacent
/// bins are merged left to right until every expected count reaches
/// `min_expected`; a short tail is folded into the last full bin. Degrees of
/// freedom are merged_bins - 1 - fitted_parameters.
ChiSquareResult chi_square(const std::vector<double>& observed, const std::vector<double>& expected,
                           double min_expected = 20.0, int fitted_parameters = 0);

/// Upper tail of the chi-square distribution.
double chi_square_tail(double chi2, int dof);

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Mean of group means with the standard error of their spread.
MeanEstimate grouped_mean(const std::vector<std::vector<double>>& groups);

}  // namespace abflow::stats
