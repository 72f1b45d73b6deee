#pragma once

#include "abflow/annulus_config.hpp"
#include "abflow/nelson.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace abflow::verify {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  /// Named residuals and estimates in insertion order.
  std::vector<std::pair<std::string, double>> metrics;
  /// Wall-clock seconds; kept out of manifests.
  double seconds = 0.0;

  void metric(std::string key, double value) { metrics.emplace_back(std::move(key), value); }
};

struct SuiteOptions {
  AnnulusConfig base;  ///< constants and geometry; B selects the sampler state's lambda
  int m = 1;           ///< sampler state
  int n = 1;
  std::uint64_t seed = 20240611;
  int threads = 0;
  nelson::SdeConfig sde;
};

/// B giving flux parameter `lambda` for the geometry and constants in `cfg`.
AnnulusConfig with_lambda(AnnulusConfig cfg, double lambda);

CheckResult check_angular_momentum(const SuiteOptions& opt);
CheckResult check_orthogonality(const SuiteOptions& opt);
CheckResult check_circulation(const SuiteOptions& opt);
CheckResult check_energy_identity(const SuiteOptions& opt);
CheckResult check_magnetic_force(const SuiteOptions& opt);
CheckResult check_gaussian_packet(const SuiteOptions& opt);
CheckResult check_airy_packet(const SuiteOptions& opt);
CheckResult check_sampler(const SuiteOptions& opt);
CheckResult check_gauge_family(const SuiteOptions& opt);
CheckResult check_special_functions(const SuiteOptions& opt);
CheckResult check_gauge_invariance(const SuiteOptions& opt);

/// Criteria 1 through 11 in order. A check that throws is reported as failed
/// with the exception text.
std::vector<CheckResult> run_suite(const SuiteOptions& opt);

/// Criterion 12: byte comparison of two serialized manifests.
CheckResult check_determinism(const std::string& first, const std::string& second);

}  // namespace abflow::verify
