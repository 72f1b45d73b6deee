#pragma once

#include <abflow/annulus_config.hpp>
#include <abflow/nelson.hpp>

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abtool {

/// Invalid configuration; the message carries "line N:" when the offending
/// key or token can be located.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectrumBlock {
  int m_min = -3;
  int m_max = 3;
  int n_max = 3;
};

struct PacketBlock {
  double alpha = 1.0;
  double k0 = 1.0;
  double airy_k = 1.0;
  int points = 201;
};

struct ModelsBlock {
  std::vector<double> masses{1.0, 2.0, 4.0, 8.0};
  int points = 64;
};

struct RunConfig {
  abflow::AnnulusConfig annulus;
  int m = 1;
  int n = 1;
  int nr = 64;
  int ntheta = 64;
  abflow::nelson::SdeConfig sde;
  std::string format = "csv";
  std::string path = "abtool_out";
  bool write_positions = true;
  SpectrumBlock spectrum;
  PacketBlock packets;
  ModelsBlock models;

  /// Full configuration with defaults filled in; parses back to an equal config.
  [[nodiscard]] nlohmann::json echo() const;
  /// Re-runs every module-level validation; throws ConfigError.
  void validate() const;
};

/// Line (1-based) of every object key, addressed by dotted path.
std::map<std::string, int> key_lines(std::string_view text);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace abtool
