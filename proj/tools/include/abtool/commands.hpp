#pragma once

#include "abtool/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace abtool {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerics = 3,
  kExitCheckFailed = 4,
};

const std::vector<std::string>& command_names();

struct CommandOptions {
  std::string command;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  bool svg = false;
  /// Worker cap; 0 means hardware concurrency limited by ABTOOL_THREADS.
  int threads = 0;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string message;
  std::filesystem::path out_dir;
  std::filesystem::path manifest;
};

/// Worker count from hardware concurrency, capped by ABTOOL_THREADS when set.
int default_threads();

/// Loads the configuration, applies overrides and runs one subcommand.
/// Never throws; failures map to exit codes with a message.
CommandResult run_command(const CommandOptions& options);

/// Runs a subcommand on an already parsed configuration (overrides applied).
CommandResult run_command(const std::string& command, RunConfig config, bool svg, int threads);

}  // namespace abtool
