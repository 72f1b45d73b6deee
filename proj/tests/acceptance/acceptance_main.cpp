// Runs `check` twice with the default configuration and prints one line per
// acceptance criterion. Exits nonzero when any criterion fails.

#include "abtool/commands.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "abflow_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path config = work / "config.json";
  std::ofstream(config) << "{}\n";

  abtool::CommandOptions opts;
  opts.command = "check";
  opts.config_path = config.string();
  opts.out_dir = (work / "run").string();

  const auto first = abtool::run_command(opts);
  if (first.exit_code != abtool::kExitOk && first.exit_code != abtool::kExitCheckFailed) {
    std::cout << "FAIL check did not complete (exit " << first.exit_code << "): " << first.message << "\n";
    return 1;
  }
  const std::string manifest_a = slurp(first.manifest);
  fs::rename(first.manifest, work / "manifest_first.json");

  const auto second = abtool::run_command(opts);
  const std::string manifest_b = slurp(second.manifest);

  const auto m = nlohmann::json::parse(manifest_a);
  std::map<int, nlohmann::json> by_id;
  for (const auto& c : m.at("checks")) by_id[c.at("id").get<int>()] = c;

  bool all = true;
  for (int id = 1; id <= 12; ++id) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      std::cout << "FAIL " << id << " missing from manifest\n";
      all = false;
      continue;
    }
    bool passed = it->second.at("passed").get<bool>();
    std::string detail = it->second.at("detail").get<std::string>();
    if (id == 12) {
      const bool same = manifest_a == manifest_b;
      passed = passed && same && first.exit_code == second.exit_code;
      detail += same ? "; repeated run manifests are byte-identical" : "; repeated run manifests differ";
    }
    all = all && passed;
    std::cout << (passed ? "PASS " : "FAIL ") << id << " " << it->second.at("name").get<std::string>() << ": "
              << detail << "\n";
  }
  return all ? 0 : 1;
}
