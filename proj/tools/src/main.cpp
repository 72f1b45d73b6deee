#include "abtool/commands.hpp"

#include <CLI11.hpp>
#include <abflow/version.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"abtool: Aharonov-Bohm hydrodynamics workbench"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(abflow::kVersion));

  abtool::CommandOptions opts;
  std::string out;
  std::uint64_t seed = 0;
  std::string format;
  for (const auto& name : abtool::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config_path, "configuration file (JSON)")->required();
    sub->add_option("--out", out, "output directory (overrides output.path)");
    sub->add_option("--seed", seed, "random seed (overrides sde.seed)");
    sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--svg", opts.svg, "also write SVG line plots");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return abtool::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  opts.command = sub->get_name();
  if (sub->count("--out")) opts.out_dir = out;
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--format")) opts.format = format;

  const abtool::CommandResult res = abtool::run_command(opts);
  if (res.exit_code == abtool::kExitOk || res.exit_code == abtool::kExitCheckFailed) {
    std::cout << res.message;
    std::cout << "manifest: " << res.manifest.string() << "\n";
  } else {
    std::cerr << "abtool: " << res.message << "\n";
  }
  return res.exit_code;
}
