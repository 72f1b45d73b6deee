#include <doctest.h>

#include "abtool/commands.hpp"
#include "abtool/config.hpp"
#include "abtool/output.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace abtool;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("abtool_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.in.json";
  std::ofstream(p) << text;
  return p;
}

CommandResult run(const std::string& cmd, const fs::path& dir, const std::string& config,
                  const std::string& format = "") {
  CommandOptions o;
  o.command = cmd;
  o.config_path = write_config(dir, config).string();
  o.out_dir = (dir / "out").string();
  if (!format.empty()) o.format = format;
  o.threads = 2;
  return run_command(o);
}

int shell(const std::string& args) {
  const int status = std::system((std::string(ABTOOL_EXE) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("empty config gives natural-unit defaults") {
  const auto c = parse_config("{}");
  CHECK(c.annulus.constants.hbar == 1.0);
  CHECK(c.annulus.constants.mass == 1.0);
  CHECK(c.annulus.constants.charge == 1.0);
  CHECK(c.annulus.constants.light_speed == 1.0);
  CHECK(c.annulus.a == 1.0);
  CHECK(c.annulus.b == 3.0);
  CHECK(c.annulus.B == 1.0);
  CHECK(c.m == 1);
  CHECK(c.n == 1);
  CHECK(c.format == "csv");
}

TEST_CASE("config errors are line anchored") {
  try {
    parse_config("{\"geometry\":{\"a\":3,\"b\":1}}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("a < b required") != std::string::npos);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  try {
    parse_config("{\n  \"sde\": {\n    \"dt\": 0.001,\n    \"dtt\": 2\n  }\n}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("{\"bogus\": 1}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\n \"state\": {\"m\": 1,,}}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"state\":{\"n\":0}}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"output\":{\"format\":\"xml\"}}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"constants\":{\"hbar\":-1}}"), ConfigError);
}

TEST_CASE("echoed config parses back to the same config") {
  const auto c = parse_config("{\"state\":{\"m\":2,\"n\":3},\"geometry\":{\"B\":0.25,\"b\":4},\"sde\":{\"seed\":9}}");
  const auto again = parse_config(c.echo().dump());
  CHECK(again.echo() == c.echo());
  CHECK(again.m == 2);
  CHECK(again.sde.seed == 9u);
}

TEST_CASE("format_double is locale independent and round-trips") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-1e-300) == "-1e-300");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
  CHECK(format_double(NAN) == "nan");
}

TEST_CASE("spectrum command") {
  const auto dir = scratch("spectrum");
  const auto r = run("spectrum", dir, "{\"state\":{\"m\":1},\"geometry\":{\"B\":1}}");
  REQUIRE(r.exit_code == kExitOk);
  const auto manifest = nlohmann::json::parse(slurp(r.manifest));
  CHECK(manifest["derived"]["lambda"].get<double>() == doctest::Approx(-0.5));
  CHECK(manifest["status"] == "ok");
  const std::string csv = slurp(dir / "out" / "spectrum.csv");
  std::istringstream lines(csv);
  std::string line;
  bool found = false;
  while (std::getline(lines, line)) {
    if (line.rfind("1,1,", 0) != 0) continue;
    found = true;
    std::vector<double> v;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
    CHECK(v[3] == doctest::Approx(0.5));
    CHECK(v[4] == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(v[6] == doctest::Approx(M_PI * M_PI / 8).epsilon(1e-12));
  }
  CHECK(found);
}

TEST_CASE("fields command writes the documented header") {
  const auto dir = scratch("fields");
  const auto r = run("fields", dir, "{\"grid\":{\"nr\":8,\"ntheta\":4}}");
  REQUIRE(r.exit_code == kExitOk);
  const std::string csv = slurp(dir / "out" / "fields.csv");
  CHECK(csv.substr(0, csv.find('\n')) ==
        "r,theta,rho,eta_r,eta_t,xi_re_r,xi_re_t,xi_im_r,xi_im_t,gamma_r,gamma_t,delta_r,delta_t,v_r,v_t,w_r,w_t,Q,F_r");
  CHECK(csv.find('\r') == std::string::npos);

  // re-running from the echoed config reproduces the table byte for byte
  const auto echo = slurp(dir / "out" / "config.json");
  const auto dir2 = scratch("fields_again");
  REQUIRE(run("fields", dir2, echo).exit_code == kExitOk);
  CHECK(slurp(dir2 / "out" / "fields.csv") == csv);
  CHECK(slurp(dir2 / "out" / "manifest.json").size() > 0);
}

TEST_CASE("json table format") {
  const auto dir = scratch("json");
  const auto r = run("packets", dir, "{}", "json");
  REQUIRE(r.exit_code == kExitOk);
  const auto t = nlohmann::json::parse(slurp(dir / "out" / "gaussian_packet.json"));
  CHECK(t["columns"].is_array());
  CHECK(t["rows"].size() > 0);
}

TEST_CASE("models command") {
  const auto dir = scratch("models");
  const auto r = run("models", dir, "{}");
  REQUIRE(r.exit_code == kExitOk);
  const auto m = nlohmann::json::parse(slurp(r.manifest));
  CHECK(m["results"]["hydrogen"]["max_relative_D_difference"].get<double>() <= 1e-10);
}

TEST_CASE("config failures map to exit 2") {
  const auto dir = scratch("bad");
  const auto r = run("spectrum", dir, "{\"geometry\":{\"a\":3,\"b\":1}}");
  CHECK(r.exit_code == kExitConfig);
  CHECK(r.message.find("a < b required") != std::string::npos);
  CommandOptions o;
  o.command = "spectrum";
  o.config_path = (dir / "missing.json").string();
  CHECK(run_command(o).exit_code == kExitConfig);
}

TEST_CASE("executable exit codes") {
  const auto dir = scratch("exe");
  const auto cfg = write_config(dir, "{}").string();
  CHECK(shell("spectrum --config " + cfg + " --out " + (dir / "o").string()) == 0);
  CHECK(shell("spectrum --config " + cfg + " --format xml") == 2);
  CHECK(shell("nonsense --config " + cfg) == 2);
  CHECK(shell("spectrum") == 2);
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << "{\"geometry\":{\"a\":3,\"b\":1}}";
  CHECK(shell("fields --config " + bad.string()) == 2);
}
