#include "abtool/config.hpp"

#include <abflow/ab_annulus.hpp>
#include <abflow/errors.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace abtool {

using nlohmann::json;

namespace {

// Sets key path -> line. Enough of a JSON lexer to follow object nesting and
// tell keys from string values; malformed input is left to the real parser.
class KeyScanner {
 public:
  explicit KeyScanner(std::string_view text) : text_(text) {}

  std::map<std::string, int> run() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == '"') {
        const int at = line_;
        std::string s = read_string();
        if (next_is_colon() && !frames_.empty() && frames_.back().object) {
          frames_.back().key = s;
          lines_.emplace(path(), at);
        }
      } else if (c == '{' || c == '[') {
        frames_.push_back({c == '{', {}});
        ++pos_;
      } else if (c == '}' || c == ']') {
        if (!frames_.empty()) frames_.pop_back();
        ++pos_;
      } else {
        ++pos_;
      }
    }
    return lines_;
  }

 private:
  struct Frame {
    bool object;
    std::string key;
  };

  std::string read_string() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      if (text_[pos_] == '\n') ++line_;
      out.push_back(text_[pos_++]);
    }
    ++pos_;
    return out;
  }

  bool next_is_colon() const {
    std::size_t p = pos_;
    while (p < text_.size() && (text_[p] == ' ' || text_[p] == '\t' || text_[p] == '\r' || text_[p] == '\n')) ++p;
    return p < text_.size() && text_[p] == ':';
  }

  std::string path() const {
    std::string out;
    for (const auto& f : frames_) {
      if (!f.object) continue;
      if (!out.empty()) out += '.';
      out += f.key;
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::vector<Frame> frames_;
  std::map<std::string, int> lines_;
};

class Reader {
 public:
  Reader(const json& root, std::map<std::string, int> lines) : root_(root), lines_(std::move(lines)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    std::ostringstream os;
    const auto it = lines_.find(path);
    if (it != lines_.end()) {
      os << "line " << it->second << ": ";
    } else {
      // Fall back to the enclosing block.
      const auto dot = path.rfind('.');
      const auto parent = dot == std::string::npos ? lines_.end() : lines_.find(path.substr(0, dot));
      if (parent != lines_.end()) os << "line " << parent->second << ": ";
    }
    os << path << ": " << message;
    throw ConfigError(os.str());
  }

  const json* block(const std::string& name, const std::set<std::string>& allowed) const {
    const auto it = root_.find(name);
    if (it == root_.end()) return nullptr;
    if (!it->is_object()) fail(name, "must be an object");
    for (const auto& [key, value] : it->items()) {
      if (!allowed.count(key)) fail(name + "." + key, "unknown key");
    }
    return &*it;
  }

  void number(const json* obj, const std::string& block, const char* key, double& out) const {
    if (!obj || !obj->contains(key)) return;
    const json& v = (*obj)[key];
    if (!v.is_number()) fail(block + "." + key, "must be a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(block + "." + key, "must be finite");
  }

  template <class Int>
  void integer(const json* obj, const std::string& block, const char* key, Int& out) const {
    if (!obj || !obj->contains(key)) return;
    const json& v = (*obj)[key];
    if (!v.is_number_integer()) fail(block + "." + key, "must be an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (!v.is_number_unsigned()) fail(block + "." + key, "must be a non-negative integer");
      out = v.get<Int>();
    } else {
      if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
        fail(block + "." + key, "out of range");
      }
      const auto wide = v.get<std::int64_t>();
      if (wide < std::numeric_limits<Int>::min() || wide > std::numeric_limits<Int>::max()) {
        fail(block + "." + key, "out of range");
      }
      out = static_cast<Int>(wide);
    }
  }

  void string(const json* obj, const std::string& block, const char* key, std::string& out) const {
    if (!obj || !obj->contains(key)) return;
    const json& v = (*obj)[key];
    if (!v.is_string()) fail(block + "." + key, "must be a string");
    out = v.get<std::string>();
  }

  void boolean(const json* obj, const std::string& block, const char* key, bool& out) const {
    if (!obj || !obj->contains(key)) return;
    const json& v = (*obj)[key];
    if (!v.is_boolean()) fail(block + "." + key, "must be true or false");
    out = v.get<bool>();
  }

 private:
  const json& root_;
  std::map<std::string, int> lines_;
};

int line_of_offset(std::string_view text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) line += text[i] == '\n' ? 1 : 0;
  return line;
}

// Runs `check`, converting module errors to a config error anchored at `path`.
void guarded(const Reader& reader, const std::string& path, const std::function<void()>& check) {
  try {
    check();
  } catch (const abflow::DomainError& e) {
    reader.fail(path, e.what());
  }
}

void validate_with(const RunConfig& cfg, const Reader& reader) {
  guarded(reader, "geometry", [&] { cfg.annulus.validate(); });
  const double lambda = abflow::annulus::flux_parameter(cfg.annulus);
  const double nu = std::abs(cfg.m + lambda);
  if (nu > 50.0) reader.fail("state.m", "angular order |m + lambda| must not exceed 50");
  if (cfg.n < 1 || cfg.n > 100) reader.fail("state.n", "radial index n must lie in [1, 100]");
  if (cfg.nr < 1) reader.fail("grid.nr", "must be >= 1");
  if (cfg.ntheta < 1) reader.fail("grid.ntheta", "must be >= 1");
  guarded(reader, "sde", [&] { cfg.sde.validate(); });
  if (cfg.format != "csv" && cfg.format != "json") reader.fail("output.format", "must be \"csv\" or \"json\"");
  if (cfg.path.empty()) reader.fail("output.path", "must not be empty");
  if (cfg.spectrum.m_min > cfg.spectrum.m_max) reader.fail("spectrum.m_min", "m_min <= m_max required");
  if (cfg.spectrum.n_max < 1 || cfg.spectrum.n_max > 100) reader.fail("spectrum.n_max", "must lie in [1, 100]");
  for (int m : {cfg.spectrum.m_min, cfg.spectrum.m_max}) {
    if (std::abs(m + lambda) > 50.0) reader.fail("spectrum", "angular order |m + lambda| must not exceed 50");
  }
  if (!(cfg.packets.alpha > 0.0)) reader.fail("packets.alpha", "must be positive");
  if (!(cfg.packets.airy_k > 0.0)) reader.fail("packets.airy_k", "must be positive");
  if (cfg.packets.points < 2) reader.fail("packets.points", "must be >= 2");
  if (cfg.models.points < 2) reader.fail("models.points", "must be >= 2");
  const std::set<double> distinct(cfg.models.masses.begin(), cfg.models.masses.end());
  if (distinct.size() < 3) reader.fail("models.masses", "need at least three distinct masses");
  for (double m : cfg.models.masses) {
    if (!(m > 0.0) || !std::isfinite(m)) reader.fail("models.masses", "masses must be positive");
  }
}

}  // namespace

std::map<std::string, int> key_lines(std::string_view text) { return KeyScanner(text).run(); }

json RunConfig::echo() const {
  json j;
  const auto& c = annulus.constants;
  j["constants"] = {{"hbar", c.hbar}, {"mass", c.mass}, {"charge", c.charge}, {"c", c.light_speed}};
  j["geometry"] = {{"a", annulus.a}, {"b", annulus.b}, {"B", annulus.B}};
  j["state"] = {{"m", m}, {"n", n}};
  j["grid"] = {{"nr", nr}, {"ntheta", ntheta}};
  j["sde"] = {{"dt", sde.dt},
              {"steps", sde.steps},
              {"burn_in", sde.burn_in},
              {"n_trajectories", sde.n_trajectories},
              {"seed", sde.seed},
              {"boundary_policy", "reject_resample"},
              {"max_retries", sde.max_retries},
              {"record_stride", sde.record_stride},
              {"max_halvings", sde.max_halvings}};
  j["output"] = {{"format", format}, {"path", path}, {"write_positions", write_positions}};
  j["spectrum"] = {{"m_min", spectrum.m_min}, {"m_max", spectrum.m_max}, {"n_max", spectrum.n_max}};
  j["packets"] = {{"alpha", packets.alpha}, {"k0", packets.k0}, {"airy_k", packets.airy_k}, {"points", packets.points}};
  j["models"] = {{"masses", models.masses}, {"points", models.points}};
  return j;
}

void RunConfig::validate() const {
  const json empty = json::object();
  validate_with(*this, Reader(empty, {}));
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "line " << line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1) << ": malformed JSON ("
       << e.what() << ")";
    throw ConfigError(os.str());
  }
  if (!root.is_object()) throw ConfigError("line 1: configuration must be a JSON object");

  const Reader r(root, key_lines(text));
  static const std::set<std::string> kBlocks{"constants", "geometry", "state", "grid", "sde",
                                             "output",    "spectrum", "packets", "models"};
  for (const auto& [key, value] : root.items()) {
    if (!kBlocks.count(key)) r.fail(key, "unknown key");
  }

  RunConfig cfg;
  auto& c = cfg.annulus.constants;
  const json* constants = r.block("constants", {"hbar", "mass", "charge", "c"});
  r.number(constants, "constants", "hbar", c.hbar);
  r.number(constants, "constants", "mass", c.mass);
  r.number(constants, "constants", "charge", c.charge);
  r.number(constants, "constants", "c", c.light_speed);

  const json* geometry = r.block("geometry", {"a", "b", "B"});
  r.number(geometry, "geometry", "a", cfg.annulus.a);
  r.number(geometry, "geometry", "b", cfg.annulus.b);
  r.number(geometry, "geometry", "B", cfg.annulus.B);

  const json* state = r.block("state", {"m", "n"});
  r.integer(state, "state", "m", cfg.m);
  r.integer(state, "state", "n", cfg.n);

  const json* grid = r.block("grid", {"nr", "ntheta"});
  r.integer(grid, "grid", "nr", cfg.nr);
  r.integer(grid, "grid", "ntheta", cfg.ntheta);

  const json* sde = r.block("sde", {"dt", "steps", "burn_in", "n_trajectories", "seed", "boundary_policy",
                                    "max_retries", "record_stride", "max_halvings"});
  r.number(sde, "sde", "dt", cfg.sde.dt);
  r.integer(sde, "sde", "steps", cfg.sde.steps);
  r.integer(sde, "sde", "burn_in", cfg.sde.burn_in);
  r.integer(sde, "sde", "n_trajectories", cfg.sde.n_trajectories);
  r.integer(sde, "sde", "seed", cfg.sde.seed);
  std::string policy = "reject_resample";
  r.string(sde, "sde", "boundary_policy", policy);
  if (policy != "reject_resample") r.fail("sde.boundary_policy", "only \"reject_resample\" is supported");
  r.integer(sde, "sde", "max_retries", cfg.sde.max_retries);
  r.integer(sde, "sde", "record_stride", cfg.sde.record_stride);
  r.integer(sde, "sde", "max_halvings", cfg.sde.max_halvings);

  const json* output = r.block("output", {"format", "path", "write_positions"});
  r.string(output, "output", "format", cfg.format);
  r.string(output, "output", "path", cfg.path);
  r.boolean(output, "output", "write_positions", cfg.write_positions);

  const json* spectrum = r.block("spectrum", {"m_min", "m_max", "n_max"});
  r.integer(spectrum, "spectrum", "m_min", cfg.spectrum.m_min);
  r.integer(spectrum, "spectrum", "m_max", cfg.spectrum.m_max);
  r.integer(spectrum, "spectrum", "n_max", cfg.spectrum.n_max);

  const json* packets = r.block("packets", {"alpha", "k0", "airy_k", "points"});
  r.number(packets, "packets", "alpha", cfg.packets.alpha);
  r.number(packets, "packets", "k0", cfg.packets.k0);
  r.number(packets, "packets", "airy_k", cfg.packets.airy_k);
  r.integer(packets, "packets", "points", cfg.packets.points);

  const json* models = r.block("models", {"masses", "points"});
  if (models && models->contains("masses")) {
    const json& v = (*models)["masses"];
    if (!v.is_array()) r.fail("models.masses", "must be an array of numbers");
    cfg.models.masses.clear();
    for (const auto& x : v) {
      if (!x.is_number()) r.fail("models.masses", "must be an array of numbers");
      cfg.models.masses.push_back(x.get<double>());
    }
  }
  r.integer(models, "models", "points", cfg.models.points);

  validate_with(cfg, r);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace abtool
