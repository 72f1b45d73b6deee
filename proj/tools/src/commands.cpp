#include "abtool/commands.hpp"

#include "abtool/output.hpp"

#include <abflow/ab_annulus.hpp>
#include <abflow/errors.hpp>
#include <abflow/nelson.hpp>
#include <abflow/reference_models.hpp>
#include <abflow/verification.hpp>
#include <abflow/version.hpp>
#include <abflow/wavepackets.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace abtool {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

template <class F>
void parallel_for(std::size_t count, int threads, F&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
}

struct Run {
  std::string command;
  RunConfig cfg;
  fs::path dir;
  bool svg = false;
  int threads = 1;
  json manifest;
  json timing = json::object();
  std::vector<std::string> outputs;

  void table(const std::string& stem, const Table& t) { outputs.push_back(write_table(dir, stem, t, cfg.format)); }
  void text(const std::string& name, const std::string& body) {
    write_text(dir / name, body);
    outputs.push_back(name);
  }
};

json derived_block(const RunConfig& cfg) {
  const abflow::annulus::ABState s = abflow::annulus::eigenstate(cfg.annulus, cfg.m, cfg.n);
  return {{"lambda", s.lambda}, {"flux", cfg.annulus.flux()}, {"nu", s.nu},        {"tau", s.tau},
          {"k", s.k},           {"norm", s.norm},             {"energy", s.energy}, {"beta_squared", cfg.annulus.constants.diffusion()}};
}

// ---------------------------------------------------------------- spectrum

void spectrum(Run& run) {
  const auto& cfg = run.cfg;
  const double hbar = cfg.annulus.constants.hbar;
  Table t;
  t.columns = {"m", "n", "lambda", "nu", "tau", "k", "energy", "lz_total", "lz_canonical", "lz_osmotic"};
  double worst_total = 0.0;
  double worst_osmotic = 0.0;
  for (int m = cfg.spectrum.m_min; m <= cfg.spectrum.m_max; ++m) {
    for (int n = 1; n <= cfg.spectrum.n_max; ++n) {
      const abflow::annulus::ABState s = abflow::annulus::eigenstate(cfg.annulus, m, n);
      const abflow::annulus::AngularMomenta L = abflow::annulus::angular_momenta(s, cfg.annulus);
      worst_total = std::max(worst_total, std::abs(L.total - hbar * (m + s.lambda)));
      worst_osmotic = std::max(worst_osmotic, std::abs(L.osmotic - hbar * s.lambda));
      t.rows.push_back({static_cast<long long>(m), static_cast<long long>(n), s.lambda, s.nu, s.tau, s.k, s.energy,
                        L.total, L.canonical, L.osmotic});
    }
  }
  run.table("spectrum", t);
  run.manifest["results"] = {{"rows", t.rows.size()},
                             {"max_lz_total_error", worst_total},
                             {"max_lz_osmotic_error", worst_osmotic}};
}

// ------------------------------------------------------------------ fields

void fields(Run& run) {
  const auto& cfg = run.cfg;
  const auto& c = cfg.annulus.constants;
  const abflow::annulus::ABState s = abflow::annulus::eigenstate(cfg.annulus, cfg.m, cfg.n);
  const abflow::WaveField psi = s.wavefield();
  const abflow::VectorPotentialSpec A = abflow::annulus::vector_potential_spec(cfg.annulus);
  const auto nr = static_cast<std::size_t>(cfg.nr);
  const auto nt = static_cast<std::size_t>(cfg.ntheta);
  constexpr std::size_t kCols = 19;
  std::vector<std::array<double, kCols>> rows(nr * nt);
  std::vector<char> nodal(rows.size(), 0);
  std::vector<char> stencil_outside(rows.size(), 0);

  parallel_for(rows.size(), run.threads, [&](std::size_t idx) {
    const std::size_t i = idx / nt;
    const std::size_t j = idx % nt;
    const double r = cfg.annulus.a + cfg.annulus.width() * (static_cast<double>(i) + 0.5) / static_cast<double>(nr);
    const double theta = abflow::kTwoPi * static_cast<double>(j) / static_cast<double>(nt);
    const abflow::Vec2 p = abflow::from_polar(r, theta);
    auto& row = rows[idx];
    row.fill(NAN);
    row[0] = r;
    row[1] = theta;
    row[2] = psi.density(p);
    try {
      const abflow::VelocityDecomposition d = abflow::decompose(psi, A, c, p);
      const abflow::Vec2* vecs[] = {&d.eta, &d.xi_real, &d.xi_imag, &d.gamma, &d.delta, &d.v_quasi, &d.w_quasi};
      std::size_t col = 3;
      for (const abflow::Vec2* v : vecs) {
        const abflow::PolarComponents pc = abflow::polar_components(*v, p);
        row[col++] = pc.r;
        row[col++] = pc.theta;
      }
    } catch (const abflow::DensityFloorError&) {
      nodal[idx] = 1;
      return;
    }
    // The Q and F stencils reach about 0.02 past the point; near the walls
    // they leave the support and the columns stay nan.
    try {
      row[17] = abflow::quantum_potential(psi, c, p);
      row[18] = abflow::polar_components(abflow::quantum_force(psi, c, p), p).r;
    } catch (const abflow::DensityFloorError&) {
      stencil_outside[idx] = 1;
    }
  });

  Table t;
  t.columns = {"r",     "theta", "rho",     "eta_r",   "eta_t", "xi_re_r", "xi_re_t", "xi_im_r", "xi_im_t", "gamma_r",
               "gamma_t", "delta_r", "delta_t", "v_r", "v_t",   "w_r",     "w_t",     "Q",       "F_r"};
  double worst_orth = 0.0;
  std::size_t nodal_points = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    t.rows.emplace_back(row.begin(), row.end());
    if (nodal[k]) {
      ++nodal_points;
      continue;
    }
    worst_orth = std::max(worst_orth, std::abs(row[9] * row[11] + row[10] * row[12]));
  }
  run.table("fields", t);
  run.manifest["results"] = {{"points", rows.size()},
                             {"nodal_points", nodal_points},
                             {"points_without_Q",
                              std::count(stencil_outside.begin(), stencil_outside.end(), 1) + nodal_points},
                             {"max_abs_gamma_dot_delta", worst_orth}};

  if (run.svg) {
    std::vector<Series> series(3);
    series[0].label = "rho(r)";
    series[1].label = "v_theta(r)";
    series[2].label = "Q(r)";
    for (std::size_t i = 0; i < nr; ++i) {
      const auto& row = rows[i * nt];
      series[0].points.emplace_back(row[0], row[2]);
      series[1].points.emplace_back(row[0], row[14]);
      series[2].points.emplace_back(row[0], row[17]);
    }
    std::ostringstream title;
    title << "state m=" << cfg.m << ", n=" << cfg.n << ", nu=" << format_double(s.nu) << ", theta=0";
    run.text("fields.svg", svg_panels(title.str(), "r", series));
  }
}

// ------------------------------------------------------------ trajectories

void trajectories(Run& run) {
  namespace nelson = abflow::nelson;
  const auto& cfg = run.cfg;
  const auto& c = cfg.annulus.constants;
  const abflow::annulus::ABState s = abflow::annulus::eigenstate(cfg.annulus, cfg.m, cfg.n);
  const abflow::WaveField psi = s.wavefield();
  const abflow::annulus::RadialMode mode = s.radial;
  const nelson::RadialTarget target([mode](double r) { return mode.density(r); }, cfg.annulus.a, cfg.annulus.b);
  const auto paths = nelson::simulate(psi, cfg.annulus, cfg.sde, target, run.threads);

  Table summary;
  summary.columns = {"trajectory",   "stream_id", "samples", "accepted_steps", "rejected_steps",
                     "halvings",     "aborted",   "angular_displacement",      "diagnostic"};
  std::size_t aborted = 0;
  for (const auto& p : paths) {
    aborted += p.aborted ? 1 : 0;
    summary.rows.push_back({static_cast<long long>(p.index), std::to_string(p.stream_id),
                            static_cast<long long>(p.positions.size()), static_cast<long long>(p.accepted_steps),
                            static_cast<long long>(p.rejected_steps), static_cast<long long>(p.halvings),
                            static_cast<long long>(p.aborted ? 1 : 0), nelson::angular_displacement(p),
                            p.diagnostic});
  }
  run.table("trajectories", summary);

  if (cfg.write_positions) {
    Table pos;
    pos.columns = {"trajectory", "sample", "step", "x", "y", "r", "theta"};
    for (const auto& p : paths) {
      for (std::size_t k = 0; k < p.positions.size(); ++k) {
        const abflow::Vec2& x = p.positions[k];
        const long long step = cfg.sde.burn_in + static_cast<long long>(k + 1) * p.record_stride;
        pos.rows.push_back({static_cast<long long>(p.index), static_cast<long long>(k), step, x.x, x.y,
                            abflow::norm(x), std::atan2(x.y, x.x)});
      }
    }
    run.table("positions", pos);
  }

  // Radial histogram against the target marginal.
  constexpr int kBins = 40;
  std::vector<double> counts(kBins, 0.0);
  double total = 0.0;
  for (const auto& p : paths) {
    for (const auto& x : p.positions) {
      const int k = std::clamp(static_cast<int>((abflow::norm(x) - cfg.annulus.a) / cfg.annulus.width() * kBins), 0,
                               kBins - 1);
      counts[static_cast<std::size_t>(k)] += 1.0;
      total += 1.0;
    }
  }
  Table hist;
  hist.columns = {"r_lo", "r_hi", "observed_fraction", "expected_fraction"};
  Series observed{"observed radial density", {}};
  Series expected{"target 2 pi r rho(r)", {}};
  const double w = cfg.annulus.width() / kBins;
  for (int k = 0; k < kBins; ++k) {
    const double lo = cfg.annulus.a + k * w;
    const double e = target.cdf(lo + w) - target.cdf(lo);
    const double o = total > 0.0 ? counts[static_cast<std::size_t>(k)] / total : 0.0;
    hist.rows.push_back({lo, lo + w, o, e});
    observed.points.emplace_back(lo + 0.5 * w, o / w);
    expected.points.emplace_back(lo + 0.5 * w, e / w);
  }
  run.table("radial_histogram", hist);
  if (run.svg) run.text("trajectories.svg", svg_panels("radial marginal", "r", {observed, expected}));

  json results;
  results["trajectories"] = paths.size();
  results["aborted_trajectories"] = aborted;
  results["rejected_fraction"] = nelson::rejected_fraction(paths);
  results["samples"] = total;
  const double recorded_dt = cfg.sde.dt * cfg.sde.record_stride;
  auto thinning = [&](double time) { return std::max(1, static_cast<int>(std::ceil(time / recorded_dt))); };
  try {
    const double width = cfg.annulus.width();
    const auto st = nelson::stationarity_test(paths, target, kBins, thinning(width * width / c.diffusion()));
    results["stationarity"] = {{"ks_distance", st.ks_distance}, {"ks_p_value", st.ks_p_value},
                               {"chi2", st.chi2},               {"dof", st.dof},
                               {"p_value", st.p_value},         {"samples", st.samples}};
    const auto ang = nelson::angular_uniformity_test(paths, 12, thinning(cfg.annulus.b * cfg.annulus.b / c.diffusion()));
    results["angular_uniformity"] = {
        {"chi2", ang.chi2}, {"dof", ang.dof}, {"p_value", ang.p_value}, {"samples", ang.samples}};
    const auto lz =
        nelson::ergodic_angular_momentum(paths, psi, abflow::annulus::vector_potential_spec(cfg.annulus), c);
    results["ergodic_lz"] = {{"mean", lz.mean},
                             {"standard_error", lz.standard_error},
                             {"expected", c.hbar * (s.m + s.lambda)},
                             {"samples", lz.samples}};
  } catch (const abflow::InsufficientSamplesError& e) {
    results["statistics_skipped"] = e.what();
  }
  run.manifest["results"] = results;
}

// ----------------------------------------------------------------- packets

void packets(Run& run) {
  namespace pk = abflow::packets;
  const auto& cfg = run.cfg;
  const auto& c = cfg.annulus.constants;
  pk::GaussianPacketConfig g;
  g.alpha = cfg.packets.alpha;
  g.k0 = cfg.packets.k0;
  g.mass = c.mass;
  g.hbar = c.hbar;
  g.validate();
  const int points = cfg.packets.points;

  Table gt;
  gt.columns = {"t", "x", "rho", "eta", "xi", "F_Q", "delta"};
  json consistency = json::array();
  for (double t : {0.0, 0.5 * g.T(), g.T(), 3.0 * g.T()}) {
    const double centre = g.u0() * t;
    const double half = 4.0 * g.epsilon(t);
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = centre - half + 2.0 * half * i / (points - 1);
    for (double x : grid) {
      const pk::GaussianFields f = pk::gaussian_fields(g, x, t);
      gt.rows.push_back({t, x, f.rho, f.eta, f.xi, f.F_Q, f.delta});
    }
    if (t > 0.0) {
      const pk::GaussianConsistency r = pk::gaussian_consistency(g, grid, t, 1e-4);
      consistency.push_back({{"t", t},
                             {"continuity_residual", r.continuity_residual},
                             {"phase_relation_residual", r.phase_relation_residual},
                             {"decomposition_residual", r.decomposition_residual}});
    }
  }
  run.table("gaussian_packet", gt);

  pk::AiryPacketConfig ac;
  ac.k = cfg.packets.airy_k;
  ac.mass = c.mass;
  ac.hbar = c.hbar;
  const abflow::WaveField airy = pk::airy_wavefield(ac);
  Table at;
  at.columns = {"t", "x", "rho", "eta", "F_Q"};
  double translation = 0.0;
  for (double t : {0.0, 0.5, 1.0}) {
    const double shift = ac.k * t * t / (2.0 * ac.mass);
    for (int i = 0; i < points; ++i) {
      const double x = ac.x_lo + (ac.x_hi - ac.x_lo) * i / (points - 1);
      double rho = airy.density({x, 0.0}, t);
      double eta = NAN;
      double force = NAN;
      try {
        const pk::AiryFields f = pk::airy_fields(ac, x, t);
        rho = f.rho;
        eta = f.eta;
        force = f.F_Q;
      } catch (const abflow::DensityFloorError&) {
      }
      translation = std::max(translation, std::abs(rho - airy.density({x - shift, 0.0}, 0.0)));
      at.rows.push_back({t, x, rho, eta, force});
    }
  }
  run.table("airy_packet", at);

  double force_error = 0.0;
  for (int i = 0; i < 20; ++i) {
    const pk::AiryFields f = pk::airy_fields(ac, -1.5 + 0.15 * i, 0.0);
    force_error = std::max(force_error, std::abs(f.F_Q - ac.k) / ac.k);
  }
  const pk::FreeParticleFields free = pk::free_particle_fields(g.k0, g.mass, g.hbar, 0.0, g.T());
  run.manifest["results"] = {
      {"gaussian", {{"T", g.T()}, {"u0", g.u0()}, {"consistency", consistency}}},
      {"airy", {{"max_translation_residual", translation}, {"max_force_relative_error", force_error}}},
      {"free_particle", {{"eta", free.eta}, {"xi", free.xi}, {"normalizable", free.normalizable}}}};
}

// ------------------------------------------------------------------ models

void models(Run& run) {
  namespace md = abflow::models;
  const auto& cfg = run.cfg;
  const auto& c = cfg.annulus.constants;
  const int points = cfg.models.points;

  Table ht;
  ht.columns = {"n", "l", "m_l", "r", "theta", "rho", "J_phi", "D_r", "D_theta", "D_numeric_r", "D_numeric_theta"};
  json norms = json::array();
  double worst_dot = 0.0;
  double worst_d = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int l = 0; l < n; ++l) {
      for (int ml = -l; ml <= l; ++ml) {
        md::HydrogenState s;
        s.n = n;
        s.l = l;
        s.m_l = ml;
        s.mass = c.mass;
        s.hbar = c.hbar;
        norms.push_back({{"n", n}, {"l", l}, {"m_l", ml}, {"norm", md::hydrogen_norm(s)}});
        // Relative to the state's largest |D|; pointwise ratios blow up on nodal surfaces.
        double peak_d = 0.0;
        double diff_d = 0.0;
        for (double theta : {0.25 * abflow::kPi, 0.5 * abflow::kPi, 0.8 * abflow::kPi}) {
          for (int i = 0; i < points; ++i) {
            const double r = s.a0 * 15.0 * (i + 1) / points;
            const md::HydrogenFields f = md::hydrogen_fields(s, r, theta);
            ht.rows.push_back({static_cast<long long>(n), static_cast<long long>(l), static_cast<long long>(ml), r,
                               theta, f.rho, f.J.phi, f.D.r, f.D.theta, f.D_numeric.r, f.D_numeric.theta});
            const abflow::Vec3 J = md::to_cartesian(f.J, theta, 0.3);
            const abflow::Vec3 D = md::to_cartesian(f.D, theta, 0.3);
            worst_dot = std::max(worst_dot, std::abs(abflow::dot(J, D)));
            peak_d = std::max(peak_d, std::hypot(f.D.r, f.D.theta));
            diff_d = std::max(diff_d, std::hypot(f.D.r - f.D_numeric.r, f.D.theta - f.D_numeric.theta));
          }
        }
        if (peak_d > 0.0) worst_d = std::max(worst_d, diff_d / peak_d);
      }
    }
  }
  run.table("hydrogen", ht);

  Table st;
  st.columns = {"model", "mass", "energy"};
  json slopes;
  for (auto kind : {md::ModelKind::linear_airy, md::ModelKind::half_harmonic, md::ModelKind::box}) {
    md::ScalingModel model;
    model.kind = kind;
    model.hbar = c.hbar;
    for (double m : cfg.models.masses) st.rows.push_back({md::to_string(kind), m, model.energy(m)});
    slopes[md::to_string(kind)] = md::mass_scaling_fit(model, cfg.models.masses);
  }
  run.table("scaling", st);

  Table la;
  la.columns = {"n", "x", "density"};
  json airy_norms = json::array();
  for (int n = 1; n <= 3; ++n) {
    const md::LinearAiryModel model = md::linear_airy_model(1.0, c.mass, n, c.hbar);
    const double upper = (12.0 - model.z_n) / model.scale;
    for (int i = 0; i < points; ++i) {
      const double x = upper * i / (points - 1);
      la.rows.push_back({static_cast<long long>(n), x, model.density(x)});
    }
    abflow::numerics::QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    airy_norms.push_back({{"n", n},
                          {"z_n", model.z_n},
                          {"energy", model.energy},
                          {"norm", abflow::numerics::integrate_1d([&](double x) { return model.density(x); }, 0.0,
                                                                  upper, spec)}});
  }
  run.table("linear_airy", la);

  run.manifest["results"] = {{"hydrogen", {{"norms", norms},
                                           {"max_abs_J_dot_D", worst_dot},
                                           {"max_relative_D_difference", worst_d}}},
                             {"scaling_slopes", slopes},
                             {"linear_airy", airy_norms}};
}

// ------------------------------------------------------------------- check

json check_json(const abflow::verify::CheckResult& r) {
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = finite_or_null(v);
  return {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"metrics", metrics}};
}

abflow::verify::SuiteOptions suite_options(const RunConfig& cfg, int threads) {
  abflow::verify::SuiteOptions opt;
  opt.base = cfg.annulus;
  opt.m = cfg.m;
  opt.n = cfg.n;
  opt.seed = cfg.sde.seed;
  opt.threads = threads;
  opt.sde = cfg.sde;
  return opt;
}

bool check(Run& run, std::string& summary) {
  const auto first = abflow::verify::run_suite(suite_options(run.cfg, run.threads));
  // Same inputs on a single worker; the serialized results must not change.
  const auto second = abflow::verify::run_suite(suite_options(run.cfg, 1));
  json a = json::array();
  json b = json::array();
  for (const auto& r : first) a.push_back(check_json(r));
  for (const auto& r : second) b.push_back(check_json(r));
  const auto determinism = abflow::verify::check_determinism(a.dump(), b.dump());

  std::vector<abflow::verify::CheckResult> all = first;
  all.push_back(determinism);
  json checks = json::array();
  Table t;
  t.columns = {"id", "name", "passed", "detail"};
  bool ok = true;
  std::ostringstream os;
  for (const auto& r : all) {
    checks.push_back(check_json(r));
    t.rows.push_back({static_cast<long long>(r.id), r.name, static_cast<long long>(r.passed ? 1 : 0), r.detail});
    run.timing["checks"][r.name] = r.seconds;
    ok = ok && r.passed;
    os << (r.passed ? "PASS" : "FAIL") << " " << r.id << " " << r.name << ": " << r.detail << "\n";
  }
  run.table("checks", t);
  run.manifest["checks"] = checks;
  run.manifest["results"] = {{"passed", std::count_if(all.begin(), all.end(), [](const auto& r) { return r.passed; })},
                             {"total", all.size()}};
  summary = os.str();
  return ok;
}

void finish(Run& run, const std::string& status, const std::string& message, double seconds) {
  run.manifest["status"] = status;
  if (!message.empty()) run.manifest["message"] = message;
  run.text("config.json", run.cfg.echo().dump(2) + "\n");
  std::sort(run.outputs.begin(), run.outputs.end());
  run.outputs.push_back("manifest.json");
  run.manifest["outputs"] = run.outputs;
  write_text(run.dir / "manifest.json", run.manifest.dump(2) + "\n");
  run.timing["wall_seconds"] = seconds;
  run.timing["threads"] = run.threads;
  write_text(run.dir / "timing.json", run.timing.dump(2) + "\n");
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "fields", "trajectories", "packets", "models", "check"};
  return names;
}

int default_threads() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ABTOOL_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<long>(n, cap);
  }
  return n;
}

CommandResult run_command(const std::string& command, RunConfig config, bool svg, int threads) {
  CommandResult result;
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    result.exit_code = kExitConfig;
    result.message = "unknown subcommand '" + command + "'";
    return result;
  }
  try {
    config.validate();
  } catch (const ConfigError& e) {
    result.exit_code = kExitConfig;
    result.message = e.what();
    return result;
  }

  const auto start = std::chrono::steady_clock::now();
  Run run;
  run.command = command;
  run.cfg = std::move(config);
  run.dir = run.cfg.path;
  run.svg = svg;
  run.threads = threads > 0 ? threads : default_threads();
  result.out_dir = run.dir;
  result.manifest = run.dir / "manifest.json";

  run.manifest["artifact"] = {{"name", "abtool"}, {"version", abflow::kVersion}};
  run.manifest["command"] = command;
  run.manifest["config"] = run.cfg.echo();
  run.manifest["seed"] = run.cfg.sde.seed;

  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  try {
    fs::create_directories(run.dir);
  } catch (const std::exception& e) {
    result.exit_code = kExitConfig;
    result.message = std::string("cannot create output directory: ") + e.what();
    return result;
  }

  try {
    run.manifest["derived"] = derived_block(run.cfg);
    std::string status = "ok";
    if (command == "spectrum") {
      spectrum(run);
    } else if (command == "fields") {
      fields(run);
    } else if (command == "trajectories") {
      trajectories(run);
    } else if (command == "packets") {
      packets(run);
    } else if (command == "models") {
      models(run);
    } else {
      std::string summary;
      if (!check(run, summary)) {
        status = "check_failed";
        result.exit_code = kExitCheckFailed;
      }
      result.message = summary;
    }
    finish(run, status, "", elapsed());
  } catch (const abflow::ConvergenceError& e) {
    result.exit_code = kExitNumerics;
    result.message = std::string("numerical failure: ") + e.what();
  } catch (const abflow::DensityFloorError& e) {
    result.exit_code = kExitNumerics;
    result.message = std::string("numerical failure: ") + e.what();
  } catch (const abflow::InsufficientSamplesError& e) {
    result.exit_code = kExitNumerics;
    result.message = std::string("numerical failure: ") + e.what();
  } catch (const abflow::DomainError& e) {
    result.exit_code = kExitNumerics;
    result.message = std::string("numerical failure: ") + e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitNumerics;
    result.message = std::string("failure: ") + e.what();
  }
  if (result.exit_code == kExitNumerics) {
    try {
      finish(run, "numerics_failure", result.message, elapsed());
    } catch (const std::exception&) {
      // The original failure is what gets reported.
    }
  }
  return result;
}

CommandResult run_command(const CommandOptions& options) {
  RunConfig cfg;
  try {
    cfg = load_config(options.config_path);
    if (options.out_dir) cfg.path = *options.out_dir;
    if (options.seed) cfg.sde.seed = *options.seed;
    if (options.format) cfg.format = *options.format;
  } catch (const ConfigError& e) {
    CommandResult r;
    r.exit_code = kExitConfig;
    r.message = e.what();
    return r;
  }
  return run_command(options.command, std::move(cfg), options.svg, options.threads);
}

}  // namespace abtool
