#include "abflow/verification.hpp"

#include "abflow/ab_annulus.hpp"
#include "abflow/errors.hpp"
#include "abflow/numerics/differentiate.hpp"
#include "abflow/numerics/random.hpp"
#include "abflow/numerics/special_functions.hpp"
#include "abflow/reference_models.hpp"
#include "abflow/wavepackets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace abflow::verify {

namespace {

constexpr double kLambdaGrid[] = {0.0, -0.5, 0.25};
constexpr int kMMin = -2;
constexpr int kMMax = 2;
constexpr int kNMax = 2;

// Stream ids for the suite's own random draws; SDE trajectories use indices.
constexpr std::uint64_t kOrthogonalityStream = 0x0A11;
constexpr std::uint64_t kHydrogenStream = 0x0A12;
constexpr std::uint64_t kMagneticStream = 0x0A15;
constexpr std::uint64_t kGaugeStream = 0x0A1B;

std::string state_label(int m, int n, double lambda) {
  std::ostringstream os;
  os << "(m=" << m << ",n=" << n << ",lambda=" << lambda << ")";
  return os.str();
}

Vec2 random_annulus_point(numerics::RandomStream& rng, const AnnulusConfig& cfg) {
  // Uniform in area.
  const double u = rng.uniform();
  const double r = std::sqrt(cfg.a * cfg.a + u * (cfg.b * cfg.b - cfg.a * cfg.a));
  return from_polar(r, kTwoPi * rng.uniform());
}

template <class F>
CheckResult timed(int id, std::string name, F&& body) {
  CheckResult res;
  res.id = id;
  res.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(res);
  } catch (const std::exception& e) {
    res.passed = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace

AnnulusConfig with_lambda(AnnulusConfig cfg, double lambda) {
  const auto& c = cfg.constants;
  cfg.B = -2.0 * lambda * c.hbar * c.light_speed / (c.charge * cfg.a * cfg.a);
  return cfg;
}

CheckResult check_angular_momentum(const SuiteOptions& opt) {
  return timed(1, "angular_momentum_theorem", [&](CheckResult& res) {
    const double hbar = opt.base.constants.hbar;
    numerics::QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    double worst_total = 0.0;
    double worst_osmotic = 0.0;
    std::string worst_state;
    for (double lambda : kLambdaGrid) {
      const AnnulusConfig cfg = with_lambda(opt.base, lambda);
      for (int m = kMMin; m <= kMMax; ++m) {
        for (int n = 1; n <= kNMax; ++n) {
          const annulus::ABState s = annulus::eigenstate(cfg, m, n);
          const annulus::AngularMomenta L = annulus::angular_momenta(s, cfg, spec);
          const double et = std::abs(L.total - hbar * (m + s.lambda)) / hbar;
          const double eo = std::abs(L.osmotic - hbar * s.lambda) / hbar;
          if (std::max(et, eo) > std::max(worst_total, worst_osmotic)) worst_state = state_label(m, n, lambda);
          worst_total = std::max(worst_total, et);
          worst_osmotic = std::max(worst_osmotic, eo);
        }
      }
    }
    res.metric("max_total_error_over_hbar", worst_total);
    res.metric("max_osmotic_error_over_hbar", worst_osmotic);
    res.passed = worst_total <= 1e-8 && worst_osmotic <= 1e-8;
    res.detail = "30 states; worst at " + worst_state;
  });
}

CheckResult check_orthogonality(const SuiteOptions& opt) {
  return timed(2, "orthogonality", [&](CheckResult& res) {
    double worst_annulus = 0.0;
    numerics::RandomStream rng(opt.seed, kOrthogonalityStream);
    for (double lambda : kLambdaGrid) {
      const AnnulusConfig cfg = with_lambda(opt.base, lambda);
      const VectorPotentialSpec A = annulus::vector_potential_spec(cfg);
      for (int m = kMMin; m <= kMMax; ++m) {
        for (int n = 1; n <= kNMax; ++n) {
          const WaveField psi = annulus::eigenstate(cfg, m, n).wavefield();
          for (int i = 0; i < 10'000; ++i) {
            const Vec2 p = random_annulus_point(rng, cfg);
            const QuasiCurrents q = quasi_currents(psi, A, cfg.constants, p);
            worst_annulus = std::max(worst_annulus, std::abs(dot(q.gamma, q.delta)));
          }
        }
      }
    }

    double worst_hydrogen = 0.0;
    int hydrogen_states = 0;
    numerics::RandomStream hrng(opt.seed, kHydrogenStream);
    for (int n = 1; n <= 3; ++n) {
      for (int l = 0; l < n; ++l) {
        for (int ml = -l; ml <= l; ++ml) {
          models::HydrogenState s;
          s.n = n;
          s.l = l;
          s.m_l = ml;
          s.mass = opt.base.constants.mass;
          s.hbar = opt.base.constants.hbar;
          ++hydrogen_states;
          for (int i = 0; i < 1000; ++i) {
            const double r = s.a0 * (0.05 + 20.0 * hrng.uniform());
            const double theta = kPi * (0.01 + 0.98 * hrng.uniform());
            const double phi = kTwoPi * hrng.uniform();
            const models::HydrogenFields f = models::hydrogen_fields(s, r, theta);
            const Vec3 J = models::to_cartesian(f.J, theta, phi);
            const Vec3 D = models::to_cartesian(f.D, theta, phi);
            worst_hydrogen = std::max(worst_hydrogen, std::abs(dot(J, D)));
          }
        }
      }
    }
    res.metric("max_abs_gamma_dot_delta", worst_annulus);
    res.metric("max_abs_J_dot_D", worst_hydrogen);
    res.passed = worst_annulus <= 1e-12 && worst_hydrogen <= 1e-12;
    res.detail = "30 annulus states x 1e4 points; " + std::to_string(hydrogen_states) + " hydrogen states x 1e3 points";
  });
}

CheckResult check_circulation(const SuiteOptions& opt) {
  return timed(3, "circulation_vorticity", [&](CheckResult& res) {
    const AnnulusConfig cfg = with_lambda(opt.base, -0.5);
    const auto& c = cfg.constants;
    const double lambda = annulus::flux_parameter(cfg);
    const double expected = kTwoPi * lambda * c.hbar / c.mass;
    auto field = [&](const Vec2& p) { return annulus::diffusion_velocity(cfg, p); };

    double worst_enclosing = 0.0;
    for (double radius : {1.5, 2.0, 2.5}) {
      const double g = annulus::circulation(field, {{0.0, 0.0}, radius * cfg.a});
      worst_enclosing = std::max(worst_enclosing, std::abs(g - expected));
    }
    const double outside_loop = std::abs(annulus::circulation(field, {{2.0 * cfg.a, 0.0}, 0.5 * cfg.a}));

    const double h = 1e-4 * cfg.a;
    const double omega_in = -c.coupling() * cfg.B;
    double worst_curl_out = 0.0;
    double worst_curl_in = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double phi = (j + 0.5) * kTwoPi / 8.0;
      for (double r : {1.5, 2.0, 2.5}) {
        worst_curl_out = std::max(worst_curl_out, std::abs(numerics::curl_z(field, from_polar(r * cfg.a, phi), h)));
      }
      for (double r : {0.3, 0.5, 0.7}) {
        worst_curl_in =
            std::max(worst_curl_in, std::abs(numerics::curl_z(field, from_polar(r * cfg.a, phi), h) - omega_in));
      }
    }
    res.metric("expected_circulation", expected);
    res.metric("max_enclosing_error", worst_enclosing);
    res.metric("non_enclosing_circulation", outside_loop);
    res.metric("max_curl_outside", worst_curl_out);
    res.metric("max_curl_inside_error", worst_curl_in);
    res.passed = worst_enclosing <= 1e-9 && outside_loop <= 1e-9 && worst_curl_out <= 1e-6 && worst_curl_in <= 1e-6;
    res.detail = "loops at r/a in {1.5, 2, 2.5}, off-axis loop at (2a, 0) radius a/2, curl at 24 points each side";
  });
}

CheckResult check_energy_identity(const SuiteOptions& opt) {
  return timed(4, "energy_identity", [&](CheckResult& res) {
    double worst = 0.0;
    int evaluated = 0;
    std::vector<std::string> failures;
    for (double lambda : kLambdaGrid) {
      const AnnulusConfig cfg = with_lambda(opt.base, lambda);
      for (int m = kMMin; m <= kMMax; ++m) {
        for (int n = 1; n <= kNMax; ++n) {
          const annulus::ABState s = annulus::eigenstate(cfg, m, n);
          try {
            const annulus::EnergyDecomposition e = annulus::energy_decomposition(s, cfg);
            worst = std::max(worst, e.residual);
            ++evaluated;
            if (!(e.residual <= 1e-6)) failures.push_back(state_label(m, n, lambda) + " residual");
          } catch (const ConvergenceError& err) {
            std::ostringstream os;
            os << state_label(m, n, lambda) << " nu=" << s.nu << " integral did not converge";
            failures.push_back(os.str());
          }
        }
      }
    }
    res.metric("max_relative_residual", worst);
    res.metric("states_evaluated", evaluated);
    res.metric("states_failed", static_cast<double>(failures.size()));
    res.passed = failures.empty() && worst <= 1e-6;
    std::ostringstream os;
    os << evaluated << " of 30 states converged";
    for (const auto& f : failures) os << "; " << f;
    res.detail = os.str();
  });
}

CheckResult check_magnetic_force(const SuiteOptions& opt) {
  return timed(5, "magnetic_force_equivalence", [&](CheckResult& res) {
    const AnnulusConfig cfg = with_lambda(opt.base, -0.5);
    numerics::RandomStream rng(opt.seed, kMagneticStream);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vec3 v{rng.normal(), rng.normal(), rng.normal()};
      const Vec2 p = from_polar(cfg.a * 0.9 * std::sqrt(rng.uniform()), kTwoPi * rng.uniform());
      const annulus::MagneticForce f = annulus::magnetic_force(cfg, v, p);
      worst = std::max(worst, norm(f.lorentz - f.vortex));
    }
    res.metric("max_abs_difference", worst);
    res.passed = worst <= 1e-12;
    res.detail = "100 random velocities at random points inside the solenoid";
  });
}

CheckResult check_gaussian_packet(const SuiteOptions& opt) {
  return timed(6, "gaussian_packet", [&](CheckResult& res) {
    packets::GaussianPacketConfig g;
    g.alpha = 1.0;
    g.k0 = 1.0;
    g.mass = opt.base.constants.mass;
    g.hbar = opt.base.constants.hbar;
    double continuity = 0.0;
    double phase = 0.0;
    double decomposition = 0.0;
    for (double t : {0.5 * g.T(), g.T(), 3.0 * g.T()}) {
      const double centre = g.u0() * t;
      const double half = 4.0 * g.epsilon(t);
      std::vector<double> grid(200);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = centre - half + 2.0 * half * static_cast<double>(i) / (grid.size() - 1);
      }
      const packets::GaussianConsistency c = packets::gaussian_consistency(g, grid, t, 1e-4);
      continuity = std::max(continuity, c.continuity_residual);
      phase = std::max(phase, c.phase_relation_residual);
      decomposition = std::max(decomposition, c.decomposition_residual);
    }
    res.metric("continuity_residual", continuity);
    res.metric("phase_relation_residual", phase);
    res.metric("decomposition_residual", decomposition);
    res.passed = continuity <= 1e-6 && phase <= 1e-10 && decomposition <= 1e-12;
    res.detail = "alpha=1, k0=1, 200 points over +-4 eps, t in {T/2, T, 3T}, h=1e-4";
  });
}

CheckResult check_airy_packet(const SuiteOptions& opt) {
  return timed(7, "airy_packet", [&](CheckResult& res) {
    packets::AiryPacketConfig cfg;
    cfg.k = 1.0;
    cfg.mass = opt.base.constants.mass;
    cfg.hbar = opt.base.constants.hbar;
    const WaveField psi = packets::airy_wavefield(cfg);
    double translation = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
      const double shift = cfg.k * t * t / (2.0 * cfg.mass);
      for (int i = 0; i <= 60; ++i) {
        const double x = cfg.x_lo + (cfg.x_hi - cfg.x_lo) * i / 60.0;
        const double moved = psi.density({x, 0.0}, t);
        const double original = psi.density({x - shift, 0.0}, 0.0);
        translation = std::max(translation, std::abs(moved - original));
      }
    }
    double force = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double x = -1.5 + 0.15 * i;
      const packets::AiryFields f = packets::airy_fields(cfg, x, 0.0);
      force = std::max(force, std::abs(f.F_Q - cfg.k) / cfg.k);
    }
    res.metric("max_translation_residual", translation);
    res.metric("max_force_relative_error", force);
    res.passed = translation <= 1e-10 && force <= 1e-4;
    res.detail = "translation on 61 points x t in {0.5, 1, 2}; force at 20 points in [-1.5, 1.35]";
  });
}

CheckResult check_sampler(const SuiteOptions& opt) {
  return timed(8, "nelson_sampler", [&](CheckResult& res) {
    const AnnulusConfig& cfg = opt.base;
    const annulus::ABState s = annulus::eigenstate(cfg, opt.m, opt.n);
    const WaveField psi = s.wavefield();
    const annulus::RadialMode mode = s.radial;
    const nelson::RadialTarget target([mode](double r) { return mode.density(r); }, cfg.a, cfg.b);
    nelson::SdeConfig sde = opt.sde;
    sde.seed = opt.seed;
    const auto trajectories = nelson::simulate(psi, cfg, sde, target, opt.threads);
    std::size_t aborted = 0;
    for (const auto& t : trajectories) aborted += t.aborted ? 1 : 0;

    const auto& c = cfg.constants;
    // Chi-square samples are thinned to one per decorrelation time: (b - a)^2 / beta^2
    // radially, b^2 / beta^2 for the angle. KS uses every sample.
    const double recorded_dt = sde.dt * sde.record_stride;
    auto thinning = [&](double time) { return std::max(1, static_cast<int>(std::ceil(time / recorded_dt))); };
    const double width = cfg.b - cfg.a;
    const nelson::StationarityResult st =
        nelson::stationarity_test(trajectories, target, 40, thinning(width * width / c.diffusion()));
    const nelson::UniformityResult ang =
        nelson::angular_uniformity_test(trajectories, 12, thinning(cfg.b * cfg.b / c.diffusion()));
    const nelson::ErgodicEstimate lz =
        nelson::ergodic_angular_momentum(trajectories, psi, annulus::vector_potential_spec(cfg), c);
    const double expected = c.hbar * (s.m + s.lambda);
    const double lz_error = expected != 0.0 ? std::abs(lz.mean - expected) / std::abs(expected)
                                            : std::abs(lz.mean) / std::max(lz.standard_error, 1e-300);

    res.metric("samples", static_cast<double>(st.samples));
    res.metric("ks_distance", st.ks_distance);
    res.metric("radial_chi2", st.chi2);
    res.metric("radial_chi2_p_value", st.p_value);
    res.metric("angular_chi2", ang.chi2);
    res.metric("angular_p_value", ang.p_value);
    res.metric("angular_samples", static_cast<double>(ang.samples));
    res.metric("lz_mean", lz.mean);
    res.metric("lz_standard_error", lz.standard_error);
    res.metric("lz_expected", expected);
    res.metric("rejected_fraction", nelson::rejected_fraction(trajectories));
    res.metric("aborted_trajectories", static_cast<double>(aborted));
    const bool lz_ok = expected != 0.0 ? lz_error <= 0.02 : lz_error <= 4.0;
    res.passed = st.ks_distance <= 0.02 && ang.p_value > 0.01 && lz_ok;
    std::ostringstream os;
    os << sde.n_trajectories << " trajectories x " << sde.steps << " steps, dt=" << sde.dt << ", state "
       << state_label(s.m, s.n, s.lambda);
    res.detail = os.str();
  });
}

CheckResult check_gauge_family(const SuiteOptions& opt) {
  return timed(9, "gauge_family", [&](CheckResult& res) {
    const AnnulusConfig cfg = with_lambda(opt.base, -0.5);
    const annulus::ABState s = annulus::eigenstate(cfg, 1, 1);
    const annulus::GaugeFamilyReport rep = annulus::gauge_family(s, cfg, {0.2, 0.1, 0.05});
    bool ok = rep.ratios.size() == 2;
    for (std::size_t i = 0; i < rep.members.size(); ++i) {
      res.metric("deviation_" + std::to_string(i), rep.members[i].deviation);
    }
    for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
      res.metric("ratio_" + std::to_string(i), rep.ratios[i]);
      ok = ok && rep.ratios[i] >= 3.0 && rep.ratios[i] <= 5.0;
    }
    res.passed = ok;
    res.detail = "nu=0.5, delta in {0.2, 0.1, 0.05}";
  });
}

CheckResult check_special_functions(const SuiteOptions& opt) {
  return timed(10, "special_function_oracles", [&](CheckResult& res) {
    double zero_error = 0.0;
    for (int n = 1; n <= 10; ++n) {
      zero_error = std::max(zero_error, std::abs(numerics::bessel_j_zero(0.5, n) - n * kPi));
    }

    const double hbar = opt.base.constants.hbar;
    const models::LinearAiryModel airy = models::linear_airy_model(1.0, opt.base.constants.mass, 1, hbar);
    numerics::QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    const double upper = (12.0 - airy.z_n) / airy.scale;
    const double mass = numerics::integrate_1d([&](double x) { return airy.density(x); }, 0.0, upper, spec);

    const std::vector<double> masses{1.0, 2.0, 4.0, 8.0};
    const std::pair<models::ModelKind, double> expected[] = {
        {models::ModelKind::linear_airy, -1.0 / 3.0},
        {models::ModelKind::half_harmonic, -0.5},
        {models::ModelKind::box, -1.0}};
    double slope_error = 0.0;
    for (const auto& [kind, slope] : expected) {
      models::ScalingModel model;
      model.kind = kind;
      model.hbar = hbar;
      const double fitted = models::mass_scaling_fit(model, masses);
      res.metric("slope_" + models::to_string(kind), fitted);
      slope_error = std::max(slope_error, std::abs(fitted - slope));
    }
    res.metric("max_zero_error", zero_error);
    res.metric("linear_airy_norm", mass);
    res.metric("max_slope_error", slope_error);
    res.passed = zero_error <= 1e-10 && std::abs(mass - 1.0) <= 0.02 && slope_error <= 1e-10;
    res.detail = "tau_{1/2,n} for n <= 10; n=1 linear-potential density; masses {1, 2, 4, 8}";
  });
}

CheckResult check_gauge_invariance(const SuiteOptions& opt) {
  return timed(11, "gauge_invariance", [&](CheckResult& res) {
    const AnnulusConfig field_free = with_lambda(opt.base, 0.0);
    const AnnulusConfig cfg = with_lambda(opt.base, -0.5);
    const auto& c = cfg.constants;
    const WaveField psi0 = annulus::eigenstate(field_free, 1, 1).wavefield();
    const VectorPotentialSpec A = annulus::vector_potential_spec(cfg);
    // Outside the solenoid A = grad(Phi theta / 2 pi).
    const double flux = cfg.flux();
    const GaugeFunction lambda_fn = [flux](const Vec2& p) { return flux * std::atan2(p.y, p.x) / kTwoPi; };
    const GaugeGradient lambda_grad = [cfg](const Vec2& p) { return annulus::vector_potential(cfg, p); };
    const WaveField analytic = gauge_transform(psi0, lambda_fn, c, lambda_grad);
    const WaveField by_differences = gauge_transform(psi0, lambda_fn, c);

    numerics::RandomStream rng(opt.seed, kGaugeStream);
    bool density_exact = true;
    double xi_error = 0.0;
    double eq_error = 0.0;
    int used = 0;
    while (used < 1000) {
      const double u = rng.uniform();
      const double r = std::sqrt(cfg.a * cfg.a + u * (cfg.b * cfg.b - cfg.a * cfg.a));
      // Stay clear of the branch cut of atan2 so the finite-difference gradient of Lambda is smooth.
      const Vec2 p = from_polar(r, kPi * (1.8 * rng.uniform() - 0.9));
      if (!(psi0.density(p) > 1e-12)) continue;
      ++used;
      density_exact = density_exact && analytic.density(p) == psi0.density(p) &&
                      by_differences.density(p) == psi0.density(p);
      const VelocityDecomposition d0 = decompose(psi0, VectorPotentialSpec::none(), c, p);
      const VelocityDecomposition dfd = decompose(by_differences, A, c, p);
      const VelocityDecomposition dB = decompose(analytic, A, c, p);
      xi_error = std::max(xi_error, norm(dfd.xi_real - d0.xi_real));
      eq_error = std::max(eq_error, norm(dB.eta - (d0.eta + dB.xi_imag)));
    }

    // Solenoid current with and without gauge terms, inside and outside.
    const GaugeGradient smooth = [](const Vec2& p) {
      return Vec2{0.6 * p.x * p.y + std::cos(p.x), 0.3 * p.x * p.x - 0.4 * std::sin(p.y)};
    };
    double current_spread = 0.0;
    for (double rr : {0.4, 0.6, 1.6, 2.2}) {
      for (int j = 0; j < 6; ++j) {
        const Vec2 p = from_polar(rr * cfg.a, (j + 0.25) * kTwoPi / 6.0 - kPi);
        const Vec2 base = annulus::solenoid_current_check(cfg, {}, p);
        const Vec2 with_smooth = annulus::solenoid_current_check(cfg, smooth, p);
        current_spread = std::max(current_spread, norm(with_smooth - base));
        if (std::abs(p.y) > 0.1 || p.x > 0.0) {
          const Vec2 with_angle = annulus::solenoid_current_check(
              cfg, [flux](const Vec2& q) { return (flux / kTwoPi) * unit_theta(q) / norm(q); }, p);
          current_spread = std::max(current_spread, norm(with_angle - base));
        }
      }
    }
    res.metric("density_bitwise_equal", density_exact ? 1.0 : 0.0);
    res.metric("max_re_xi_error", xi_error);
    res.metric("max_eta_decomposition_error", eq_error);
    res.metric("max_solenoid_current_spread", current_spread);
    res.passed = density_exact && xi_error <= 1e-8 && eq_error <= 1e-10 && current_spread <= 1e-8;
    res.detail = "B=0 state m=1 n=1 shifted by Lambda = Phi theta / 2 pi at 1000 points";
  });
}

std::vector<CheckResult> run_suite(const SuiteOptions& opt) {
  std::vector<CheckResult> out;
  out.push_back(check_angular_momentum(opt));
  // Criterion 1 carries a runtime budget.
  if (out.back().seconds >= 10.0) {
    out.back().passed = false;
    out.back().detail += "; runtime budget of 10 s exceeded";
  }
  out.push_back(check_orthogonality(opt));
  out.push_back(check_circulation(opt));
  out.push_back(check_energy_identity(opt));
  out.push_back(check_magnetic_force(opt));
  out.push_back(check_gaussian_packet(opt));
  out.push_back(check_airy_packet(opt));
  out.push_back(check_sampler(opt));
  if (out.back().seconds >= 60.0) {
    out.back().passed = false;
    out.back().detail += "; runtime budget of 60 s exceeded";
  }
  out.push_back(check_gauge_family(opt));
  out.push_back(check_special_functions(opt));
  out.push_back(check_gauge_invariance(opt));
  return out;
}

CheckResult check_determinism(const std::string& first, const std::string& second) {
  CheckResult res;
  res.id = 12;
  res.name = "determinism";
  res.passed = !first.empty() && first == second;
  std::size_t diff = 0;
  while (diff < first.size() && diff < second.size() && first[diff] == second[diff]) ++diff;
  res.metric("bytes_first", static_cast<double>(first.size()));
  res.metric("bytes_second", static_cast<double>(second.size()));
  res.detail = res.passed ? "manifests are byte-identical" : "first difference at byte " + std::to_string(diff);
  return res;
}

}  // namespace abflow::verify
