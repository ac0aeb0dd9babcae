#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "barotherm/channel.hpp"
#include "barotherm/errors.hpp"
#include "barotherm/fokker_planck.hpp"
#include "barotherm/microcanonical.hpp"
#include "barotherm/moments.hpp"
#include "barotherm/transport.hpp"
#include "format.hpp"
#include "run_config.hpp"
#include "svg_plot.hpp"
#include "verify.hpp"

namespace barotherm::cli {

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path + "'");
  f << content;
  if (!f.flush()) throw DomainError("failed writing '" + path + "'");
}

double theta_of(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta must be positive and finite");
  return theta;
}

// ---- coeffs ---------------------------------------------------------------

struct CoeffsArgs {
  std::optional<double> qs;
  std::optional<int> n_particles;
  double tau_q = 1.0;
  double pressure = 1.0;
};

int cmd_coeffs(const CoeffsArgs& a, std::ostream& out) {
  if (!(a.tau_q > 0.0) || !(a.pressure > 0.0)) throw DomainError("tau-q and pressure must be positive");
  const auto w = a.qs ? make_qgaussian(*a.qs, 1.0) : make_microcanonical(*a.n_particles, 1.0);
  const auto tc = coefficients_from_xi2(xi2_closed_form(w).xi2, a.tau_q, a.pressure);
  const auto cell = [&out](const std::string& s) { out << std::left << std::setw(20) << s; };
  cell("xi2"), cell("A"), cell("B"), out << "kappa\n";
  cell(significant(tc.xi2, 12)), cell(significant(tc.A, 12)), cell(significant(tc.B, 12));
  out << significant(tc.kappa, 12) << '\n';
  return kExitOk;
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  std::optional<int> steps;
  std::string out;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (!std::isfinite(a.from) || !std::isfinite(a.to)) throw DomainError("--from/--to must be finite");
  const bool by_n = a.param == "n";
  if (by_n && (a.from != std::floor(a.from) || a.to != std::floor(a.to))) {
    throw DomainError("--param n needs integer --from/--to");
  }
  const int span = by_n ? static_cast<int>(std::abs(a.to - a.from)) + 1 : 0;
  const int steps = a.steps.value_or(by_n ? span : 11);
  if (steps < 1) throw DomainError("--steps must be at least 1");
  if (by_n && steps > span) throw DomainError("--steps exceeds the number of integers in range");

  std::string csv = "param,xi2,A,B\n";
  int omitted = 0;
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    double param = a.from + t * (a.to - a.from);
    if (i == steps - 1 && steps > 1) param = a.to;
    std::optional<ReferenceWeight> w;
    if (by_n) {
      param = std::round(param);
      w = make_microcanonical(static_cast<int>(param), 1.0);
    } else if (param >= kQsFourthMomentBound) {
      ++omitted;
      continue;
    } else {
      w = make_qgaussian(param, 1.0);
    }
    const auto tc = coefficients_from_xi2(xi2_closed_form(*w).xi2);
    csv += shortest(param) + ',' + shortest(tc.xi2) + ',' + shortest(tc.A) + ',' + shortest(tc.B) + '\n';
  }
  write_file(a.out, csv);
  if (omitted > 0) {
    err << "warning: omitted " << omitted << " rows with qs >= 9/7 (fourth moment diverges)\n";
  }
  out << "wrote " << steps - omitted << " rows to " << a.out << '\n';
  return kExitOk;
}

// ---- mc-shell -------------------------------------------------------------

struct McShellArgs {
  int n_particles = 0;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  double theta = 1.0;
  std::string out;
};

int cmd_mc_shell(const McShellArgs& a, std::ostream& out) {
  if (a.samples < 1000) {
    throw InsufficientDataError("--samples must be at least 1000, got " + std::to_string(a.samples));
  }
  const ShellSampler sampler(a.n_particles, theta_of(a.theta), a.seed);
  const auto samples = sample_one_particle(sampler, a.samples);
  const auto rep = empirical_xi2(samples, a.theta);
  const double analytic = 15.0 * a.n_particles / (3.0 * a.n_particles + 2.0);
  const double z = (rep.xi2 - analytic) / rep.std_error;
  out << "n_particles=" << a.n_particles << " samples=" << a.samples << " seed=" << a.seed
      << " xi2=" << shortest(rep.xi2) << " std_error=" << shortest(rep.std_error)
      << " analytic=" << shortest(analytic) << " z=" << shortest(z) << '\n';
  if (!a.out.empty()) {
    const auto per_block = block_xi2(block_moments(samples, kJackknifeBlocks), a.theta);
    std::string csv = "block,xi2\n";
    for (std::size_t b = 0; b < per_block.size(); ++b) {
      csv += std::to_string(b) + ',' + shortest(per_block[b]) + '\n';
    }
    write_file(a.out, csv);
  }
  return kExitOk;
}

// ---- fp-steady ------------------------------------------------------------

struct FpArgs {
  std::string config;
  std::optional<double> qs, theta, gamma, diffusion, c_max, dt, steady_tol;
  std::optional<int> grid_points;
  std::optional<long> max_steps;
  std::optional<std::string> initial;
  std::string out;
};

InitialProfile parse_initial(const std::string& s) {
  if (s == "auto") return InitialProfile::Automatic;
  if (s == "uniform") return InitialProfile::UniformBall;
  if (s == "cauchy") return InitialProfile::CauchyBump;
  throw DomainError("initial must be one of auto, uniform, cauchy; got '" + s + "'");
}

int cmd_fp_steady(FpArgs a, std::ostream& out) {
  if (!a.config.empty()) {
    const auto cfg = RunConfig::load(a.config, {"qs", "theta", "gamma", "diffusion", "grid_points", "c_max",
                                                "dt", "steady_tol", "max_steps", "initial"});
    const auto fill = [](auto& dst, const auto& src) {
      if (!dst && src) dst = *src;
    };
    fill(a.qs, cfg.number("qs"));
    fill(a.theta, cfg.number("theta"));
    fill(a.gamma, cfg.number("gamma"));
    fill(a.diffusion, cfg.number("diffusion"));
    fill(a.c_max, cfg.number("c_max"));
    fill(a.dt, cfg.number("dt"));
    fill(a.steady_tol, cfg.number("steady_tol"));
    if (!a.grid_points && cfg.integer("grid_points")) a.grid_points = static_cast<int>(*cfg.integer("grid_points"));
    fill(a.max_steps, cfg.integer("max_steps"));
    fill(a.initial, cfg.text("initial"));
  }
  if (!a.qs) throw DomainError("qs is required (flag --qs or config key qs)");
  const double qs = *a.qs;
  const double theta = theta_of(a.theta.value_or(1.0));
  const double gamma = a.gamma.value_or(1.0);
  if (!(qs < kQsFourthMomentBound)) throw MomentDivergenceError(4, "fourth moment diverges for qs >= 9/7");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive and finite");
  if (a.grid_points && *a.grid_points < 64) throw DomainError("grid_points must be at least 64");
  const auto initial = parse_initial(a.initial.value_or("auto"));

  auto cfg = make_fp_config(qs, theta, gamma, a.grid_points.value_or(0));
  if (a.diffusion) cfg.diffusion = *a.diffusion;
  if (a.c_max) cfg.c_max = *a.c_max;
  if (a.dt) cfg.dt = *a.dt;
  if (a.steady_tol) cfg.steady_tol = *a.steady_tol;
  if (a.max_steps) cfg.max_steps = *a.max_steps;
  cfg.validate();

  const auto sol = relax_to_stationarity(cfg, initial);
  const double target = xi2_closed_form(make_qgaussian(qs, 1.0)).xi2;
  out << "qs=" << shortest(qs) << " diffusion=" << shortest(cfg.diffusion)
      << " grid_points=" << cfg.grid_points << " c_max=" << shortest(cfg.c_max) << '\n'
      << "steps=" << sol.steps_taken << " time=" << shortest(sol.time)
      << " residual=" << shortest(sol.residual) << " mass_drift=" << shortest(sol.mass_drift) << '\n'
      << "measured_theta=" << shortest(sol.measured_theta) << '\n'
      << "measured_xi2=" << shortest(sol.measured_xi2) << " target_xi2=" << shortest(target)
      << " rel_error=" << shortest(std::abs(sol.measured_xi2 - target) / target) << '\n';
  if (!a.out.empty()) {
    std::string csv = "c,f\n";
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
      csv += shortest(sol.grid[i]) + ',' + shortest(sol.density[i]) + '\n';
    }
    write_file(a.out, csv);
  }
  return kExitOk;
}

// ---- channel --------------------------------------------------------------

struct ChannelArgs {
  std::string config;
  std::string plot;
};

ChannelScenario load_scenario(const std::string& path) {
  const auto cfg = RunConfig::load(path, {"rho", "theta", "mu", "l_h", "g_factor", "grad_p", "tau_q", "h",
                                          "xi2", "qs", "n_particles"});
  const int sources = cfg.has("xi2") + cfg.has("qs") + cfg.has("n_particles");
  if (sources != 1) throw DomainError("scenario needs exactly one of xi2, qs, n_particles");

  ChannelScenario s;
  s.gas = GasState(cfg.number("rho").value_or(1.0), cfg.number("theta").value_or(1.0));
  const double tau_q = cfg.number("tau_q").value_or(1.0);
  if (!(tau_q > 0.0) || !std::isfinite(tau_q)) throw DomainError("tau_q must be positive and finite");
  double xi2 = 0.0;
  if (const auto v = cfg.number("xi2")) {
    if (!(*v > 0.0) || !std::isfinite(*v)) throw DomainError("xi2 must be positive and finite");
    xi2 = *v;
  } else if (const auto q = cfg.number("qs")) {
    xi2 = xi2_closed_form(make_qgaussian(*q, 1.0)).xi2;
  } else {
    const long n = *cfg.integer("n_particles");
    if (n < 2 || n > 1'000'000'000) throw DomainError("n_particles must be at least 2");
    xi2 = xi2_closed_form(make_microcanonical(static_cast<int>(n), 1.0)).xi2;
  }
  s.tc = coefficients_from_xi2(xi2, tau_q, s.gas.p());
  s.mu = cfg.number("mu").value_or(1.0);
  s.l_h = cfg.number("l_h").value_or(1.0);
  s.g_factor = cfg.number("g_factor").value_or(1.0);
  s.grad_p = cfg.vector3("grad_p").value_or(Vec3{1.0, 0.0, 0.0});
  s.h = cfg.number("h");
  s.validate();
  if (is_zero(s.grad_p)) throw UndefinedRatioError("grad_p is zero: observability ratio undefined");
  return s;
}

int cmd_channel(const ChannelArgs& a, std::ostream& out) {
  const auto s = load_scenario(a.config);
  const auto r = observability(s);
  out << "A=" << shortest(s.tc.A) << " B=" << shortest(s.tc.B) << '\n'
      << "q=" << vec_text(r.flux.q) << '\n'
      << "J_M=" << vec_text(r.flux.j_m) << '\n'
      << "h=" << shortest(r.flux.h) << '\n'
      << "J_E=" << vec_text(r.flux.j_e) << '\n'
      << "c_exact=" << shortest(r.c_exact) << '\n'
      << "c_scaling=" << shortest(r.c_scaling) << '\n'
      << "Pr=" << shortest(r.prandtl) << '\n';
  if (!a.plot.empty()) {
    constexpr int kPoints = 61;
    Series exact{"c_exact", {}, {}, ""}, scaling{"c_scaling", {}, {}, "6 4"};
    auto probe = s;
    for (int i = 0; i < kPoints; ++i) {
      probe.l_h = s.l_h * std::pow(10.0, -2.0 + 4.0 * i / (kPoints - 1));
      const auto ri = observability(probe);
      exact.x.push_back(probe.l_h);
      exact.y.push_back(ri.c_exact);
      scaling.x.push_back(probe.l_h);
      scaling.y.push_back(ri.c_scaling);
    }
    PlotSpec spec{"Barothermal observability vs hydraulic length", "L_h", "C", true, true};
    write_file(a.plot, render_svg(spec, {exact, scaling}));
  }
  return kExitOk;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  bool json = false;
  double perturb_xi2 = 0.0;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (!std::isfinite(a.perturb_xi2)) throw DomainError("--perturb-xi2 must be finite");
  const auto results = run_oracle_battery(a.perturb_xi2);
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  if (a.json) {
    nlohmann::json doc;
    doc["passed"] = all;
    doc["perturb_xi2"] = a.perturb_xi2;
    doc["checks"] = nlohmann::json::array();
    for (const auto& r : results) {
      doc["checks"].push_back({{"name", r.name},
                               {"passed", r.passed},
                               {"value", std::isfinite(r.value) ? nlohmann::json(r.value) : nlohmann::json()},
                               {"tolerance", r.tolerance},
                               {"detail", r.detail}});
    }
    out << doc.dump(2) << '\n';
  } else {
    out << std::left << std::setw(36) << "check" << std::setw(14) << "value" << std::setw(14)
        << "tolerance" << std::setw(8) << "result" << "detail\n";
    for (const auto& r : results) {
      out << std::setw(36) << r.name << std::setw(14) << significant(r.value, 4) << std::setw(14)
          << significant(r.tolerance, 4) << std::setw(8) << (r.passed ? "PASS" : "FAIL") << r.detail << '\n';
    }
  }
  if (!all) {
    err << "failing checks:";
    for (const auto& r : results) {
      if (!r.passed) err << ' ' << r.name << ';';
    }
    err << '\n';
    return kExitVerificationFailed;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized 13-moment barothermal transport toolkit", "barotherm"};
  app.require_subcommand(1);

  CoeffsArgs coeffs;
  auto* c_cmd = app.add_subcommand("coeffs", "Transport coefficients xi2, A, B, kappa");
  auto* c_qs = c_cmd->add_option("--qs", coeffs.qs, "Entropic index of the q-Gaussian weight");
  auto* c_n = c_cmd->add_option("--n-particles", coeffs.n_particles, "Particles on the energy shell");
  c_qs->excludes(c_n);
  c_cmd->add_option("--tau-q", coeffs.tau_q, "Heat-flux relaxation time")->capture_default_str();
  c_cmd->add_option("--pressure", coeffs.pressure, "Pressure")->capture_default_str();

  SweepArgs sweep;
  auto* s_cmd = app.add_subcommand("sweep", "Closed-form coefficient sweep to CSV");
  s_cmd->add_option("--param", sweep.param, "Swept parameter")->required()->check(CLI::IsMember({"qs", "n"}));
  s_cmd->add_option("--from", sweep.from, "First value")->required();
  s_cmd->add_option("--to", sweep.to, "Last value")->required();
  s_cmd->add_option("--steps", sweep.steps, "Number of rows (default 11 for qs, every integer for n)");
  s_cmd->add_option("--out", sweep.out, "Output CSV path")->required();

  McShellArgs mc;
  auto* m_cmd = app.add_subcommand("mc-shell", "Monte Carlo xi2 of the N-particle energy shell");
  m_cmd->add_option("--n-particles", mc.n_particles, "Particles on the shell")->required();
  m_cmd->add_option("--samples", mc.samples, "Sample count")->capture_default_str();
  m_cmd->add_option("--seed", mc.seed, "RNG seed")->capture_default_str();
  m_cmd->add_option("--theta", mc.theta, "Temperature")->capture_default_str();
  m_cmd->add_option("--out", mc.out, "Per-block CSV path");

  FpArgs fp;
  auto* f_cmd = app.add_subcommand("fp-steady", "Relax the nonlinear Fokker-Planck model to stationarity");
  f_cmd->add_option("--config", fp.config, "key = value configuration file");
  f_cmd->add_option("--qs", fp.qs, "Entropic index of the target state");
  f_cmd->add_option("--theta", fp.theta, "Target temperature (default 1)");
  f_cmd->add_option("--gamma", fp.gamma, "Friction rate (default 1)");
  f_cmd->add_option("--diffusion", fp.diffusion, "Diffusion coefficient (default: calibrated to theta)");
  f_cmd->add_option("--grid-points", fp.grid_points, "Radial cells");
  f_cmd->add_option("--c-max", fp.c_max, "Grid extent");
  f_cmd->add_option("--dt", fp.dt, "Step cap");
  f_cmd->add_option("--steady-tol", fp.steady_tol, "Stationarity threshold on max |df/dt|");
  f_cmd->add_option("--max-steps", fp.max_steps, "Step budget");
  f_cmd->add_option("--initial", fp.initial, "Initial profile: auto, uniform or cauchy");
  f_cmd->add_option("--out", fp.out, "Profile CSV path");

  ChannelArgs ch;
  auto* h_cmd = app.add_subcommand("channel", "Observability report for a pressure-driven channel");
  h_cmd->add_option("--config", ch.config, "Scenario file")->required();
  h_cmd->add_option("--plot", ch.plot, "SVG output of C vs L_h");

  VerifyArgs vf;
  auto* v_cmd = app.add_subcommand("verify", "Run the oracle battery");
  v_cmd->add_flag("--json", vf.json, "Machine-readable output");
  v_cmd->add_option("--perturb-xi2", vf.perturb_xi2, "Fault injection: relative shift of closed-form xi2");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomainError;
  }

  try {
    if (c_cmd->parsed()) {
      if (!coeffs.qs && !coeffs.n_particles) throw DomainError("exactly one of --qs or --n-particles is required");
      return cmd_coeffs(coeffs, out);
    }
    if (s_cmd->parsed()) return cmd_sweep(sweep, out, err);
    if (m_cmd->parsed()) return cmd_mc_shell(mc, out);
    if (f_cmd->parsed()) return cmd_fp_steady(fp, out);
    if (h_cmd->parsed()) return cmd_channel(ch, out);
    if (v_cmd->parsed()) return cmd_verify(vf, out, err);
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const StepSizeError& e) {
    err << "error: " << e.what() << " (suggested dt " << shortest(e.suggested_dt()) << ")\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitDomainError;
}

}  // namespace barotherm::cli
