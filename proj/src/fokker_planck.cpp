#include "barotherm/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "barotherm/errors.hpp"
#include "barotherm/moments.hpp"

namespace barotherm {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kStepSafety = 0.4;
constexpr double kTailMass = 1e-8;
constexpr int kHistoryStride = 200;

// Secant slope of g(f) = f^{2-q} between two neighbouring cells.
double mobility(double fl, double fr, double gl, double gr, double q) {
  if (q == 1.0) return 1.0;
  const double diff = fr - fl;
  const double sum = fl + fr;
  if (std::abs(diff) > 1e-10 * sum) return (gr - gl) / diff;
  if (sum == 0.0) return q < 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (2.0 - q) * std::pow(0.5 * sum, 1.0 - q);
}

double harmonic_mean(double a, double b) {
  const double s = a + b;
  return s > 0.0 ? 2.0 * a * b / s : 0.0;
}

std::vector<double> nonlinear_potential(const std::vector<double>& f, double q) {
  std::vector<double> g(f.size());
  if (q == 1.0) return f;
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = f[i] > 0.0 ? std::pow(f[i], 2.0 - q) : 0.0;
  return g;
}

void require_profile(const std::vector<double>& f, const FPConfig& cfg) {
  if (f.size() != static_cast<std::size_t>(cfg.grid_points)) {
    throw DomainError("profile has " + std::to_string(f.size()) + " cells, grid has " +
                      std::to_string(cfg.grid_points));
  }
}

// rhs and stable step share the face loop.
struct Evaluation {
  std::vector<double> rhs;
  double stable_dt = std::numeric_limits<double>::infinity();
};

Evaluation evaluate(const std::vector<double>& f, const FPConfig& cfg, bool want_dt) {
  const int n = cfg.grid_points;
  const double h = cfg.cell_width();
  const double q = cfg.qs;
  const auto g = nonlinear_potential(f, q);

  // face_flux[k] sits at c = k h; faces 0 and n carry no flux.
  std::vector<double> face_flux(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> face_diff(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k < n; ++k) {
    const auto L = static_cast<std::size_t>(k - 1);
    const auto R = static_cast<std::size_t>(k);
    const double c = k * h;
    const double phi = cfg.gamma * c * harmonic_mean(f[L], f[R]) + cfg.diffusion * (g[R] - g[L]) / h;
    face_flux[R] = c * c * phi;
    if (want_dt) {
      face_diff[R] = c * c * cfg.diffusion * mobility(f[L], f[R], g[L], g[R], q) / h;
    }
  }

  Evaluation out;
  out.rhs.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double lo = i * h;
    const double hi = (i + 1) * h;
    const double volume = (hi * hi * hi - lo * lo * lo) / 3.0;
    out.rhs[k] = (face_flux[k + 1] - face_flux[k]) / volume;
    if (want_dt) {
      const double drift_loss = i > 0 ? lo * lo * 2.0 * cfg.gamma * lo : 0.0;
      const double loss = (face_diff[k + 1] + face_diff[k] + drift_loss) / volume;
      if (loss > 0.0) out.stable_dt = std::min(out.stable_dt, 1.0 / loss);
    }
  }
  return out;
}

std::vector<double> advance(const std::vector<double>& f, const std::vector<double>& rhs,
                            double dt) {
  std::vector<double> next(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) next[i] = f[i] + dt * rhs[i];
  return next;
}

double cell_integral(double lo, double hi, int power) {
  const double p = power + 1.0;
  return (std::pow(hi, p) - std::pow(lo, p)) / p;
}

}  // namespace

void FPConfig::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string(name) + " must be positive and finite, got " +
                        std::to_string(v));
    }
  };
  if (!(qs < kQsFourthMomentBound) || !std::isfinite(qs)) {
    throw MomentDivergenceError(4, "fourth moment diverges for qs >= 9/7");
  }
  positive(gamma, "gamma");
  positive(diffusion, "diffusion");
  positive(c_max, "c_max");
  positive(dt, "dt");
  positive(steady_tol, "steady_tol");
  if (grid_points < 64) throw DomainError("grid_points must be at least 64");
  if (max_steps < 1) throw DomainError("max_steps must be positive");
}

std::vector<double> radial_grid(const FPConfig& cfg) {
  std::vector<double> c(static_cast<std::size_t>(cfg.grid_points));
  const double h = cfg.cell_width();
  for (int i = 0; i < cfg.grid_points; ++i) c[static_cast<std::size_t>(i)] = (i + 0.5) * h;
  return c;
}

std::vector<double> fp_rhs(const std::vector<double>& f, const FPConfig& cfg) {
  require_profile(f, cfg);
  return evaluate(f, cfg, false).rhs;
}

double stable_dt(const std::vector<double>& f, const FPConfig& cfg) {
  require_profile(f, cfg);
  return evaluate(f, cfg, true).stable_dt;
}

std::vector<double> step(const std::vector<double>& f, const FPConfig& cfg) {
  cfg.validate();
  require_profile(f, cfg);
  const auto ev = evaluate(f, cfg, true);
  if (cfg.dt > ev.stable_dt) {
    throw StepSizeError(kStepSafety * ev.stable_dt,
                        "time step " + std::to_string(cfg.dt) + " exceeds the stability bound " +
                            std::to_string(ev.stable_dt));
  }
  return advance(f, ev.rhs, cfg.dt);
}

double stationary_residual(const std::vector<double>& profile, const FPConfig& cfg) {
  const auto rhs = fp_rhs(profile, cfg);
  double r = 0.0;
  for (double v : rhs) r = std::max(r, std::abs(v));
  return r;
}

double discrete_mass(const std::vector<double>& f, const FPConfig& cfg) {
  require_profile(f, cfg);
  const double h = cfg.cell_width();
  double m = 0.0;
  for (int i = 0; i < cfg.grid_points; ++i) {
    m += f[static_cast<std::size_t>(i)] * cell_integral(i * h, (i + 1) * h, 2);
  }
  return kFourPi * m;
}

double discrete_moment(const std::vector<double>& f, const FPConfig& cfg, int order) {
  require_profile(f, cfg);
  const double h = cfg.cell_width();
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < cfg.grid_points; ++i) {
    const double fi = f[static_cast<std::size_t>(i)];
    num += fi * cell_integral(i * h, (i + 1) * h, 2 + order);
    den += fi * cell_integral(i * h, (i + 1) * h, 2);
  }
  return num / den;
}

std::vector<double> initial_profile(const FPConfig& cfg, InitialProfile initial) {
  if (initial == InitialProfile::Automatic) {
    initial = cfg.qs > 1.0 ? InitialProfile::CauchyBump : InitialProfile::UniformBall;
  }
  if (initial == InitialProfile::UniformBall && cfg.qs > 1.0) {
    throw DomainError("a uniform ball has empty cells, where q > 1 dynamics has unbounded mobility");
  }
  const auto c = radial_grid(cfg);
  std::vector<double> f(c.size());
  const double width = cfg.c_max / 3.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (initial == InitialProfile::UniformBall) {
      f[i] = c[i] <= width ? 1.0 : 0.0;
    } else {
      const double x = c[i] / width;
      f[i] = std::pow(1.0 + x * x, -3.0);
    }
  }
  const double mass = discrete_mass(f, cfg);
  for (double& v : f) v /= mass;
  return f;
}

std::vector<double> sample_profile(const ReferenceWeight& w, const FPConfig& cfg) {
  const auto c = radial_grid(cfg);
  std::vector<double> f(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) f[i] = w.pdf_speed2(c[i] * c[i]);
  return f;
}

FPSolution relax_to_stationarity(const FPConfig& cfg, InitialProfile initial) {
  cfg.validate();
  FPSolution sol;
  sol.grid = radial_grid(cfg);
  auto f = initial_profile(cfg, initial);
  const double mass0 = discrete_mass(f, cfg);
  sol.min_density = *std::min_element(f.begin(), f.end());

  for (;;) {
    const auto ev = evaluate(f, cfg, true);
    double residual = 0.0;
    for (double v : ev.rhs) residual = std::max(residual, std::abs(v));
    sol.residual = residual;
    if (sol.steps_taken % kHistoryStride == 0) {
      sol.second_moment_history.push_back(discrete_moment(f, cfg, 2));
    }
    if (residual < cfg.steady_tol) break;
    if (sol.steps_taken >= cfg.max_steps) {
      throw NonConvergenceError(residual, sol.steps_taken,
                                "no stationary state after " + std::to_string(sol.steps_taken) +
                                    " steps (residual " + std::to_string(residual) + ")");
    }
    const double dt = std::min(cfg.dt, kStepSafety * ev.stable_dt);
    f = advance(f, ev.rhs, dt);
    sol.time += dt;
    ++sol.steps_taken;
    sol.min_density = std::min(sol.min_density, *std::min_element(f.begin(), f.end()));
  }

  sol.mass_drift = std::abs(discrete_mass(f, cfg) - mass0);
  const double c2 = discrete_moment(f, cfg, 2);
  const double c4 = discrete_moment(f, cfg, 4);
  sol.measured_theta = c2 / 3.0;
  sol.measured_xi2 = c4 / (sol.measured_theta * c2);
  sol.density = std::move(f);
  return sol;
}

// ---------------------------------------------------------------------------
// Calibration

namespace {

// Root of an increasing function, bracketed by additive expansion from x0.
template <class F>
double solve_increasing(F fn, double x0) {
  double lo = x0 - 1.0, hi = x0 + 1.0;
  double flo = fn(lo), fhi = fn(hi);
  for (int i = 0; i < 200 && flo > 0.0; ++i) {
    hi = lo;
    fhi = flo;
    lo -= 2.0;
    flo = fn(lo);
  }
  for (int i = 0; i < 200 && fhi < 0.0; ++i) {
    lo = hi;
    flo = fhi;
    hi += 2.0;
    fhi = fn(hi);
  }
  if (flo > 0.0 || fhi < 0.0) throw DomainError("calibration root could not be bracketed");
  boost::math::tools::eps_tolerance<double> tol(48);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(fn, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (a + b);
}

// Stationary profile f^{1-q} = f0^{1-q} - gamma (1-q) c^2 / (2 D (2-q)),
// or f = f0 exp(-gamma c^2 / (2 D)) at q = 1.
struct StationaryFamily {
  double q;
  double gamma;
  double diffusion;

  double density(double f0, double c) const {
    const double slope = gamma * c * c / (2.0 * diffusion);
    if (std::abs(q - 1.0) < kMaxwellianWindow) return f0 * std::exp(-slope);
    const double base = std::pow(f0, 1.0 - q) - (1.0 - q) * slope / (2.0 - q);
    if (base <= 0.0) return 0.0;
    return std::pow(base, 1.0 / (1.0 - q));
  }

  double support(double f0) const {
    if (q >= 1.0 - kMaxwellianWindow) return std::numeric_limits<double>::infinity();
    return std::sqrt(std::pow(f0, 1.0 - q) * 2.0 * diffusion * (2.0 - q) / (gamma * (1.0 - q)));
  }

  double moment(double f0, int order) const {
    boost::math::quadrature::tanh_sinh<double> integrator;
    const auto integrand = [&](double c) {
      const double d = std::isfinite(c) ? density(f0, c) : 0.0;
      return d > 0.0 ? kFourPi * std::pow(c, 2 + order) * d : 0.0;
    };
    return integrator.integrate(integrand, 0.0, support(f0), 1e-13);
  }

  // Central value that gives unit mass.
  double normalized_f0() const {
    const auto mass_gap = [&](double log_f0) { return std::log(moment(std::exp(log_f0), 0)); };
    return std::exp(solve_increasing(mass_gap, std::log(0.1)));
  }
};

}  // namespace

double calibrate_diffusion(double qs, double theta, double gamma) {
  if (!(qs < kQsFourthMomentBound)) throw MomentDivergenceError(4, "fourth moment diverges for qs >= 9/7");
  if (!(theta > 0.0) || !(gamma > 0.0)) throw DomainError("theta and gamma must be positive");
  const auto temperature_gap = [&](double log_d) {
    const StationaryFamily fam{qs, gamma, std::exp(log_d)};
    const double f0 = fam.normalized_f0();
    return std::log(fam.moment(f0, 2) / (3.0 * theta));
  };
  return std::exp(solve_increasing(temperature_gap, std::log(gamma * theta)));
}

double stationary_diffusion(double qs, double theta, double gamma) {
  const auto w = make_qgaussian(qs, theta);
  if (w.is_gaussian()) return gamma * theta;
  return gamma * w.beta() * w.beta() * std::exp((1.0 - qs) * w.log_norm()) / (2.0 - qs);
}

double default_c_max(double qs, double theta) {
  const auto w = make_qgaussian(qs, theta);
  if (w.compact_support()) return 1.5 * w.support_radius();
  // Tail mass is decreasing in the cutoff; bisect on a bracketing doubling.
  double lo = w.beta();
  double hi = 2.0 * lo;
  while (!(tail_bound(w, 0, hi) < kTailMass)) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail_bound(w, 0, mid) < kTailMass ? hi : lo) = mid;
  }
  return hi;
}

FPConfig make_fp_config(double qs, double theta, double gamma, int grid_points) {
  FPConfig cfg;
  cfg.qs = qs;
  cfg.gamma = gamma;
  cfg.diffusion = calibrate_diffusion(qs, theta, gamma);
  cfg.c_max = default_c_max(qs, theta);
  cfg.grid_points = grid_points > 0 ? grid_points : (qs > 1.0 ? 512 : 256);
  cfg.dt = 1.0 / gamma;
  // Stationarity relative to the central density of the target profile.
  cfg.steady_tol = 1e-9 * make_qgaussian(qs, theta).pdf_speed2(0.0) * gamma;
  cfg.validate();
  return cfg;
}

}  // namespace barotherm
