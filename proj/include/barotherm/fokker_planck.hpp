#pragma once

// Isotropic nonlinear Fokker-Planck dynamics in velocity space,
//
//     df/dt = gamma div_c (c f) + D lap_c (f^{2 - q}),
//
// discretized by finite volumes on a uniform radial grid [0, c_max] with
// zero flux through both ends. The face flux is
//
//     Phi = gamma c H(f_L, f_R) + D (g_R - g_L) / dc,    g = f^{2 - q},
//
// with H the harmonic mean, which is second-order accurate for smooth
// profiles and vanishes next to an empty cell, so explicit steps below the
// per-cell bound of stable_dt() keep the density nonnegative.

#include <vector>

#include "barotherm/weights.hpp"

namespace barotherm {

struct FPConfig {
  double qs = 1.0;
  double gamma = 1.0;
  double diffusion = 1.0;
  int grid_points = 256;
  double c_max = 8.0;
  double dt = 1.0;  // upper cap; relaxation shrinks it to the stability bound
  double steady_tol = 1e-10;
  long max_steps = 20'000'000;

  /// Throws DomainError when a field is out of range.
  void validate() const;

  double cell_width() const noexcept { return c_max / grid_points; }
};

enum class InitialProfile {
  Automatic,    // UniformBall for q <= 1, CauchyBump for q > 1
  UniformBall,  // constant density on c <= c_max / 3
  CauchyBump,   // (1 + (3 c / c_max)^2)^{-3}, strictly positive
};

struct FPSolution {
  std::vector<double> grid;     // cell centres
  std::vector<double> density;  // f at the final time
  long steps_taken = 0;
  double time = 0.0;
  double residual = 0.0;  // max |df/dt| of the final state
  double measured_xi2 = 0.0;
  double measured_theta = 0.0;  // <c^2> / 3 of the final state
  double mass_drift = 0.0;      // |mass - 1|
  double min_density = 0.0;     // smallest density seen over the run
  std::vector<double> second_moment_history;  // <c^2> sampled along the run
};

/// Cell centres of the configured grid.
std::vector<double> radial_grid(const FPConfig& cfg);

/// Discrete right-hand side df/dt on the grid.
std::vector<double> fp_rhs(const std::vector<double>& f, const FPConfig& cfg);

/// Largest explicit step that keeps every cell nonnegative.
double stable_dt(const std::vector<double>& f, const FPConfig& cfg);

/// One explicit step of size cfg.dt. Throws StepSizeError (suggesting 0.4 of
/// the bound) when cfg.dt exceeds stable_dt(f, cfg).
std::vector<double> step(const std::vector<double>& f, const FPConfig& cfg);

/// Max-norm of the discrete right-hand side.
double stationary_residual(const std::vector<double>& profile, const FPConfig& cfg);

/// 4 pi sum_i f_i |cell_i|.
double discrete_mass(const std::vector<double>& f, const FPConfig& cfg);

/// <c^order> / <1> with f piecewise constant on the cells.
double discrete_moment(const std::vector<double>& f, const FPConfig& cfg, int order);

/// Density of `initial` on the grid, normalized to unit discrete mass.
std::vector<double> initial_profile(const FPConfig& cfg, InitialProfile initial);

/// Weight density sampled at the cell centres.
std::vector<double> sample_profile(const ReferenceWeight& w, const FPConfig& cfg);

/// Steps from `initial` until max |df/dt| < cfg.steady_tol.
/// Throws NonConvergenceError when cfg.max_steps is exhausted.
FPSolution relax_to_stationarity(const FPConfig& cfg,
                                 InitialProfile initial = InitialProfile::Automatic);

/// Diffusion coefficient whose unit-mass stationary state has <c^2> = 3 theta,
/// found by shooting on D over numerically normalized stationary profiles.
double calibrate_diffusion(double qs, double theta, double gamma);

/// Closed-form balance D = gamma beta^2 Z^{1-q} / (2 - q) for the same target.
double stationary_diffusion(double qs, double theta, double gamma);

/// Grid extent: 1.5 x the support radius for q < 1, otherwise the point
/// beyond which the analytic tail mass is below 1e-8.
double default_c_max(double qs, double theta);

/// Configuration for relaxing toward the q-Gaussian of temperature theta.
FPConfig make_fp_config(double qs, double theta, double gamma = 1.0, int grid_points = 0);

}  // namespace barotherm
