#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "barotherm/errors.hpp"
#include "barotherm/fokker_planck.hpp"
#include "barotherm/moments.hpp"

using namespace barotherm;

namespace {

double xi2_formula(double q) { return 5.0 * (7.0 - 5.0 * q) / (9.0 - 7.0 * q); }

double analytic_residual(double q, int grid_points) {
  auto cfg = make_fp_config(q, 1.0, 1.0, grid_points);
  cfg.diffusion = stationary_diffusion(q, 1.0, 1.0);
  return stationary_residual(sample_profile(make_qgaussian(q, 1.0), cfg), cfg);
}

}  // namespace

TEST_CASE("calibrated diffusion matches the closed-form balance") {
  for (double q : {0.5, 0.9, 1.0, 1.1, 1.15}) {
    for (double gamma : {0.5, 2.0}) {
      CAPTURE(q);
      CHECK(calibrate_diffusion(q, 1.0, gamma) ==
            doctest::Approx(stationary_diffusion(q, 1.0, gamma)).epsilon(1e-9));
    }
  }
  // Maxwellian: D = gamma theta
  CHECK(stationary_diffusion(1.0, 2.0, 3.0) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("discrete operator conserves mass") {
  auto cfg = make_fp_config(0.9, 1.0, 1.0, 128);
  auto f = initial_profile(cfg, InitialProfile::UniformBall);
  CHECK(discrete_mass(f, cfg) == doctest::Approx(1.0).epsilon(1e-14));
  const auto rhs = fp_rhs(f, cfg);
  CHECK(discrete_mass(rhs, cfg) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  cfg.dt = 0.4 * stable_dt(f, cfg);
  for (int i = 0; i < 500; ++i) f = step(f, cfg);
  CHECK(discrete_mass(f, cfg) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(*std::min_element(f.begin(), f.end()) >= 0.0);
}

TEST_CASE("oversized steps are rejected with a suggestion") {
  auto cfg = make_fp_config(1.0, 1.0, 1.0, 128);
  const auto f = initial_profile(cfg, InitialProfile::CauchyBump);
  const double bound = stable_dt(f, cfg);
  cfg.dt = 1.5 * bound;
  try {
    (void)step(f, cfg);
    FAIL("expected StepSizeError");
  } catch (const StepSizeError& e) {
    CHECK(e.suggested_dt() == doctest::Approx(0.4 * bound));
  }
}

TEST_CASE("stationary residual converges at second order for smooth profiles") {
  for (double q : {0.9, 1.0, 1.1}) {
    CAPTURE(q);
    const double r1 = analytic_residual(q, 128), r2 = analytic_residual(q, 256), r3 = analytic_residual(q, 512);
    CHECK(r2 < r1);
    CHECK(r3 < r2);
    CHECK(std::log2(r1 / r2) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::log2(r2 / r3) == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("relaxation reaches the q-Gaussian second moments") {
  for (double q : {0.5, 0.9, 1.0}) {
    CAPTURE(q);
    const auto sol = relax_to_stationarity(make_fp_config(q, 1.0));
    CHECK(sol.residual < make_fp_config(q, 1.0).steady_tol);
    CHECK(std::abs(sol.measured_xi2 - xi2_formula(q)) / xi2_formula(q) < 0.01);
    CHECK(sol.measured_theta == doctest::Approx(1.0).epsilon(0.01));
    CHECK(sol.mass_drift < 1e-10);
    CHECK(sol.min_density >= 0.0);
    CHECK(sol.density.size() == sol.grid.size());
    REQUIRE(sol.second_moment_history.size() > 2);
  }
}

TEST_CASE("uniform start converges to the same state as the Cauchy start") {
  const auto cfg = make_fp_config(0.9, 1.0, 1.0, 128);
  const auto a = relax_to_stationarity(cfg, InitialProfile::UniformBall);
  const auto b = relax_to_stationarity(cfg, InitialProfile::CauchyBump);
  CHECK(a.measured_xi2 == doctest::Approx(b.measured_xi2).epsilon(1e-6));
}

TEST_CASE("relaxation failure is reported") {
  auto cfg = make_fp_config(1.0, 1.0, 1.0, 64);
  cfg.max_steps = 5;
  try {
    (void)relax_to_stationarity(cfg);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.steps() == 5);
    CHECK(e.residual() > cfg.steady_tol);
  }
}

TEST_CASE("configuration preconditions") {
  CHECK_THROWS_AS(make_fp_config(9.0 / 7.0, 1.0), MomentDivergenceError);
  FPConfig cfg;
  cfg.grid_points = 32;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = FPConfig{};
  cfg.diffusion = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = FPConfig{};
  cfg.gamma = -1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = make_fp_config(1.1, 1.0);
  CHECK_THROWS_AS(initial_profile(cfg, InitialProfile::UniformBall), DomainError);
}
