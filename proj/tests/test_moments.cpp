#include <doctest.h>

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "barotherm/errors.hpp"
#include "barotherm/moments.hpp"
#include "oracles.hpp"

using namespace barotherm;

namespace {

double xi2_formula(double q) { return 5.0 * (7.0 - 5.0 * q) / (9.0 - 7.0 * q); }

}  // namespace

TEST_CASE("closed form against the independent substitution quadrature") {
  for (double q : {-2.0, -1.0, 0.0, 0.5, 0.9, 1.0, 1.1, 1.25}) {
    CAPTURE(q);
    CHECK(oracle::xi2(q, 1.0) == doctest::Approx(xi2_formula(q)).epsilon(1e-11));
    const auto w = make_qgaussian(q, 1.0);
    CHECK(xi2_closed_form(w).xi2 == doctest::Approx(xi2_formula(q)).epsilon(1e-14));
    const double b2 = w.beta() * w.beta();
    for (int k : {0, 2, 4}) {
      CHECK(closed_form_moment(w, k) == doctest::Approx(oracle::moment(q, b2, k)).epsilon(1e-11));
    }
  }
}

TEST_CASE("quadrature matches the closed form") {
  const auto t0 = std::chrono::steady_clock::now();
  for (double q : {-2.0, -1.0, 0.0, 0.5, 0.9, 1.0 - 1e-6, 1.0, 1.0 + 1e-6, 1.1, 1.25}) {
    for (double theta : {0.5, 1.0, 3.0}) {
      CAPTURE(q);
      CAPTURE(theta);
      const auto w = make_qgaussian(q, theta);
      const auto r = xi2_quadrature(w);
      CHECK(r.method == MomentMethod::Quadrature);
      CHECK(std::abs(r.xi2 - xi2_formula(q)) / xi2_formula(q) < 1e-8);
      CHECK(r.c2 == doctest::Approx(3.0 * theta).epsilon(1e-9));
      CHECK(radial_moment(w, 0, 1e-12).value == doctest::Approx(1.0).epsilon(1e-11));
    }
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 10.0);
}

TEST_CASE("maxwellian closed form is exact") {
  const auto r = xi2_closed_form(make_maxwellian(2.5));
  CHECK(r.xi2 == 5.0);
  CHECK(r.c2 == doctest::Approx(7.5).epsilon(1e-15));
  CHECK(r.c4 == doctest::Approx(5.0 * 2.5 * 7.5).epsilon(1e-15));
  CHECK(xi2_closed_form(make_qgaussian(1.0, 1.0)).xi2 == 5.0);
}

TEST_CASE("microcanonical closed form") {
  for (int n : {2, 3, 5, 10, 100, 1000}) {
    CAPTURE(n);
    const auto r = xi2_closed_form(make_microcanonical(n, 1.0));
    CHECK(r.xi2 == doctest::Approx(15.0 * n / (3.0 * n + 2.0)).epsilon(1e-15));
    CHECK(xi2_closed_form(make_qgaussian(qs_from_particles(n), 1.0)).xi2 ==
          doctest::Approx(r.xi2).epsilon(1e-14));
  }
  CHECK(xi2_closed_form(make_microcanonical(2, 1.0)).xi2 == 3.75);
}

TEST_CASE("moment finiteness boundaries") {
  const auto heavy = make_qgaussian(1.25, 1.0);
  CHECK(moment_is_finite(heavy, 4));
  CHECK_FALSE(moment_is_finite(heavy, 6));  // needs q < 1 + 2/9
  CHECK_FALSE(moment_is_finite(heavy, 8));
  CHECK(moment_is_finite(make_qgaussian(1.2, 1.0), 6));
  CHECK(moment_is_finite(make_qgaussian(0.5, 1.0), 40));
  CHECK(moment_is_finite(make_maxwellian(1.0), 40));
}

TEST_CASE("eighth moment is infinite at qs = 1.25") {
  // <c^8> needs q < 1 + 2/11 = 13/11; the Monte Carlo c^4 estimator has
  // infinite variance above that.
  const auto w = make_qgaussian(1.25, 1.0);
  CHECK_FALSE(moment_is_finite(w, 8));
  CHECK_THROWS_AS(closed_form_moment(w, 8), MomentDivergenceError);
  CHECK_THROWS_AS(radial_moment(w, 8, 1e-8), MomentDivergenceError);
  CHECK(moment_is_finite(make_qgaussian(13.0 / 11.0 - 1e-9, 1.0), 8));
}

TEST_CASE("divergence guard near 9/7") {
  for (double q : {1.28, 1.285, 1.2857}) {
    CAPTURE(q);
    const auto w = make_qgaussian(q, 1.0);
    CHECK_THROWS_AS(xi2_quadrature(w), MomentDivergenceError);
    CHECK_THROWS_AS(xi2_quadrature(w, 1e-2), MomentDivergenceError);
    CHECK_THROWS_AS(radial_moment(w, 4, 1e-6), MomentDivergenceError);
  }
  try {
    (void)xi2_quadrature(make_qgaussian(1.285, 1.0));
    FAIL("expected MomentDivergenceError");
  } catch (const MomentDivergenceError& e) {
    CHECK(e.order() == 4);
  }
  CHECK_THROWS_AS(make_qgaussian(1.3, 1.0), MomentDivergenceError);
}

TEST_CASE("quadrature tolerance preconditions") {
  const auto w = make_maxwellian(1.0);
  CHECK_THROWS_AS(xi2_quadrature(w, 0.0), DomainError);
  CHECK_THROWS_AS(xi2_quadrature(w, -1e-6), DomainError);
  CHECK_THROWS_AS(xi2_quadrature(w, 0.05), DomainError);
  CHECK(xi2_quadrature(w, 1e-2).xi2 == doctest::Approx(5.0).epsilon(1e-2));
}

TEST_CASE("tail bound dominates the true tail") {
  for (double q : {0.5, 1.0, 1.1, 1.25}) {
    const auto w = make_qgaussian(q, 1.0);
    for (int k : {0, 2, 4}) {
      for (double cut : {3.0, 6.0, 12.0}) {
        CAPTURE(q);
        CAPTURE(k);
        CAPTURE(cut);
        const double total = closed_form_moment(w, k);
        // exact tail by the oracle on [cut, inf): total minus the head
        const double head = oracle::composite(
            [&](double c) { return 4.0 * std::numbers::pi * std::pow(c, k + 2) * w.pdf_speed2(c * c); },
            0.0, std::min(cut, w.support_radius()), 400);
        const double tail = std::max(0.0, total - head);
        CHECK(tail_bound(w, k, cut) >= tail * (1.0 - 1e-9) - 1e-12 * total);
      }
    }
  }
}

TEST_CASE("monte carlo agrees within four standard errors") {
  for (double q : {-1.0, 0.0, 0.5, 1.0, 1.1}) {
    CAPTURE(q);
    const auto w = make_qgaussian(q, 1.0);
    const auto r = xi2_monte_carlo(w, 1'000'000, 12345);
    CHECK(r.method == MomentMethod::MonteCarlo);
    CHECK(r.std_error > 0.0);
    CHECK(std::abs(r.xi2 - xi2_formula(q)) < 4.0 * r.std_error);
  }
}

TEST_CASE("monte carlo is deterministic per seed") {
  const auto w = make_qgaussian(0.5, 1.0);
  const auto a = xi2_monte_carlo(w, 50'000, 9);
  const auto b = xi2_monte_carlo(w, 50'000, 9);
  const auto c = xi2_monte_carlo(w, 50'000, 10);
  CHECK(a.xi2 == b.xi2);
  CHECK(a.std_error == b.std_error);
  CHECK(a.xi2 != c.xi2);
  CHECK_THROWS_AS(xi2_monte_carlo(w, 999, 1), InsufficientDataError);
}

TEST_CASE("speed sampler respects the support") {
  const auto w = make_qgaussian(-1.0, 1.0);
  SpeedSampler draw(w);
  std::mt19937_64 eng(5);
  for (int i = 0; i < 20000; ++i) {
    const double c = draw(eng);
    REQUIRE(c >= 0.0);
    REQUIRE(c <= w.support_radius());
  }
}

TEST_CASE("jackknife of identical blocks has zero error") {
  std::vector<BlockMoments> blocks(kJackknifeBlocks, BlockMoments{10.0, 30.0, 150.0});
  const auto r = jackknife_xi2(blocks, 1.0);
  CHECK(r.xi2 == doctest::Approx(5.0));
  CHECK(r.std_error == doctest::Approx(0.0));
  const auto per = block_xi2(blocks, 1.0);
  REQUIRE(per.size() == static_cast<std::size_t>(kJackknifeBlocks));
  CHECK(per.front() == doctest::Approx(5.0));
}

TEST_CASE("orthogonal basis of the maxwellian is the Laguerre family") {
  const double theta = 1.5;
  const auto w = make_maxwellian(theta);
  const auto basis = build_orthogonal_basis(w, 4);
  CHECK(basis.gram_residual < 1e-10);
  // In x = c^2 / (2 theta) the radial measure is x^{1/2} e^{-x} dx, so
  // P_k = (-1)^k L_k^{(1/2)}(x) / ||L_k||, ||L_k||^2 = Gamma(k + 3/2) / (k! Gamma(3/2)).
  for (int k = 0; k <= 4; ++k) {
    const double norm2 = std::tgamma(k + 1.5) / (std::tgamma(k + 1.0) * std::tgamma(1.5));
    for (double c2 : {0.0, 0.7, 3.0, 11.0}) {
      CAPTURE(k);
      CAPTURE(c2);
      const double ref = (k % 2 ? -1.0 : 1.0) * oracle::laguerre(k, 0.5, c2 / (2.0 * theta)) /
                         std::sqrt(norm2);
      CHECK(basis.evaluate(k, c2) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("orthogonal basis for non-Gaussian weights") {
  for (double q : {-1.0, 0.5}) {
    const auto basis = build_orthogonal_basis(make_qgaussian(q, 1.0), 4);
    CHECK(basis.degree == 4);
    CHECK(basis.gram_residual < 1e-10);
    REQUIRE(basis.coefficients.size() == 5);
    CHECK(basis.coefficients[4].size() == 5);
  }
  // degree 2 needs <c^8>; finite below 13/11
  CHECK(build_orthogonal_basis(make_qgaussian(1.1, 1.0), 2).gram_residual < 1e-9);
  CHECK_THROWS_AS(build_orthogonal_basis(make_qgaussian(1.25, 1.0), 2), MomentDivergenceError);
  CHECK_THROWS_AS(build_orthogonal_basis(make_maxwellian(1.0), 5), DomainError);
  CHECK_THROWS_AS(build_orthogonal_basis(make_maxwellian(1.0), -1), DomainError);
  CHECK(build_orthogonal_basis(make_maxwellian(1.0), 0).gram_residual == 0.0);
}
