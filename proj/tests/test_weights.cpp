#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "barotherm/errors.hpp"
#include "barotherm/weights.hpp"
#include "oracles.hpp"

using namespace barotherm;

TEST_CASE("beta squared matches the second-moment root") {
  for (double q : {-2.0, -1.0, 0.0, 0.5, 0.9, 1.0, 1.1, 1.2, 1.25}) {
    for (double theta : {0.3, 1.0, 4.0}) {
      CAPTURE(q);
      CAPTURE(theta);
      const double b = oracle::beta_by_root(q, theta);
      CHECK(beta_squared(q, theta) == doctest::Approx(b * b).epsilon(1e-10));
      CHECK(make_qgaussian(q, theta).beta() == doctest::Approx(b).epsilon(1e-10));
    }
  }
}

TEST_CASE("normalization agrees with the substitution integral") {
  for (double q : {-2.0, 0.0, 0.5, 0.99, 1.0, 1.01, 1.1, 1.25}) {
    CAPTURE(q);
    const auto w = make_qgaussian(q, 1.7);
    const double b2 = w.beta() * w.beta();
    const double z = 4.0 * std::numbers::pi * oracle::radial_integral(q, b2, 0);
    CHECK(w.norm() == doctest::Approx(z).epsilon(1e-11));
  }
}

TEST_CASE("maxwellian window is continuous") {
  const auto m = make_maxwellian(2.0);
  CHECK(m.is_gaussian());
  CHECK(m.norm() == doctest::Approx(std::pow(2.0 * std::numbers::pi * 2.0, 1.5)).epsilon(1e-15));
  for (double dq : {1e-13, 1e-9, 1e-6}) {
    for (double sign : {-1.0, 1.0}) {
      const auto w = make_qgaussian(1.0 + sign * dq, 2.0);
      CAPTURE(dq);
      CHECK(w.is_gaussian() == (dq < kMaxwellianWindow));
      for (double c2 : {0.0, 1.0, 9.0}) {
        CHECK(w.pdf_speed2(c2) == doctest::Approx(m.pdf_speed2(c2)).epsilon(10.0 * dq + 1e-14));
      }
    }
  }
}

TEST_CASE("compact support is exactly zero outside") {
  const auto w = make_qgaussian(0.5, 1.0);
  REQUIRE(w.compact_support());
  const double r = w.support_radius();
  // R^2 = 2 beta^2 / (1 - q)
  CHECK(r == doctest::Approx(std::sqrt(2.0 * beta_squared(0.5, 1.0) / 0.5)));
  CHECK(w.pdf({r * 1.0000001, 0, 0}) == 0.0);
  CHECK(w.pdf({0, 0, r * 2}) == 0.0);
  CHECK(w.pdf({0, r * 0.999, 0}) > 0.0);
  CHECK(w.radial_density(r * 1.5) == 0.0);
  CHECK(std::isinf(make_qgaussian(1.1, 1.0).support_radius()));
  CHECK(std::isinf(make_maxwellian(1.0).support_radius()));
}

TEST_CASE("pdf is isotropic and positive on its support") {
  const auto w = make_qgaussian(1.2, 0.8);
  const double s = 1.3;
  CHECK(w.pdf({s, 0, 0}) == doctest::Approx(w.pdf({0, 0, -s})).epsilon(1e-15));
  CHECK(w.pdf({s / std::sqrt(3.0), s / std::sqrt(3.0), s / std::sqrt(3.0)}) ==
        doctest::Approx(w.pdf({0, s, 0})).epsilon(1e-14));
  CHECK(w.pdf({100, 0, 0}) > 0.0);
}

TEST_CASE("microcanonical weight uses q(N)") {
  for (int n : {2, 3, 5, 10, 100}) {
    CAPTURE(n);
    const double q = qs_from_particles(n);
    CHECK(q == doctest::Approx((3.0 * n - 7.0) / (3.0 * n - 5.0)).epsilon(1e-15));
    const auto w = make_microcanonical(n, 1.0);
    CHECK(w.kind() == WeightKind::MicrocanonicalShell);
    CHECK(w.n_particles() == n);
    CHECK(!w.qs().has_value());
    CHECK(w.effective_qs() == q);
    // the one-particle support is the shell radius sqrt(3 N theta)
    CHECK(w.support_radius() == doctest::Approx(std::sqrt(3.0 * n)).epsilon(1e-13));
  }
  CHECK(qs_from_particles(2) == -1.0);
}

TEST_CASE("constructor preconditions") {
  CHECK_THROWS_AS(make_qgaussian(9.0 / 7.0, 1.0), MomentDivergenceError);
  CHECK_THROWS_AS(make_qgaussian(1.3, 1.0), MomentDivergenceError);
  CHECK_THROWS_AS(make_qgaussian(5.0, 1.0), MomentDivergenceError);
  CHECK_THROWS_AS(make_qgaussian(std::numeric_limits<double>::quiet_NaN(), 1.0), DomainError);
  CHECK_THROWS_AS(make_qgaussian(-std::numeric_limits<double>::infinity(), 1.0), DomainError);
  CHECK_THROWS_AS(make_qgaussian(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(make_qgaussian(0.5, -1.0), DomainError);
  CHECK_THROWS_AS(make_maxwellian(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(make_microcanonical(1, 1.0), DomainError);
  CHECK_THROWS_AS(qs_from_particles(0), DomainError);
  try {
    (void)make_qgaussian(1.3, 1.0);
  } catch (const MomentDivergenceError& e) {
    CHECK(e.order() == 4);
    CHECK(std::string(e.what()).find("fourth moment diverges for qs >= 9/7") != std::string::npos);
  }
}
