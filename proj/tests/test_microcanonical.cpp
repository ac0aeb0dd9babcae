#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "barotherm/errors.hpp"
#include "barotherm/microcanonical.hpp"

using namespace barotherm;

TEST_CASE("samples are marginals of points on the shell") {
  const ShellSampler s(4, 2.0, 11);
  CHECK(s.radius() == doctest::Approx(std::sqrt(24.0)));
  const auto v = sample_one_particle(s, 50'000);
  REQUIRE(v.size() == 50'000);
  for (const auto& c : v) REQUIRE(norm(c) <= s.radius() * (1.0 + 1e-15));
}

TEST_CASE("two-particle shell marginal is uniform inside the ball") {
  // For N = 2 the marginal is q = -1: f ~ (1 - c^2 / R^2)^{1/2}. Its mean square
  // speed is 3 theta by construction.
  const ShellSampler s(2, 1.0, 5);
  const auto v = sample_one_particle(s, 400'000);
  double c2 = 0.0;
  for (const auto& c : v) c2 += dot(c, c);
  CHECK(c2 / static_cast<double>(v.size()) == doctest::Approx(3.0).epsilon(5e-3));
}

TEST_CASE("empirical xi2 reproduces 15N/(3N+2)") {
  for (int n : {2, 5, 10}) {
    CAPTURE(n);
    const ShellSampler s(n, 1.0, 100 + static_cast<std::uint64_t>(n));
    const auto v = sample_one_particle(s, 1'000'000);
    const auto r = empirical_xi2(v, 1.0);
    const double analytic = 15.0 * n / (3.0 * n + 2.0);
    CHECK(r.std_error > 0.0);
    CHECK(std::abs(r.xi2 - analytic) < 4.0 * r.std_error);
  }
}

TEST_CASE("sampling is independent of the worker count") {
  const ShellSampler s(3, 1.0, 77);
  setenv("BAROTHERM_THREADS", "1", 1);
  const auto serial = sample_one_particle(s, 100'000);
  setenv("BAROTHERM_THREADS", "4", 1);
  const auto threaded = sample_one_particle(s, 100'000);
  unsetenv("BAROTHERM_THREADS");
  CHECK(serial == threaded);
  const auto other = sample_one_particle(ShellSampler(3, 1.0, 78), 100'000);
  CHECK(serial != other);
}

TEST_CASE("marginal speed histogram fits the q(N) model") {
  const auto fit = marginal_pdf_check(ShellSampler(10, 1.0, 42), 40, 1'000'000);
  CHECK(fit.dof > 20);
  CHECK(fit.per_dof() < 2.0);
}

TEST_CASE("histogram test rejects the wrong model") {
  const auto v = sample_one_particle(ShellSampler(2, 1.0, 1), 200'000);
  const auto fit = speed_histogram_test(v, make_microcanonical(10, 1.0), 40);
  CHECK(fit.per_dof() > 50.0);
  const auto gauss = speed_histogram_test(sample_one_particle(ShellSampler(10, 1.0, 1), 200'000),
                                          make_maxwellian(1.0), 40);
  CHECK(gauss.per_dof() > 5.0);
}

TEST_CASE("block moments partition the samples") {
  const auto v = sample_one_particle(ShellSampler(5, 1.0, 3), 12'345);
  const auto blocks = block_moments(v, kJackknifeBlocks);
  double count = 0.0, c2 = 0.0, direct = 0.0;
  for (const auto& b : blocks) {
    count += b.count;
    c2 += b.sum_c2;
  }
  for (const auto& c : v) direct += dot(c, c);
  CHECK(count == 12'345.0);
  CHECK(c2 == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("microcanonical preconditions") {
  CHECK_THROWS_AS(ShellSampler(1, 1.0, 0), DomainError);
  CHECK_THROWS_AS(ShellSampler(3, 0.0, 0), DomainError);
  const auto few = sample_one_particle(ShellSampler(3, 1.0, 0), 999);
  CHECK_THROWS_AS(empirical_xi2(few, 1.0), InsufficientDataError);
  CHECK_THROWS_AS(marginal_pdf_check(ShellSampler(3, 1.0, 0), 5, 100'000), DomainError);
  CHECK_THROWS_AS(marginal_pdf_check(ShellSampler(3, 1.0, 0), 20, 1000), InsufficientDataError);
}
