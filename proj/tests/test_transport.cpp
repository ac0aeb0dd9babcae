#include <doctest.h>

#include <cstring>
#include <limits>
#include <random>

#include "barotherm/errors.hpp"
#include "barotherm/moments.hpp"
#include "barotherm/transport.hpp"

using namespace barotherm;

namespace {

Vec3 random_vec(std::mt19937_64& eng) {
  std::normal_distribution<double> n;
  return {n(eng), n(eng), n(eng)};
}

bool bitwise_equal(const Vec3& a, const Vec3& b) { return std::memcmp(a.data(), b.data(), sizeof(Vec3)) == 0; }

}  // namespace

TEST_CASE("coefficients from xi2") {
  const auto tc = coefficients_from_xi2(3.75, 2.0, 3.0);
  CHECK(tc.A == 0.75);
  CHECK(tc.B == -0.25);
  CHECK(tc.kappa == doctest::Approx(2.5 * 2.0 * 3.0));
  CHECK(tc.xi2 == 3.75);
  const auto m = coefficients_from_xi2(5.0);
  CHECK(m.A == 1.0);
  CHECK(m.B == 0.0);
  CHECK_THROWS_AS(coefficients_from_xi2(0.0), DomainError);
  CHECK_THROWS_AS(coefficients_from_xi2(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(coefficients_from_xi2(5.0, 0.0), DomainError);
  CHECK_THROWS_AS(coefficients_from_xi2(5.0, 1.0, -1.0), DomainError);
}

TEST_CASE("A - B is exactly one") {
  std::mt19937_64 eng(1);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const auto tc = coefficients_from_xi2(u(eng));
    REQUIRE(tc.A - tc.B == 1.0);
  }
}

TEST_CASE("microcanonical B") {
  for (int n : {2, 3, 5, 10, 100}) {
    CAPTURE(n);
    CHECK(barothermal_B_microcanonical(n) == doctest::Approx(-2.0 / (3.0 * n + 2.0)).epsilon(1e-15));
    const auto tc = coefficients_from_xi2(xi2_closed_form(make_microcanonical(n, 1.0)).xi2);
    CHECK(std::abs(tc.B - barothermal_B_microcanonical(n)) < 1e-15);
    CHECK(tc.B < 0.0);
  }
  CHECK(barothermal_B_microcanonical(2) == -0.25);
  CHECK_THROWS_AS(barothermal_B_microcanonical(1), DomainError);
}

TEST_CASE("heavy-tail B on a 50-point grid") {
  for (int i = 1; i <= 50; ++i) {
    const double q = 1.0 + (9.0 / 7.0 - 1.0) * i / 51.0;
    CAPTURE(q);
    const double direct = barothermal_B_heavy(q);
    const double via = (xi2_closed_form(make_qgaussian(q, 1.0)).xi2 - 5.0) / 5.0;
    CHECK(direct > 0.0);
    CHECK(direct == doctest::Approx(via).epsilon(1e-13));
  }
  CHECK_THROWS_AS(barothermal_B_heavy(1.0), DomainError);
  CHECK_THROWS_AS(barothermal_B_heavy(9.0 / 7.0), DomainError);
  CHECK_THROWS_AS(barothermal_B_heavy(0.5), DomainError);
}

TEST_CASE("B increases with qs") {
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double q = -2.0 + (1.28 + 2.0) * i / 200.0;
    const double b = coefficients_from_xi2(xi2_closed_form(make_qgaussian(q, 1.0)).xi2).B;
    CHECK(b > prev);
    prev = b;
  }
}

TEST_CASE("gas state") {
  const GasState gs(2.0, 3.0);
  CHECK(gs.p() == 6.0);
  CHECK(gs.specific_enthalpy() == 7.5);
  CHECK_THROWS_AS(GasState(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(GasState(1.0, -1.0), DomainError);
}

TEST_CASE("heat flux is linear in the gradients") {
  std::mt19937_64 eng(2);
  const GasState gs(1.3, 0.7);
  const auto tc = coefficients_from_xi2(4.2, 0.9, gs.p());
  for (int i = 0; i < 200; ++i) {
    const Vec3 t1 = random_vec(eng), t2 = random_vec(eng), p1 = random_vec(eng), p2 = random_vec(eng);
    const double a = 1.7, b = -0.4;
    const Vec3 lhs = heat_flux(tc, gs, a * t1 + b * t2, a * p1 + b * p2);
    const Vec3 rhs = a * heat_flux(tc, gs, t1, p1) + b * heat_flux(tc, gs, t2, p2);
    for (int k = 0; k < 3; ++k) CHECK(lhs[k] == doctest::Approx(rhs[k]).epsilon(1e-12).scale(1.0));
  }
  // explicit value
  const Vec3 q = heat_flux(coefficients_from_xi2(3.75), GasState(1.0, 1.0), {1, 0, 0}, {0, 2, 0});
  CHECK(q[0] == doctest::Approx(-2.5 * 0.75));
  CHECK(q[1] == doctest::Approx(2.5 * 0.25 * 2.0));
  CHECK(q[2] == 0.0);
}

TEST_CASE("isothermal flux equals the full law at zero temperature gradient") {
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(0.1, 9.9);
  for (int i = 0; i < 1000; ++i) {
    const GasState gs(u(eng), u(eng));
    const auto tc = coefficients_from_xi2(u(eng), u(eng), gs.p());
    const Vec3 gp = random_vec(eng);
    REQUIRE(bitwise_equal(isothermal_barothermal_flux(tc, gs, gp), heat_flux(tc, gs, {0, 0, 0}, gp)));
  }
}

TEST_CASE("sign laws under isothermal gradients") {
  std::mt19937_64 eng(4);
  std::uniform_real_distribution<double> u(0.1, 9.9);
  int negative = 0, positive = 0;
  for (int i = 0; i < 1000; ++i) {
    const GasState gs(u(eng), u(eng));
    const auto tc = coefficients_from_xi2(u(eng), u(eng), gs.p());
    const Vec3 gp = random_vec(eng);
    const double s = dot(isothermal_barothermal_flux(tc, gs, gp), gp);
    if (tc.B < 0.0) {
      ++negative;
      REQUIRE(s > 0.0);
    } else if (tc.B > 0.0) {
      ++positive;
      REQUIRE(s < 0.0);
    }
  }
  CHECK(negative > 100);
  CHECK(positive > 100);
  CHECK(is_zero(isothermal_barothermal_flux(coefficients_from_xi2(5.0), GasState(1, 1), {1, 2, 3})));
}

TEST_CASE("energy flux adds advected enthalpy") {
  const auto fb = energy_flux({1, 2, 3}, 2.5, {-1, 0, 4});
  CHECK(fb.j_e[0] == -1.5);
  CHECK(fb.j_e[1] == 2.0);
  CHECK(fb.j_e[2] == 13.0);
  CHECK(fb.h == 2.5);
  const auto zero = energy_flux({0, 0, 0}, 2.5, {1, 1, 1});
  CHECK(zero.j_e[0] == 2.5);
}
