#include "barotherm/transport.hpp"

#include <cmath>
#include <string>

#include "barotherm/errors.hpp"
#include "barotherm/weights.hpp"

namespace barotherm {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite, got " +
                      std::to_string(v));
  }
}

}  // namespace

GasState::GasState(double rho, double theta) : rho_(rho), theta_(theta) {
  require_positive(rho, "rho");
  require_positive(theta, "theta");
  p_ = rho * theta;
}

TransportCoefficients coefficients_from_xi2(double xi2, double tau_q, double p) {
  require_positive(xi2, "xi2");
  require_positive(tau_q, "tau_q");
  require_positive(p, "p");
  TransportCoefficients tc;
  tc.xi2 = xi2;
  tc.A = xi2 / 5.0;
  // Equal to (xi2 - 5) / 5; written as A - 1 so that A - B is exactly one.
  tc.B = tc.A - 1.0;
  tc.tau_q = tau_q;
  tc.kappa = 2.5 * tau_q * p;
  return tc;
}

double barothermal_B_microcanonical(int n_particles) {
  if (n_particles < 2) {
    throw DomainError("microcanonical shell needs n_particles >= 2, got " +
                      std::to_string(n_particles));
  }
  return -2.0 / (3.0 * n_particles + 2.0);
}

double barothermal_B_heavy(double qs) {
  if (!(qs > 1.0 && qs < kQsFourthMomentBound)) {
    throw DomainError("heavy-tailed branch needs 1 < qs < 9/7 (got " + std::to_string(qs) +
                      "); use coefficients_from_xi2 for other indices");
  }
  return 2.0 * (qs - 1.0) / (9.0 - 7.0 * qs);
}

Vec3 heat_flux(const TransportCoefficients& tc, const GasState& gs, const Vec3& grad_theta,
               const Vec3& grad_p) {
  Vec3 q;
  for (int i = 0; i < 3; ++i) {
    q[i] = -tc.kappa * (tc.A * grad_theta[i] + tc.B * grad_p[i] / gs.rho());
  }
  return q;
}

Vec3 isothermal_barothermal_flux(const TransportCoefficients& tc, const GasState& gs,
                                 const Vec3& grad_p) {
  return heat_flux(tc, gs, Vec3{0.0, 0.0, 0.0}, grad_p);
}

FluxBundle energy_flux(const Vec3& q, double h, const Vec3& j_m) {
  return FluxBundle{q, j_m, h, q + h * j_m};
}

}  // namespace barotherm
