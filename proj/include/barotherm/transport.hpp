#pragma once

// Leading-order constitutive laws of the generalized 13-moment closure:
//
//     q   = -kappa (A grad(theta) + B grad(p) / rho)
//     J_E = q + h J_M
//
// with A = xi2 / 5, B = (xi2 - 5) / 5 and kappa = (5/2) tau_q p.

#include "barotherm/vec3.hpp"

namespace barotherm {

/// Ideal-gas state in reduced units; the pressure is derived as p = rho theta.
class GasState {
 public:
  GasState(double rho, double theta);

  double rho() const noexcept { return rho_; }
  double theta() const noexcept { return theta_; }
  double p() const noexcept { return p_; }

  /// Monatomic specific enthalpy (5/2) theta.
  double specific_enthalpy() const noexcept { return 2.5 * theta_; }

 private:
  double rho_;
  double theta_;
  double p_;
};

struct TransportCoefficients {
  double A = 1.0;
  double B = 0.0;
  double tau_q = 1.0;
  double kappa = 2.5;
  double xi2 = 5.0;
};

TransportCoefficients coefficients_from_xi2(double xi2, double tau_q = 1.0, double p = 1.0);

/// B_N = -2 / (3N + 2) for the N-particle energy-shell marginal.
double barothermal_B_microcanonical(int n_particles);

/// B = 2 (q - 1) / (9 - 7 q) on the heavy-tailed branch 1 < q < 9/7.
double barothermal_B_heavy(double qs);

Vec3 heat_flux(const TransportCoefficients& tc, const GasState& gs, const Vec3& grad_theta,
               const Vec3& grad_p);

/// heat_flux with grad(theta) = 0.
Vec3 isothermal_barothermal_flux(const TransportCoefficients& tc, const GasState& gs,
                                 const Vec3& grad_p);

struct FluxBundle {
  Vec3 q{};
  Vec3 j_m{};
  double h = 0.0;
  Vec3 j_e{};
};

FluxBundle energy_flux(const Vec3& q, double h, const Vec3& j_m);

}  // namespace barotherm
