#pragma once

#include <optional>

#include "barotherm/transport.hpp"
#include "barotherm/vec3.hpp"

namespace barotherm {

/// Isothermal pressure-driven channel with a Darcy-type mass flux
/// J_M = -(rho L_h^2 / mu) G grad(p).
struct ChannelScenario {
  GasState gas{1.0, 1.0};
  TransportCoefficients tc{};
  double mu = 1.0;        // dynamic viscosity
  double l_h = 1.0;       // hydraulic length
  double g_factor = 1.0;  // geometry factor, O(1)
  Vec3 grad_p{1.0, 0.0, 0.0};
  std::optional<double> h;  // defaults to (5/2) theta

  double specific_enthalpy() const noexcept { return h ? *h : gas.specific_enthalpy(); }
  double kinematic_viscosity() const noexcept { return mu / gas.rho(); }

  /// Throws DomainError unless mu, l_h, g_factor are positive and finite.
  void validate() const;
};

struct ObservabilityReport {
  FluxBundle flux;
  double c_exact = 0.0;    // |q| / |h J_M|
  double c_scaling = 0.0;  // |B/A| / (G Pr) (nu / (L_h sqrt(theta)))^2
  double prandtl = 0.0;
  double nu = 0.0;
};

Vec3 darcy_mass_flux(const ChannelScenario& s);

/// Pr = mu / (tau_q p A), i.e. mu c_p / (kappa A) with c_p = 5/2.
double prandtl(const ChannelScenario& s);

ObservabilityReport observability(const ChannelScenario& s);

}  // namespace barotherm
