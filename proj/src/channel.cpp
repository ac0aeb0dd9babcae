#include "barotherm/channel.hpp"

#include <cmath>
#include <string>

#include "barotherm/errors.hpp"

namespace barotherm {

void ChannelScenario::validate() const {
  const auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string(name) + " must be positive and finite, got " +
                        std::to_string(v));
    }
  };
  check(mu, "mu");
  check(l_h, "l_h");
  check(g_factor, "g_factor");
  if (h) check(*h, "h");
  for (double g : grad_p) {
    if (!std::isfinite(g)) throw DomainError("grad_p must be finite");
  }
}

Vec3 darcy_mass_flux(const ChannelScenario& s) {
  s.validate();
  const double permeance = s.gas.rho() * s.l_h * s.l_h / s.mu * s.g_factor;
  return -permeance * s.grad_p;
}

double prandtl(const ChannelScenario& s) {
  s.validate();
  if (!(s.tc.A > 0.0)) throw DomainError("Prandtl number needs A > 0");
  return s.mu / (s.tc.tau_q * s.gas.p() * s.tc.A);
}

ObservabilityReport observability(const ChannelScenario& s) {
  s.validate();
  if (is_zero(s.grad_p)) {
    throw UndefinedRatioError("observability ratio is undefined for a zero pressure gradient");
  }
  ObservabilityReport r;
  const double h = s.specific_enthalpy();
  const Vec3 q = isothermal_barothermal_flux(s.tc, s.gas, s.grad_p);
  r.flux = energy_flux(q, h, darcy_mass_flux(s));
  r.c_exact = norm(q) / norm(h * r.flux.j_m);
  r.prandtl = prandtl(s);
  r.nu = s.kinematic_viscosity();
  const double rarefaction = r.nu / (s.l_h * std::sqrt(s.gas.theta()));
  r.c_scaling = std::abs(s.tc.B / s.tc.A) / (s.g_factor * r.prandtl) * rarefaction * rarefaction;
  return r;
}

}  // namespace barotherm
