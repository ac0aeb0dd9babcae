#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "barotherm/channel.hpp"
#include "barotherm/errors.hpp"
#include "barotherm/fokker_planck.hpp"
#include "barotherm/microcanonical.hpp"
#include "barotherm/moments.hpp"
#include "barotherm/transport.hpp"
#include "barotherm/weights.hpp"

namespace py = pybind11;
using namespace barotherm;

namespace {

MomentReport shell_xi2(int n_particles, std::int64_t samples, std::uint64_t seed, double theta) {
  const auto v = sample_one_particle(ShellSampler(n_particles, theta, seed), samples);
  return empirical_xi2(v, theta);
}

ObservabilityReport channel_report(double xi2, double rho, double theta, double mu, double l_h,
                                   double g_factor, const Vec3& grad_p, double tau_q,
                                   std::optional<double> h) {
  ChannelScenario s;
  s.gas = GasState(rho, theta);
  s.tc = coefficients_from_xi2(xi2, tau_q, s.gas.p());
  s.mu = mu;
  s.l_h = l_h;
  s.g_factor = g_factor;
  s.grad_p = grad_p;
  s.h = h;
  return observability(s);
}

}  // namespace

PYBIND11_MODULE(_barotherm, m) {
  m.doc() = "Generalized 13-moment barothermal transport: weights, moments, coefficients";

  // Base classes first: translators run in reverse registration order.
  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<MomentDivergenceError>(m, "MomentDivergenceError", domain.ptr());
  py::register_exception<UndefinedRatioError>(m, "UndefinedRatioError", domain.ptr());
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_ValueError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);
  py::register_exception<StepSizeError>(m, "StepSizeError", PyExc_RuntimeError);

  m.attr("QS_FOURTH_MOMENT_BOUND") = kQsFourthMomentBound;

  py::enum_<WeightKind>(m, "WeightKind")
      .value("Maxwellian", WeightKind::Maxwellian)
      .value("QGaussian", WeightKind::QGaussian)
      .value("MicrocanonicalShell", WeightKind::MicrocanonicalShell);

  py::class_<ReferenceWeight>(m, "ReferenceWeight")
      .def_property_readonly("kind", &ReferenceWeight::kind)
      .def_property_readonly("theta", &ReferenceWeight::theta)
      .def_property_readonly("qs", &ReferenceWeight::qs)
      .def_property_readonly("n_particles", &ReferenceWeight::n_particles)
      .def_property_readonly("effective_qs", &ReferenceWeight::effective_qs)
      .def_property_readonly("beta", &ReferenceWeight::beta)
      .def_property_readonly("norm", &ReferenceWeight::norm)
      .def_property_readonly("support_radius", &ReferenceWeight::support_radius)
      .def_property_readonly("compact_support", &ReferenceWeight::compact_support)
      .def("pdf", &ReferenceWeight::pdf, py::arg("c"))
      .def("pdf_speed2", &ReferenceWeight::pdf_speed2, py::arg("c2"))
      .def("radial_density", &ReferenceWeight::radial_density, py::arg("speed"))
      .def("__repr__", [](const ReferenceWeight& w) {
        return std::string("<ReferenceWeight ") + to_string(w.kind()) +
               " qs=" + std::to_string(w.effective_qs()) + " theta=" + std::to_string(w.theta()) + ">";
      });

  m.def("make_maxwellian", &make_maxwellian, py::arg("theta") = 1.0);
  m.def("make_qgaussian", &make_qgaussian, py::arg("qs"), py::arg("theta") = 1.0);
  m.def("make_microcanonical", &make_microcanonical, py::arg("n_particles"), py::arg("theta") = 1.0);
  m.def("qs_from_particles", &qs_from_particles, py::arg("n_particles"));

  py::enum_<MomentMethod>(m, "MomentMethod")
      .value("ClosedForm", MomentMethod::ClosedForm)
      .value("Quadrature", MomentMethod::Quadrature)
      .value("MonteCarlo", MomentMethod::MonteCarlo);

  py::class_<MomentReport>(m, "MomentReport")
      .def_readonly("c2", &MomentReport::c2)
      .def_readonly("c4", &MomentReport::c4)
      .def_readonly("xi2", &MomentReport::xi2)
      .def_readonly("method", &MomentReport::method)
      .def_readonly("std_error", &MomentReport::std_error);

  m.def("xi2_closed_form", &xi2_closed_form, py::arg("weight"));
  m.def("xi2_quadrature", &xi2_quadrature, py::arg("weight"), py::arg("rel_tol") = 1e-10,
        py::call_guard<py::gil_scoped_release>());
  m.def("xi2_monte_carlo", &xi2_monte_carlo, py::arg("weight"), py::arg("samples"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("closed_form_moment", &closed_form_moment, py::arg("weight"), py::arg("order"));
  m.def("moment_is_finite", &moment_is_finite, py::arg("weight"), py::arg("order"));
  m.def("shell_xi2", &shell_xi2, py::arg("n_particles"), py::arg("samples"), py::arg("seed"),
        py::arg("theta") = 1.0, py::call_guard<py::gil_scoped_release>());

  py::class_<TransportCoefficients>(m, "TransportCoefficients")
      .def_readonly("A", &TransportCoefficients::A)
      .def_readonly("B", &TransportCoefficients::B)
      .def_readonly("tau_q", &TransportCoefficients::tau_q)
      .def_readonly("kappa", &TransportCoefficients::kappa)
      .def_readonly("xi2", &TransportCoefficients::xi2);

  m.def("coefficients_from_xi2", &coefficients_from_xi2, py::arg("xi2"), py::arg("tau_q") = 1.0,
        py::arg("p") = 1.0);
  m.def("barothermal_B_microcanonical", &barothermal_B_microcanonical, py::arg("n_particles"));
  m.def("barothermal_B_heavy", &barothermal_B_heavy, py::arg("qs"));
  m.def(
      "heat_flux",
      [](const TransportCoefficients& tc, double rho, double theta, const Vec3& grad_theta, const Vec3& grad_p) {
        return heat_flux(tc, GasState(rho, theta), grad_theta, grad_p);
      },
      py::arg("coefficients"), py::arg("rho"), py::arg("theta"), py::arg("grad_theta"), py::arg("grad_p"));

  py::class_<FluxBundle>(m, "FluxBundle")
      .def_readonly("q", &FluxBundle::q)
      .def_readonly("j_m", &FluxBundle::j_m)
      .def_readonly("h", &FluxBundle::h)
      .def_readonly("j_e", &FluxBundle::j_e);

  py::class_<ObservabilityReport>(m, "ObservabilityReport")
      .def_readonly("flux", &ObservabilityReport::flux)
      .def_readonly("c_exact", &ObservabilityReport::c_exact)
      .def_readonly("c_scaling", &ObservabilityReport::c_scaling)
      .def_readonly("prandtl", &ObservabilityReport::prandtl)
      .def_readonly("nu", &ObservabilityReport::nu);

  m.def("channel_report", &channel_report, py::arg("xi2"), py::arg("rho") = 1.0, py::arg("theta") = 1.0,
        py::arg("mu") = 1.0, py::arg("l_h") = 1.0, py::arg("g_factor") = 1.0,
        py::arg("grad_p") = Vec3{1.0, 0.0, 0.0}, py::arg("tau_q") = 1.0, py::arg("h") = py::none());

  py::class_<FPSolution>(m, "FPSolution")
      .def_readonly("grid", &FPSolution::grid)
      .def_readonly("density", &FPSolution::density)
      .def_readonly("steps_taken", &FPSolution::steps_taken)
      .def_readonly("time", &FPSolution::time)
      .def_readonly("residual", &FPSolution::residual)
      .def_readonly("measured_xi2", &FPSolution::measured_xi2)
      .def_readonly("measured_theta", &FPSolution::measured_theta)
      .def_readonly("mass_drift", &FPSolution::mass_drift)
      .def_readonly("min_density", &FPSolution::min_density);

  m.def(
      "fp_relax",
      [](double qs, double theta, double gamma, int grid_points) {
        return relax_to_stationarity(make_fp_config(qs, theta, gamma, grid_points));
      },
      py::arg("qs"), py::arg("theta") = 1.0, py::arg("gamma") = 1.0, py::arg("grid_points") = 0,
      py::call_guard<py::gil_scoped_release>());
  m.def("stationary_diffusion", &stationary_diffusion, py::arg("qs"), py::arg("theta") = 1.0,
        py::arg("gamma") = 1.0);
}
