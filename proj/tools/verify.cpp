#include "verify.hpp"

#include <cmath>
#include <random>

#include "barotherm/channel.hpp"
#include "barotherm/errors.hpp"
#include "barotherm/fokker_planck.hpp"
#include "barotherm/microcanonical.hpp"
#include "barotherm/moments.hpp"
#include "barotherm/transport.hpp"
#include "format.hpp"

namespace barotherm::cli {

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

class Battery {
 public:
  explicit Battery(double perturb) : perturb_(perturb) {}

  double reference_xi2(const ReferenceWeight& w) const {
    return xi2_closed_form(w).xi2 * (1.0 + perturb_);
  }

  void add(std::string name, double value, double tolerance, std::string detail = {}) {
    const bool ok = std::isfinite(value) && value <= tolerance;
    results_.push_back({std::move(name), ok, value, tolerance, std::move(detail)});
  }

  // Runs `body`; any exception is a failed check carrying the message.
  template <class F>
  void guarded(const std::string& name, double tolerance, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      results_.push_back({name, false, HUGE_VAL, tolerance, e.what()});
    }
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  double perturb_;
  std::vector<CheckResult> results_;
};

void quadrature_checks(Battery& b) {
  for (double q : {-2.0, -1.0, 0.0, 0.5, 0.9, 1.1, 1.25}) {
    const std::string name = "quadrature_vs_closed_form qs=" + shortest(q);
    b.guarded(name, 1e-8, [&] {
      const auto w = make_qgaussian(q, 1.0);
      const double quad = xi2_quadrature(w).xi2;
      b.add(name, rel_diff(quad, b.reference_xi2(w)), 1e-8, "xi2=" + shortest(quad));
    });
  }
  b.guarded("maxwellian_closed_form", 0.0, [&] {
    const double xi2 = b.reference_xi2(make_maxwellian(1.0));
    const auto tc = coefficients_from_xi2(xi2);
    b.add("maxwellian_closed_form", std::abs(xi2 - 5.0) + std::abs(tc.B), 0.0,
          "xi2=" + shortest(xi2) + " B=" + shortest(tc.B));
  });
  b.guarded("maxwellian_quadrature", 1e-8, [&] {
    const double quad = xi2_quadrature(make_maxwellian(1.0)).xi2;
    b.add("maxwellian_quadrature", std::abs(quad - 5.0), 1e-8, "xi2=" + shortest(quad));
  });
}

void microcanonical_checks(Battery& b) {
  for (int n : {2, 3, 5, 10, 100}) {
    const std::string name = "microcanonical_chain N=" + std::to_string(n);
    b.guarded(name, 1e-14, [&] {
      const double ref = b.reference_xi2(make_microcanonical(n, 1.0));
      const double via_q = xi2_closed_form(make_qgaussian(qs_from_particles(n), 1.0)).xi2;
      const double b_chain = coefficients_from_xi2(via_q).B;
      // B = A - 1 cancels for large N, so its error is measured on the scale of A.
      const double dev = std::max(rel_diff(via_q, ref),
                                  std::abs(b_chain - barothermal_B_microcanonical(n)));
      b.add(name, dev, 1e-14, "xi2=" + shortest(via_q) + " B=" + shortest(b_chain));
    });
  }
  for (int n : {2, 5, 10}) {
    const std::string name = "shell_monte_carlo N=" + std::to_string(n);
    b.guarded(name, 4.0, [&] {
      const ShellSampler s(n, 1.0, 20240 + static_cast<std::uint64_t>(n));
      const auto samples = sample_one_particle(s, 200'000);
      const auto rep = empirical_xi2(samples, 1.0);
      const double z = (rep.xi2 - b.reference_xi2(make_microcanonical(n, 1.0))) / rep.std_error;
      b.add(name, std::abs(z), 4.0, "xi2=" + shortest(rep.xi2) + " z=" + significant(z, 3));
    });
  }
  for (double q : {-1.0, 0.5, 1.1}) {
    const std::string name = "qgaussian_monte_carlo qs=" + shortest(q);
    b.guarded(name, 4.0, [&] {
      const auto w = make_qgaussian(q, 1.0);
      const auto rep = xi2_monte_carlo(w, 400'000, 777);
      const double z = (rep.xi2 - b.reference_xi2(w)) / rep.std_error;
      b.add(name, std::abs(z), 4.0, "xi2=" + shortest(rep.xi2) + " z=" + significant(z, 3));
    });
  }
}

void heavy_tail_checks(Battery& b) {
  b.guarded("heavy_tail_B", 1e-13, [&] {
    double worst = 0.0;
    bool positive = true;
    const double hi = kQsFourthMomentBound;
    for (int i = 1; i <= 50; ++i) {
      const double q = 1.0 + (hi - 1.0) * i / 51.0;
      const double direct = barothermal_B_heavy(q);
      const double via_xi2 = (b.reference_xi2(make_qgaussian(q, 1.0)) - 5.0) / 5.0;
      worst = std::max(worst, rel_diff(via_xi2, direct));
      positive = positive && direct > 0.0;
    }
    b.add("heavy_tail_B", positive ? worst : HUGE_VAL, 1e-13, positive ? "" : "B <= 0 somewhere");
  });
  b.guarded("divergence_guard qs=1.3", 0.0, [&] {
    bool threw = false;
    try {
      (void)make_qgaussian(1.3, 1.0);
    } catch (const MomentDivergenceError&) {
      threw = true;
    }
    b.add("divergence_guard qs=1.3", threw ? 0.0 : 1.0, 0.0, threw ? "" : "no error raised");
  });
}

void fokker_planck_checks(Battery& b) {
  b.guarded("fp_residual_order qs=1", 0.25, [&] {
    const auto w = make_qgaussian(1.0, 1.0);
    double res[3];
    int k = 0;
    for (int m : {64, 128, 256}) {
      auto cfg = make_fp_config(1.0, 1.0, 1.0, m);
      cfg.diffusion = stationary_diffusion(1.0, 1.0, 1.0);
      res[k++] = stationary_residual(sample_profile(w, cfg), cfg);
    }
    const double order = 0.5 * std::log2(res[0] / res[2]);
    b.add("fp_residual_order qs=1", std::abs(order - 2.0), 0.25, "order=" + significant(order, 3));
  });
  for (double q : {0.5, 1.0}) {
    const std::string name = "fp_relaxation qs=" + shortest(q);
    b.guarded(name, 0.01, [&] {
      const auto sol = relax_to_stationarity(make_fp_config(q, 1.0));
      const double err = rel_diff(sol.measured_xi2, b.reference_xi2(make_qgaussian(q, 1.0)));
      b.add(name, err, 0.01, "xi2=" + shortest(sol.measured_xi2));
    });
  }
}

ChannelScenario random_scenario(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto logu = [&](double decades) { return std::pow(10.0, decades * u(eng)); };
  ChannelScenario s;
  s.gas = GasState(logu(2), logu(2));
  std::uniform_int_distribution<int> pick(0, 2);
  switch (pick(eng)) {
    case 0: s.tc = coefficients_from_xi2(15.0 * 7 / (3.0 * 7 + 2), logu(1), s.gas.p()); break;
    case 1: s.tc = coefficients_from_xi2(5.0 + 4.9 * u(eng), logu(1), s.gas.p()); break;
    default: {
      const double q = 1.0 + 0.25 * (0.5 + 0.5 * u(eng));
      s.tc = coefficients_from_xi2(5.0 * (7 - 5 * q) / (9 - 7 * q), logu(1), s.gas.p());
    }
  }
  s.mu = logu(2);
  s.l_h = logu(3);
  s.g_factor = logu(1);
  s.grad_p = {u(eng), u(eng), u(eng)};
  return s;
}

void channel_checks(Battery& b) {
  b.guarded("channel_reduction", 1e-12, [&] {
    std::mt19937_64 eng(4242);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto s = random_scenario(eng);
      const auto r = observability(s);
      if (s.tc.B != 0.0) worst = std::max(worst, rel_diff(r.c_exact, r.c_scaling));
    }
    b.add("channel_reduction", worst, 1e-12);
  });
  b.guarded("channel_length_scaling", 1e-12, [&] {
    ChannelScenario s;
    s.tc = coefficients_from_xi2(xi2_closed_form(make_microcanonical(2, 1.0)).xi2);
    const auto near = observability(s);
    s.l_h = 10.0;
    const auto far = observability(s);
    const double dev = std::max(rel_diff(near.c_exact / far.c_exact, 100.0),
                                rel_diff(near.c_scaling / far.c_scaling, 100.0));
    b.add("channel_length_scaling", dev, 1e-12);
  });
}

}  // namespace

std::vector<CheckResult> run_oracle_battery(double perturb_xi2) {
  Battery b(perturb_xi2);
  quadrature_checks(b);
  microcanonical_checks(b);
  heavy_tail_checks(b);
  fokker_planck_checks(b);
  channel_checks(b);
  return b.take();
}

}  // namespace barotherm::cli
