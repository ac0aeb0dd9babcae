#pragma once

#include <string>
#include <vector>

namespace barotherm::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // observed deviation (or |z| for Monte Carlo checks)
  double tolerance = 0.0;  // pass iff value <= tolerance
  std::string detail;
};

/// Quadrature vs closed form, Monte Carlo vs closed form, FP stationarity and
/// channel reduction. `perturb_xi2` scales every closed-form xi2 reference by
/// (1 + perturb_xi2); a nonzero value is a fault-injection hook.
std::vector<CheckResult> run_oracle_battery(double perturb_xi2 = 0.0);

}  // namespace barotherm::cli
