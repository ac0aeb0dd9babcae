#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "barotherm/weights.hpp"

namespace barotherm {

enum class MomentMethod { ClosedForm, Quadrature, MonteCarlo };

const char* to_string(MomentMethod method) noexcept;

/// Normalized second and fourth speed moments and the kurtosis-like ratio
/// xi2 = <c^4> / (theta <c^2>).
struct MomentReport {
  double c2 = 0.0;
  double c4 = 0.0;
  double xi2 = 0.0;
  MomentMethod method = MomentMethod::ClosedForm;
  double std_error = 0.0;  // nonzero only for Monte Carlo estimates
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// True when <c^order> of the weight is finite.
bool moment_is_finite(const ReferenceWeight& w, int order) noexcept;

/// Closed form of <c^order> for even order, from the radial Beta integrals.
/// Throws MomentDivergenceError when the moment is infinite.
double closed_form_moment(const ReferenceWeight& w, int order);

/// Upper bound on the integral of 4 pi c^{2+order} f(c) over c >= cutoff.
/// Returns +infinity when no bound is available at this cutoff.
double tail_bound(const ReferenceWeight& w, int order, double cutoff);

/// Integrates g(c) * 4 pi c^2 f(c) over the support of w.
///
/// The integrand is integrated panel by panel on a geometric grid in c. For
/// unbounded support the march stops once the analytic tail bound is below
/// rel_tol / 10 of the accumulated L1 norm; the caller guarantees
/// |g(c)| <= tail_scale * (c^2 / theta)^(tail_order / 2) for c^2 >= theta.
/// The tail bound is folded into error_estimate.
QuadratureResult integrate_speed(const ReferenceWeight& w, const std::function<double(double)>& g,
                                 int tail_order, double tail_scale, double rel_tol);

/// <c^order> by adaptive radial quadrature.
QuadratureResult radial_moment(const ReferenceWeight& w, int order, double rel_tol);

MomentReport xi2_closed_form(const ReferenceWeight& w);

/// Quadrature estimate of xi2, independent of the closed-form moment formulas.
/// rel_tol must lie in (0, 1e-2].
MomentReport xi2_quadrature(const ReferenceWeight& w, double rel_tol = 1e-10);

/// Number of jackknife blocks used by every Monte Carlo estimator.
inline constexpr int kJackknifeBlocks = 100;

/// Monte Carlo estimate from i.i.d. speeds drawn from the radial law of w.
/// Deterministic per (w, samples, seed) irrespective of worker count.
MomentReport xi2_monte_carlo(const ReferenceWeight& w, std::int64_t samples, std::uint64_t seed);

/// Draws speeds |c| from the radial law of w. Compact supports use an inverse
/// CDF over a tabulated cumulative; heavy tails use rejection against a
/// three-dimensional Cauchy envelope.
class SpeedSampler {
 public:
  explicit SpeedSampler(const ReferenceWeight& w);

  double operator()(std::mt19937_64& eng) const;

 private:
  enum class Mode { Gaussian, Tabulated, Rejection } mode_;
  double theta_ = 1.0;
  // Tabulated inverse CDF.
  std::vector<double> nodes_;
  std::vector<double> cdf_;
  // Rejection envelope.
  double tail_coeff_ = 0.0;
  double tail_exponent_ = 0.0;
  double envelope_scale2_ = 1.0;
  double log_envelope_max_ = 0.0;

  double log_acceptance(double c2) const;
  double inverse_cdf(double u) const;
};

/// Running sums of c^2 and c^4 over one block of samples.
struct BlockMoments {
  double count = 0.0;
  double sum_c2 = 0.0;
  double sum_c4 = 0.0;
};

/// Ratio estimator sum(c^4) / (theta sum(c^2)) with a leave-one-block-out
/// jackknife standard error.
MomentReport jackknife_xi2(std::span<const BlockMoments> blocks, double theta);

/// Per-block xi2 estimates, in block order.
std::vector<double> block_xi2(std::span<const BlockMoments> blocks, double theta);

/// Orthonormal polynomials in the variable c^2 under <g h> = int g h f d^3c.
struct OrthogonalBasis {
  int degree = 0;
  /// coefficients[k][j] multiplies (c^2)^j in P_k; row k has k + 1 entries.
  std::vector<std::vector<double>> coefficients;
  double gram_residual = 0.0;

  double evaluate(int k, double c2) const;
};

/// Gram-Schmidt (via Cholesky of the quadrature moment matrix) of
/// {1, c^2, ..., (c^2)^degree}. degree must lie in [0, 4]; the weight needs a
/// finite <c^{4 degree}>.
OrthogonalBasis build_orthogonal_basis(const ReferenceWeight& w, int degree);

}  // namespace barotherm
