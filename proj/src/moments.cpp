#include "barotherm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "barotherm/errors.hpp"
#include "barotherm/parallel.hpp"

namespace barotherm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFourPi = 4.0 * std::numbers::pi;

// Panels of the radial march stop growing at this multiple of the weight scale.
constexpr double kMaxCutoffScale = 1e15;
// A moment whose index sits this close to its divergence threshold is refused.
constexpr double kDivergenceMargin = 1e-3;

// Shape constants of a non-Gaussian weight, f = Z^{-1} (1 -/+ coeff c^2)^{+/-exponent}.
struct Shape {
  double exponent;
  double coeff;
};

Shape shape_of(const ReferenceWeight& w) {
  const double dq = std::abs(1.0 - w.effective_qs());
  return {1.0 / dq, dq / (2.0 * w.beta() * w.beta())};
}

// Index above which <c^order> is infinite on the heavy-tailed side.
double divergence_index(int order) { return 1.0 + 2.0 / (3.0 + order); }

boost::math::quadrature::tanh_sinh<double>& endpoint_integrator() {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator;
}

}  // namespace

const char* to_string(MomentMethod method) noexcept {
  switch (method) {
    case MomentMethod::ClosedForm:
      return "closed_form";
    case MomentMethod::Quadrature:
      return "quadrature";
    case MomentMethod::MonteCarlo:
      return "monte_carlo";
  }
  return "unknown";
}

bool moment_is_finite(const ReferenceWeight& w, int order) noexcept {
  if (w.is_gaussian() || w.compact_support()) return true;
  return w.effective_qs() < divergence_index(order);
}

double closed_form_moment(const ReferenceWeight& w, int order) {
  using boost::math::tgamma_delta_ratio;
  if (order < 0) throw DomainError("moment order must be nonnegative");
  if (!moment_is_finite(w, order)) {
    throw MomentDivergenceError(order, "moment <c^" + std::to_string(order) +
                                           "> diverges for qs = " +
                                           std::to_string(w.effective_qs()));
  }
  const double k = 0.5 * order;
  // Gamma(3/2 + k) / Gamma(3/2)
  const double rise = 1.0 / tgamma_delta_ratio(1.5, k);
  if (w.is_gaussian()) return std::pow(2.0 * w.theta(), k) * rise;
  const Shape sh = shape_of(w);
  if (w.compact_support()) {
    return std::pow(sh.coeff, -k) * rise * tgamma_delta_ratio(sh.exponent + 2.5, k);
  }
  return std::pow(sh.coeff, -k) * rise * tgamma_delta_ratio(sh.exponent - 1.5 - k, k);
}

double tail_bound(const ReferenceWeight& w, int order, double cutoff) {
  const double power = 2.0 + order;
  const double log_pref = std::log(kFourPi) - w.log_norm();
  if (w.is_gaussian()) {
    const double theta = w.theta();
    const double c2 = cutoff * cutoff;
    if (c2 <= theta * (power - 1.0)) return kInf;
    // Integration by parts: I <= theta C^{k-1} e^{-C^2/2theta} / (1 - theta (k-1) / C^2).
    const double log_t = log_pref + std::log(theta) + (power - 1.0) * std::log(cutoff) -
                         c2 / (2.0 * theta) - std::log1p(-theta * (power - 1.0) / c2);
    return std::exp(log_t);
  }
  const Shape sh = shape_of(w);
  if (w.compact_support()) {
    const double radius = w.support_radius();
    if (cutoff >= radius) return 0.0;
    const double log_t = log_pref + sh.exponent * std::log1p(-sh.coeff * cutoff * cutoff) +
                         (power + 1.0) * std::log(radius) - std::log(power + 1.0);
    return std::exp(log_t);
  }
  // (1 + b c^2)^{-s} <= (1 + b C^2)^{-s} (C / c)^{2 s kappa}, kappa = b C^2 / (1 + b C^2).
  const double x = sh.coeff * cutoff * cutoff;
  const double decay = 2.0 * sh.exponent * x / (1.0 + x) - (power + 1.0);
  if (!(decay > 0.0)) return kInf;
  const double log_t = log_pref - sh.exponent * std::log1p(x) + (power + 1.0) * std::log(cutoff) -
                       std::log(decay);
  return std::exp(log_t);
}

QuadratureResult integrate_speed(const ReferenceWeight& w, const std::function<double(double)>& g,
                                 int tail_order, double tail_scale, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  if (!(rel_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  if (!moment_is_finite(w, tail_order)) {
    throw MomentDivergenceError(tail_order, "moment <c^" + std::to_string(tail_order) +
                                                "> diverges for qs = " +
                                                std::to_string(w.effective_qs()));
  }
  if (!w.is_gaussian() && !w.compact_support() &&
      w.effective_qs() > divergence_index(tail_order) - kDivergenceMargin) {
    throw MomentDivergenceError(tail_order, "moment <c^" + std::to_string(tail_order) +
                                                "> is too close to divergence at qs = " +
                                                std::to_string(w.effective_qs()));
  }

  const auto integrand = [&](double c) { return g(c) * w.radial_density(c); };
  const double panel_tol = std::max(rel_tol * 1e-3, 1e-15);
  const double theta = w.theta();
  const double scale = w.beta();
  const double radius = w.support_radius();
  const double tail_norm = tail_scale / std::pow(theta, 0.5 * tail_order);

  QuadratureResult out;
  double l1 = 0.0;
  double lo = 0.0;
  double hi = scale;
  for (;;) {
    const double top = std::min(hi, radius);
    double err = 0.0;
    double panel_l1 = 0.0;
    double value = 0.0;
    if (top == radius) {
      value = endpoint_integrator().integrate(integrand, lo, top, panel_tol, &err, &panel_l1);
    } else {
      value = gauss_kronrod<double, 31>::integrate(integrand, lo, top, 15, panel_tol, &err,
                                                   &panel_l1);
    }
    out.value += value;
    out.error_estimate += err;
    l1 += panel_l1;
    if (top == radius) break;

    if (hi * hi >= theta) {
      const double bound = tail_norm * tail_bound(w, tail_order, hi);
      if (bound <= 0.1 * rel_tol * l1) {
        out.error_estimate += bound;
        break;
      }
    }
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxCutoffScale * scale) {
      throw MomentDivergenceError(tail_order, "tail of <c^" + std::to_string(tail_order) +
                                                  "> decays too slowly to meet the tolerance "
                                                  "(moment near divergence at qs = " +
                                                  std::to_string(w.effective_qs()) + ")");
    }
  }
  return out;
}

QuadratureResult radial_moment(const ReferenceWeight& w, int order, double rel_tol) {
  const double p = order;
  return integrate_speed(
      w, [p](double c) { return std::pow(c, p); }, order, 1.0, rel_tol);
}

MomentReport xi2_closed_form(const ReferenceWeight& w) {
  MomentReport r;
  r.method = MomentMethod::ClosedForm;
  r.c2 = 3.0 * w.theta();
  if (w.kind() == WeightKind::MicrocanonicalShell) {
    const double n = *w.n_particles();
    r.xi2 = 15.0 * n / (3.0 * n + 2.0);
  } else if (w.is_gaussian()) {
    r.xi2 = 5.0;
  } else {
    const double q = w.effective_qs();
    r.xi2 = 5.0 * (7.0 - 5.0 * q) / (9.0 - 7.0 * q);
  }
  r.c4 = r.xi2 * w.theta() * r.c2;
  return r;
}

MomentReport xi2_quadrature(const ReferenceWeight& w, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
    throw DomainError("quadrature tolerance must lie in (0, 1e-2]");
  }
  MomentReport r;
  r.method = MomentMethod::Quadrature;
  r.c4 = radial_moment(w, 4, 0.1 * rel_tol).value;
  r.c2 = radial_moment(w, 2, 0.1 * rel_tol).value;
  r.xi2 = r.c4 / (w.theta() * r.c2);
  return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {
constexpr int kCdfCells = 8192;
}

SpeedSampler::SpeedSampler(const ReferenceWeight& w) : theta_(w.theta()) {
  if (w.is_gaussian()) {
    mode_ = Mode::Gaussian;
    return;
  }
  if (w.compact_support()) {
    mode_ = Mode::Tabulated;
    const double radius = w.support_radius();
    const double h = radius / kCdfCells;
    nodes_.resize(kCdfCells + 1);
    cdf_.resize(kCdfCells + 1);
    cdf_[0] = 0.0;
    nodes_[0] = 0.0;
    const auto density = [&w](double c) { return w.radial_density(c); };
    for (int i = 0; i < kCdfCells; ++i) {
      const double a = i * h;
      const double b = (i + 1 == kCdfCells) ? radius : (i + 1) * h;
      nodes_[i + 1] = b;
      cdf_[i + 1] = cdf_[i] + boost::math::quadrature::gauss<double, 15>::integrate(density, a, b);
    }
    const double total = cdf_.back();
    for (double& v : cdf_) v /= total;
    cdf_.back() = 1.0;
    return;
  }
  mode_ = Mode::Rejection;
  const Shape sh = shape_of(w);
  tail_coeff_ = sh.coeff;
  tail_exponent_ = sh.exponent;
  envelope_scale2_ = w.beta() * w.beta();
  // Maximum of (1 + y / sigma^2)^2 (1 + b y)^{-s} over y = c^2 >= 0.
  const double sb = tail_exponent_ * tail_coeff_;
  const double y_star = (2.0 - sb * envelope_scale2_) / (tail_coeff_ * (tail_exponent_ - 2.0));
  log_envelope_max_ = 0.0;
  if (y_star > 0.0) {
    log_envelope_max_ = 2.0 * std::log1p(y_star / envelope_scale2_) -
                        tail_exponent_ * std::log1p(tail_coeff_ * y_star);
  }
}

double SpeedSampler::log_acceptance(double c2) const {
  return 2.0 * std::log1p(c2 / envelope_scale2_) - tail_exponent_ * std::log1p(tail_coeff_ * c2) -
         log_envelope_max_;
}

double SpeedSampler::inverse_cdf(double u) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t i = static_cast<std::size_t>(std::distance(cdf_.begin(), it));
  i = std::clamp<std::size_t>(i, 1, cdf_.size() - 1) - 1;
  const double width = cdf_[i + 1] - cdf_[i];
  const double frac = width > 0.0 ? (u - cdf_[i]) / width : 0.0;
  return nodes_[i] + frac * (nodes_[i + 1] - nodes_[i]);
}

double SpeedSampler::operator()(std::mt19937_64& eng) const {
  switch (mode_) {
    case Mode::Gaussian: {
      std::normal_distribution<double> normal;
      const double x = normal(eng), y = normal(eng), z = normal(eng);
      return std::sqrt(theta_ * (x * x + y * y + z * z));
    }
    case Mode::Tabulated: {
      std::uniform_real_distribution<double> uniform;
      return inverse_cdf(uniform(eng));
    }
    case Mode::Rejection: {
      std::normal_distribution<double> normal;
      std::uniform_real_distribution<double> uniform;
      for (;;) {
        const double x = normal(eng), y = normal(eng), z = normal(eng);
        const double v = normal(eng);
        if (v == 0.0) continue;
        const double c2 = envelope_scale2_ * (x * x + y * y + z * z) / (v * v);
        if (std::log(uniform(eng)) < log_acceptance(c2)) return std::sqrt(c2);
      }
    }
  }
  return 0.0;
}

MomentReport jackknife_xi2(std::span<const BlockMoments> blocks, double theta) {
  BlockMoments total;
  for (const auto& b : blocks) {
    total.count += b.count;
    total.sum_c2 += b.sum_c2;
    total.sum_c4 += b.sum_c4;
  }
  MomentReport r;
  r.method = MomentMethod::MonteCarlo;
  r.c2 = total.sum_c2 / total.count;
  r.c4 = total.sum_c4 / total.count;
  r.xi2 = r.c4 / (theta * r.c2);
  const std::size_t nb = blocks.size();
  if (nb < 2) return r;
  std::vector<double> loo(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    loo[i] = (total.sum_c4 - blocks[i].sum_c4) / (theta * (total.sum_c2 - blocks[i].sum_c2));
  }
  const double mean = std::accumulate(loo.begin(), loo.end(), 0.0) / static_cast<double>(nb);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  r.std_error = std::sqrt(ss * static_cast<double>(nb - 1) / static_cast<double>(nb));
  return r;
}

std::vector<double> block_xi2(std::span<const BlockMoments> blocks, double theta) {
  std::vector<double> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(b.sum_c4 / (theta * b.sum_c2));
  return out;
}

MomentReport xi2_monte_carlo(const ReferenceWeight& w, std::int64_t samples, std::uint64_t seed) {
  if (samples < 1000) {
    throw InsufficientDataError("Monte Carlo moments need at least 1000 samples");
  }
  const SpeedSampler sampler(w);
  std::vector<BlockMoments> blocks(kJackknifeBlocks);
  const std::int64_t per_block = samples / kJackknifeBlocks;
  const std::int64_t extra = samples % kJackknifeBlocks;
  parallel_for(kJackknifeBlocks, [&](int b) {
    auto eng = block_engine(seed, static_cast<std::uint64_t>(b));
    const std::int64_t n = per_block + (b < extra ? 1 : 0);
    BlockMoments acc;
    for (std::int64_t i = 0; i < n; ++i) {
      const double c = sampler(eng);
      const double c2 = c * c;
      acc.sum_c2 += c2;
      acc.sum_c4 += c2 * c2;
    }
    acc.count = static_cast<double>(n);
    blocks[static_cast<std::size_t>(b)] = acc;
  });
  return jackknife_xi2(blocks, w.theta());
}

// ---------------------------------------------------------------------------
// Orthogonal radial basis

double OrthogonalBasis::evaluate(int k, double c2) const {
  const auto& row = coefficients.at(static_cast<std::size_t>(k));
  double acc = 0.0;
  for (auto it = row.rbegin(); it != row.rend(); ++it) acc = acc * c2 + *it;
  return acc;
}

OrthogonalBasis build_orthogonal_basis(const ReferenceWeight& w, int degree) {
  if (degree < 0 || degree > 4) throw DomainError("basis degree must lie in [0, 4]");
  const int top_order = 4 * degree;
  if (!moment_is_finite(w, top_order)) {
    throw MomentDivergenceError(top_order, "degree " + std::to_string(degree) +
                                               " basis needs a finite <c^" +
                                               std::to_string(top_order) + ">, which diverges for qs = " +
                                               std::to_string(w.effective_qs()));
  }
  const double theta = w.theta();
  const std::size_t n = static_cast<std::size_t>(degree) + 1;

  // Moments of x = c^2 / theta; mu_0 = 1 for a normalized weight.
  std::vector<double> mu(2 * n - 1, 1.0);
  for (std::size_t k = 1; k < mu.size(); ++k) {
    mu[k] = radial_moment(w, static_cast<int>(2 * k), 1e-13).value / std::pow(theta, double(k));
  }

  // Cholesky of the Hankel matrix H_ij = mu_{i+j}.
  std::vector<std::vector<double>> chol(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = mu[i + j];
      for (std::size_t k = 0; k < j; ++k) s -= chol[i][k] * chol[j][k];
      if (i == j) {
        if (!(s > 0.0)) throw DomainError("moment matrix is not positive definite");
        chol[i][i] = std::sqrt(s);
      } else {
        chol[i][j] = s / chol[j][j];
      }
    }
  }
  // Rows of L^{-1} are the orthonormal polynomials in x.
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    inv[i][i] = 1.0 / chol[i][i];
    for (std::size_t j = 0; j < i; ++j) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s += chol[i][k] * inv[k][j];
      inv[i][j] = -s / chol[i][i];
    }
  }

  OrthogonalBasis basis;
  basis.degree = degree;
  basis.coefficients.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    basis.coefficients[k].resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
      basis.coefficients[k][j] = inv[k][j] / std::pow(theta, double(j));
    }
  }

  // Gram matrix by direct quadrature of the products, normalized by the
  // quadrature mass so that <P_0 P_0> is exactly one.
  const auto eval_x = [&inv](std::size_t k, double x) {
    double acc = 0.0;
    for (std::size_t j = k + 1; j-- > 0;) acc = acc * x + inv[k][j];
    return acc;
  };
  const auto abs_sum = [&inv](std::size_t k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= k; ++j) s += std::abs(inv[k][j]);
    return s;
  };
  const double mass = integrate_speed(w, [](double) { return 1.0; }, 0, 1.0, 1e-13).value;
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const auto product = [&, i, j](double c) {
        const double x = c * c / theta;
        return eval_x(i, x) * eval_x(j, x);
      };
      const double g = integrate_speed(w, product, static_cast<int>(2 * (i + j)),
                                       abs_sum(i) * abs_sum(j), 1e-13)
                           .value /
                       mass;
      residual = std::max(residual, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  basis.gram_residual = residual;
  return basis;
}

}  // namespace barotherm
