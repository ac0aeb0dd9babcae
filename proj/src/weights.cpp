#include "barotherm/weights.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "barotherm/errors.hpp"

namespace barotherm {

namespace {

void require_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("theta must be positive and finite, got " + std::to_string(theta));
  }
}

// log B(3/2, x) for x > 0, stable for very large x.
double log_beta_three_halves(double x) {
  using boost::math::tgamma_delta_ratio;
  return std::lgamma(1.5) + std::log(tgamma_delta_ratio(x, 1.5));
}

}  // namespace

const char* to_string(WeightKind kind) noexcept {
  switch (kind) {
    case WeightKind::Maxwellian:
      return "maxwellian";
    case WeightKind::QGaussian:
      return "qgaussian";
    case WeightKind::MicrocanonicalShell:
      return "microcanonical";
  }
  return "unknown";
}

double qs_from_particles(int n_particles) {
  if (n_particles < 2) {
    throw DomainError("microcanonical shell needs n_particles >= 2, got " +
                      std::to_string(n_particles));
  }
  const double n = n_particles;
  return (3.0 * n - 7.0) / (3.0 * n - 5.0);
}

double beta_squared(double qs, double theta) { return theta * (7.0 - 5.0 * qs) / 2.0; }

ReferenceWeight::ReferenceWeight(WeightKind kind, double theta, double q)
    : kind_(kind), theta_(theta), q_(q) {
  gaussian_ = std::abs(q - 1.0) < kMaxwellianWindow;
  if (gaussian_) {
    beta_ = std::sqrt(theta);
    log_norm_ = 1.5 * std::log(2.0 * std::numbers::pi * theta);
    return;
  }
  const double beta2 = beta_squared(q, theta);
  beta_ = std::sqrt(beta2);
  const double dq = std::abs(1.0 - q);
  exponent_ = 1.0 / dq;
  coeff_ = dq / (2.0 * beta2);
  // Z = 2 pi coeff^{-3/2} B(3/2, n + 1) on the compact side and
  // Z = 2 pi coeff^{-3/2} B(3/2, s - 3/2) on the heavy-tailed side.
  const double beta_arg = q < 1.0 ? exponent_ + 1.0 : exponent_ - 1.5;
  log_norm_ = std::log(2.0 * std::numbers::pi) - 1.5 * std::log(coeff_) +
              log_beta_three_halves(beta_arg);
}

double ReferenceWeight::norm() const noexcept { return std::exp(log_norm_); }

double ReferenceWeight::pdf_speed2(double c2) const noexcept {
  if (gaussian_) return std::exp(-c2 / (2.0 * theta_) - log_norm_);
  const double x = coeff_ * c2;
  if (q_ < 1.0) {
    if (x >= 1.0) return 0.0;
    return std::exp(exponent_ * std::log1p(-x) - log_norm_);
  }
  return std::exp(-exponent_ * std::log1p(x) - log_norm_);
}

double ReferenceWeight::radial_density(double speed) const noexcept {
  const double c2 = speed * speed;
  return 4.0 * std::numbers::pi * c2 * pdf_speed2(c2);
}

double ReferenceWeight::support_radius() const noexcept {
  if (!compact_support()) return std::numeric_limits<double>::infinity();
  return std::sqrt(1.0 / coeff_);
}

ReferenceWeight make_maxwellian(double theta) {
  require_theta(theta);
  return ReferenceWeight(WeightKind::Maxwellian, theta, 1.0);
}

ReferenceWeight make_qgaussian(double qs, double theta) {
  require_theta(theta);
  if (std::isnan(qs)) throw DomainError("qs must be a number");
  if (qs >= kQsFourthMomentBound) {
    throw MomentDivergenceError(4, "fourth moment diverges for qs >= 9/7 (got qs = " +
                                       std::to_string(qs) + ")");
  }
  if (!std::isfinite(qs)) throw DomainError("qs must be finite");
  ReferenceWeight w(WeightKind::QGaussian, theta, qs);
  w.qs_ = qs;
  return w;
}

ReferenceWeight make_microcanonical(int n_particles, double theta) {
  const double q = qs_from_particles(n_particles);
  require_theta(theta);
  ReferenceWeight w(WeightKind::MicrocanonicalShell, theta, q);
  w.n_particles_ = n_particles;
  return w;
}

}  // namespace barotherm
