#pragma once

// Isotropic local reference velocity weights in three dimensions.
//
// All weights are normalized to unit mass and carry a kinetic temperature
// theta = k_B T / m (velocity^2). The q-Gaussian family
//
//     f(c) = Z^{-1} [1 - (1 - q) c^2 / (2 beta^2)]_+^{1/(1 - q)}
//
// has its scale fixed by the second-moment constraint <c^2> = 3 theta, which
// gives beta^2 = theta (7 - 5 q) / 2. The Maxwellian is the q -> 1 limit and
// the microcanonical shell marginal of N particles is the member with
// q = (3N - 7) / (3N - 5).

#include <optional>

#include "barotherm/vec3.hpp"

namespace barotherm {

enum class WeightKind { Maxwellian, QGaussian, MicrocanonicalShell };

const char* to_string(WeightKind kind) noexcept;

/// Upper bound (exclusive) on q for which <c^4> is finite.
inline constexpr double kQsFourthMomentBound = 9.0 / 7.0;

/// |q - 1| below this threshold is evaluated with the exact Maxwellian formulas.
inline constexpr double kMaxwellianWindow = 1e-12;

/// Entropic index of the one-particle marginal of an N-particle energy shell.
double qs_from_particles(int n_particles);

class ReferenceWeight {
 public:
  WeightKind kind() const noexcept { return kind_; }
  double theta() const noexcept { return theta_; }

  /// Entropic index as given by the caller; empty unless kind is QGaussian.
  std::optional<double> qs() const noexcept { return qs_; }
  /// Particle count; empty unless kind is MicrocanonicalShell.
  std::optional<int> n_particles() const noexcept { return n_particles_; }

  /// Index actually used for evaluation: 1 for the Maxwellian, q(N) for a shell.
  double effective_qs() const noexcept { return q_; }
  /// True when evaluation dispatches to the Gaussian formulas.
  bool is_gaussian() const noexcept { return gaussian_; }
  bool compact_support() const noexcept { return !gaussian_ && q_ < 1.0; }

  double beta() const noexcept { return beta_; }
  double norm() const noexcept;
  double log_norm() const noexcept { return log_norm_; }

  /// Density at velocity c (velocity^-3).
  double pdf(const Vec3& c) const noexcept { return pdf_speed2(dot(c, c)); }
  /// Density as a function of c^2; exactly zero outside a compact support.
  double pdf_speed2(double c2) const noexcept;
  /// Speed density 4 pi c^2 f(c), normalized on [0, support_radius].
  double radial_density(double speed) const noexcept;

  /// Radius of the support ball, +infinity for unbounded support.
  double support_radius() const noexcept;

  friend ReferenceWeight make_maxwellian(double theta);
  friend ReferenceWeight make_qgaussian(double qs, double theta);
  friend ReferenceWeight make_microcanonical(int n_particles, double theta);

 private:
  ReferenceWeight(WeightKind kind, double theta, double q);

  WeightKind kind_;
  double theta_;
  std::optional<double> qs_;
  std::optional<int> n_particles_;
  double q_;
  bool gaussian_;
  double beta_;
  double log_norm_;
  // Shape constants: exponent 1/|1-q| and the c^2 coefficient (1-q)/(2 beta^2)
  // in absolute value.
  double exponent_ = 0.0;
  double coeff_ = 0.0;
};

ReferenceWeight make_maxwellian(double theta);
ReferenceWeight make_qgaussian(double qs, double theta);
ReferenceWeight make_microcanonical(int n_particles, double theta);

inline double pdf(const ReferenceWeight& w, const Vec3& c) noexcept { return w.pdf(c); }
inline double support_radius(const ReferenceWeight& w) noexcept { return w.support_radius(); }

/// Closed-form scale beta^2 = theta (7 - 5 q) / 2.
double beta_squared(double qs, double theta);

}  // namespace barotherm
