#pragma once

// Brute-force sampling of an ideal gas on a fixed total kinetic-energy shell,
// sum_i |v_i|^2 = 3 N theta, and the one-particle marginal it induces.

#include <cstdint>
#include <span>
#include <vector>

#include "barotherm/moments.hpp"
#include "barotherm/vec3.hpp"
#include "barotherm/weights.hpp"

namespace barotherm {

class ShellSampler {
 public:
  ShellSampler(int n_particles, double theta, std::uint64_t seed);

  int n_particles() const noexcept { return n_; }
  double theta() const noexcept { return theta_; }
  std::uint64_t seed() const noexcept { return seed_; }
  /// Shell radius R, R^2 = 3 N theta.
  double radius() const noexcept { return radius_; }

 private:
  int n_;
  double theta_;
  std::uint64_t seed_;
  double radius_;
};

/// Velocities of particle 1 for `count` independent uniform points on the
/// 3N-dimensional shell (normalized isotropic Gaussian draws). Sampling is
/// split into fixed blocks with their own engines, so the output depends only
/// on (sampler, count).
std::vector<Vec3> sample_one_particle(const ShellSampler& s, std::int64_t count);

/// Plug-in xi2 = mean(c^4) / (theta mean(c^2)) with a jackknife error over
/// kJackknifeBlocks contiguous blocks. Needs at least 1000 samples.
MomentReport empirical_xi2(std::span<const Vec3> samples, double theta);

/// Per-block moments of contiguous blocks, for reporting.
std::vector<BlockMoments> block_moments(std::span<const Vec3> samples, int blocks);

struct GoodnessOfFit {
  double chi_square = 0.0;
  int dof = 0;
  int merged_bins = 0;  // bins left after merging those with expected count < 5

  double per_dof() const noexcept { return dof > 0 ? chi_square / dof : 0.0; }
};

/// Chi-square comparison of the histogram of |c| (equal-width bins over the
/// support, or over [0, max sample] for unbounded models) against the radial
/// law of `model`.
GoodnessOfFit speed_histogram_test(std::span<const Vec3> samples, const ReferenceWeight& model,
                                   int bins);

/// Samples the shell and tests the speeds against the q(N)-Gaussian marginal.
GoodnessOfFit marginal_pdf_check(const ShellSampler& s, int bins, std::int64_t count);

}  // namespace barotherm
