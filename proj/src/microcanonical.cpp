#include "barotherm/microcanonical.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "barotherm/errors.hpp"
#include "barotherm/parallel.hpp"

namespace barotherm {

namespace {

constexpr std::int64_t kSamplesPerBlock = 1 << 14;
constexpr std::uint32_t kShellStream = 1;

}  // namespace

ShellSampler::ShellSampler(int n_particles, double theta, std::uint64_t seed)
    : n_(n_particles), theta_(theta), seed_(seed) {
  if (n_particles < 2) {
    throw DomainError("shell sampler needs n_particles >= 2, got " + std::to_string(n_particles));
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta must be positive");
  radius_ = std::sqrt(3.0 * n_particles * theta);
}

std::vector<Vec3> sample_one_particle(const ShellSampler& s, std::int64_t count) {
  if (count < 1) throw DomainError("sample count must be at least 1");
  std::vector<Vec3> out(static_cast<std::size_t>(count));
  const auto blocks = static_cast<int>((count + kSamplesPerBlock - 1) / kSamplesPerBlock);
  const int rest = 3 * s.n_particles() - 3;
  const double radius = s.radius();
  parallel_for(blocks, [&](int b) {
    auto eng = block_engine(s.seed(), static_cast<std::uint64_t>(b), kShellStream);
    std::normal_distribution<double> normal;
    const std::int64_t begin = b * kSamplesPerBlock;
    const std::int64_t end = std::min(count, begin + kSamplesPerBlock);
    for (std::int64_t i = begin; i < end; ++i) {
      const double x = normal(eng), y = normal(eng), z = normal(eng);
      double sumsq = x * x + y * y + z * z;
      for (int k = 0; k < rest; ++k) {
        const double v = normal(eng);
        sumsq += v * v;
      }
      const double scale = radius / std::sqrt(sumsq);
      out[static_cast<std::size_t>(i)] = {scale * x, scale * y, scale * z};
    }
  });
  return out;
}

std::vector<BlockMoments> block_moments(std::span<const Vec3> samples, int blocks) {
  std::vector<BlockMoments> out(static_cast<std::size_t>(blocks));
  const std::size_t n = samples.size();
  for (int b = 0; b < blocks; ++b) {
    const std::size_t begin = n * static_cast<std::size_t>(b) / static_cast<std::size_t>(blocks);
    const std::size_t end = n * static_cast<std::size_t>(b + 1) / static_cast<std::size_t>(blocks);
    BlockMoments acc;
    for (std::size_t i = begin; i < end; ++i) {
      const double c2 = dot(samples[i], samples[i]);
      acc.sum_c2 += c2;
      acc.sum_c4 += c2 * c2;
    }
    acc.count = static_cast<double>(end - begin);
    out[static_cast<std::size_t>(b)] = acc;
  }
  return out;
}

MomentReport empirical_xi2(std::span<const Vec3> samples, double theta) {
  if (samples.size() < 1000) {
    throw InsufficientDataError("empirical xi2 needs at least 1000 samples, got " +
                                std::to_string(samples.size()));
  }
  if (!(theta > 0.0)) throw DomainError("theta must be positive");
  const auto blocks = block_moments(samples, kJackknifeBlocks);
  return jackknife_xi2(blocks, theta);
}

GoodnessOfFit speed_histogram_test(std::span<const Vec3> samples, const ReferenceWeight& model,
                                   int bins) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  if (samples.empty()) throw InsufficientDataError("histogram needs samples");

  std::vector<double> speeds(samples.size());
  std::transform(samples.begin(), samples.end(), speeds.begin(),
                 [](const Vec3& v) { return norm(v); });
  const double top = model.compact_support()
                         ? model.support_radius()
                         : *std::max_element(speeds.begin(), speeds.end());
  const double width = top / bins;

  // Observed counts; index `bins` collects speeds above `top`.
  std::vector<double> observed(static_cast<std::size_t>(bins) + 1, 0.0);
  for (double c : speeds) {
    if (c > top) {
      observed.back() += 1.0;
      continue;
    }
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(c / width),
                                         static_cast<std::size_t>(bins) - 1);
    observed[i] += 1.0;
  }

  const double n = static_cast<double>(samples.size());
  boost::math::quadrature::tanh_sinh<double> integrator;
  const auto density = [&model](double c) { return model.radial_density(c); };
  std::vector<double> expected(observed.size(), 0.0);
  double inside = 0.0;
  for (int i = 0; i < bins; ++i) {
    const double a = i * width;
    const double b = (i + 1 == bins) ? top : (i + 1) * width;
    const double mass = integrator.integrate(density, a, b, 1e-12);
    expected[static_cast<std::size_t>(i)] = n * mass;
    inside += mass;
  }
  expected.back() = n * std::max(0.0, 1.0 - inside);

  // Merge runs of bins until each carries an expected count of at least 5.
  std::vector<std::pair<double, double>> merged;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= 5.0) {
      merged.emplace_back(o_acc, e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (o_acc > 0.0 || e_acc > 0.0) {
    if (merged.empty()) {
      merged.emplace_back(o_acc, e_acc);
    } else {
      merged.back().first += o_acc;
      merged.back().second += e_acc;
    }
  }

  GoodnessOfFit fit;
  for (const auto& [o, e] : merged) {
    fit.chi_square += e > 0.0 ? (o - e) * (o - e) / e : (o > 0.0 ? HUGE_VAL : 0.0);
  }
  fit.merged_bins = static_cast<int>(merged.size());
  fit.dof = fit.merged_bins - 1;
  return fit;
}

GoodnessOfFit marginal_pdf_check(const ShellSampler& s, int bins, std::int64_t count) {
  if (bins < 10) throw DomainError("marginal check needs at least 10 bins");
  if (count < 100000) throw InsufficientDataError("marginal check needs at least 1e5 samples");
  const auto samples = sample_one_particle(s, count);
  return speed_histogram_test(samples, make_microcanonical(s.n_particles(), s.theta()), bins);
}

}  // namespace barotherm
