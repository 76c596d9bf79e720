#include "geomedian/bootstrap.hpp"

#include "geomedian/csv.hpp"
#include "geomedian/error.hpp"
#include "geomedian/parallel.hpp"
#include "geomedian/rng.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace geomedian {
namespace {

rng::Family family_of(BootstrapTarget target) {
  return target == BootstrapTarget::SpatialMedian ? rng::Family::BootstrapMedian
                                                  : rng::Family::BootstrapMean;
}

void require_replicates(std::size_t B) {
  if (B < 1) throw Error(ErrorCode::InvalidArgument, "bootstrap needs B >= 1");
}

}  // namespace

std::string_view to_string(BootstrapTarget target) noexcept {
  return target == BootstrapTarget::SpatialMedian ? "SpatialMedian" : "Mean";
}

std::vector<double> replicate_signs(std::uint64_t seed, BootstrapTarget target,
                                    std::uint64_t replicate, Eigen::Index n) {
  rng::RademacherSource source(rng::substream(seed, family_of(target), replicate));
  std::vector<double> signs(static_cast<std::size_t>(n));
  for (auto& z : signs) z = source();
  return signs;
}

double multiplier_median_stat(const Eigen::Ref<const Matrix>& residuals,
                              std::span<const double> signs, const SolverConfig& config) {
  const Eigen::Index n = residuals.rows();
  const Eigen::Map<const Vector> z(signs.data(), n);
  const Matrix perturbed = z.asDiagonal() * residuals;
  // The multiplied mean is O(np) to form, unlike the coordinate-wise median,
  // and lies in the convex hull just as well.
  const Vector start = perturbed.transpose() * Vector::Constant(n, 1.0 / static_cast<double>(n));
  const auto solved = minimize_distance_sum(perturbed, config, start);
  return std::sqrt(static_cast<double>(n)) * max_norm(solved.minimizer);
}

double multiplier_mean_stat(const Eigen::Ref<const Matrix>& residuals,
                            std::span<const double> signs) {
  const Eigen::Index n = residuals.rows();
  const Eigen::Map<const Vector> z(signs.data(), n);
  const Vector mean = residuals.transpose() * z / static_cast<double>(n);
  return std::sqrt(static_cast<double>(n)) * max_norm(mean);
}

BootstrapDraws bootstrap_median_residuals(const Eigen::Ref<const Matrix>& residuals,
                                          std::size_t B, std::uint64_t seed,
                                          const SolverConfig& config, unsigned workers) {
  require_replicates(B);
  config.validate();
  BootstrapDraws draws{std::vector<double>(B), B, seed, BootstrapTarget::SpatialMedian,
                       residuals.rows()};
  parallel_for(B, workers, [&](std::size_t b) {
    const auto signs = replicate_signs(seed, BootstrapTarget::SpatialMedian, b, residuals.rows());
    try {
      draws.stats[b] = multiplier_median_stat(residuals, signs, config);
    } catch (const DidNotConverge& e) {
      throw DidNotConverge(e.iterations(), e.grad_norm(), b);
    }
  });
  return draws;
}

BootstrapDraws bootstrap_spatial_median(const Sample& sample, const SpatialMedianFit& fit,
                                        std::size_t B, std::uint64_t seed,
                                        const SolverConfig& config, unsigned workers) {
  if (fit.theta_hat.size() != sample.p()) {
    throw Error(ErrorCode::DimensionMismatch, "fit does not match the sample dimension");
  }
  const Matrix residuals = sample.values().rowwise() - fit.theta_hat.transpose();
  return bootstrap_median_residuals(residuals, B, seed, config, workers);
}

BootstrapDraws bootstrap_mean(const Sample& sample, std::size_t B, std::uint64_t seed,
                              unsigned workers) {
  require_replicates(B);
  const Matrix residuals = sample.values().rowwise() - sample.mean().transpose();
  BootstrapDraws draws{std::vector<double>(B), B, seed, BootstrapTarget::Mean, sample.n()};
  parallel_for(B, workers, [&](std::size_t b) {
    const auto signs = replicate_signs(seed, BootstrapTarget::Mean, b, sample.n());
    draws.stats[b] = multiplier_mean_stat(residuals, signs);
  });
  return draws;
}

double quantile(std::span<const double> stats, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidLevel, "quantile level must lie in (0, 1)");
  }
  if (stats.empty()) throw Error(ErrorCode::TooFewDraws, "quantile of an empty draw set");
  const auto B = static_cast<double>(stats.size());
  // The small offset keeps products like 0.95 * 100 from rounding up a rank.
  auto rank = static_cast<std::size_t>(std::ceil(level * B - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, stats.size());
  std::vector<double> sorted(stats.begin(), stats.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sorted.end());
  return sorted[rank - 1];
}

double quantile(const BootstrapDraws& draws, double level) { return quantile(draws.stats, level); }

double conditional_variance(const BootstrapDraws& draws) {
  if (draws.stats.size() < 2) {
    throw Error(ErrorCode::TooFewDraws, "conditional variance needs at least two draws");
  }
  const double scale = std::sqrt(static_cast<double>(draws.n));
  double mean = 0.0;
  for (const double s : draws.stats) mean += s / scale;
  mean /= static_cast<double>(draws.stats.size());
  double sum_sq = 0.0;
  for (const double s : draws.stats) {
    const double d = s / scale - mean;
    sum_sq += d * d;
  }
  return sum_sq / static_cast<double>(draws.stats.size() - 1);
}

void write_stats_csv(std::ostream& out, const BootstrapDraws& draws) {
  out << "stat\n";
  for (const double s : draws.stats) out << csv::format_real(s) << '\n';
}

}  // namespace geomedian
