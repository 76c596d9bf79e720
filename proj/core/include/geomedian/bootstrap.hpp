#pragma once

#include "geomedian/data_model.hpp"
#include "geomedian/estimator.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace geomedian {

/// Law of the multipliers Z_1..Z_n. Rademacher: +-1 with probability 1/2.
enum class MultiplierScheme { Rademacher };

enum class BootstrapTarget { SpatialMedian, Mean };

std::string_view to_string(BootstrapTarget target) noexcept;

/// B replicate statistics sqrt(n) |theta_tilde^(b)|_inf (or the mean
/// analogue), indexed by replicate.
struct BootstrapDraws {
  std::vector<double> stats;
  std::size_t B = 0;
  std::uint64_t seed = 0;
  BootstrapTarget target = BootstrapTarget::SpatialMedian;
  /// Sample size, needed to undo the sqrt(n) scaling.
  Eigen::Index n = 0;
};

/// Default replicate count for simulations and interactive use.
inline constexpr std::size_t kDefaultBootstrapReplicates = 400;

/// Multipliers for replicate `replicate`: n Rademacher signs from
/// substream(seed, family(target), replicate). Independent of how replicates
/// are scheduled.
std::vector<double> replicate_signs(std::uint64_t seed, BootstrapTarget target,
                                    std::uint64_t replicate, Eigen::Index n);

/// sqrt(n) |argmin_b sum_i ||z_i r_i - b|| |_inf for one sign vector.
double multiplier_median_stat(const Eigen::Ref<const Matrix>& residuals,
                              std::span<const double> signs, const SolverConfig& config = {});

/// sqrt(n) |n^-1 sum_i z_i r_i|_inf for one sign vector.
double multiplier_mean_stat(const Eigen::Ref<const Matrix>& residuals,
                            std::span<const double> signs);

/// Spatial-median multiplier bootstrap on precomputed residuals r_i.
BootstrapDraws bootstrap_median_residuals(const Eigen::Ref<const Matrix>& residuals,
                                          std::size_t B, std::uint64_t seed,
                                          const SolverConfig& config = {}, unsigned workers = 1);

/// Residuals X_i - theta_hat from `fit`, then the multiplier bootstrap of the
/// spatial median. A replicate that fails to converge raises DidNotConverge
/// carrying its index.
BootstrapDraws bootstrap_spatial_median(const Sample& sample, const SpatialMedianFit& fit,
                                        std::size_t B, std::uint64_t seed,
                                        const SolverConfig& config = {}, unsigned workers = 1);

/// Multiplier bootstrap of the sample mean with residuals X_i - X_bar.
BootstrapDraws bootstrap_mean(const Sample& sample, std::size_t B, std::uint64_t seed,
                              unsigned workers = 1);

/// ceil(level * B)-th order statistic, i.e. the smallest draw whose empirical
/// CDF reaches `level`. Throws InvalidLevel outside (0, 1).
double quantile(std::span<const double> stats, double level);
double quantile(const BootstrapDraws& draws, double level);

/// Unbiased sample variance of stats / sqrt(n). Throws TooFewDraws if B < 2.
double conditional_variance(const BootstrapDraws& draws);

/// One value per line under a "stat" header.
void write_stats_csv(std::ostream& out, const BootstrapDraws& draws);

}  // namespace geomedian
