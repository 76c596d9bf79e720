#pragma once

#include "geomedian/data_model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace geomedian {

struct SolverConfig {
  /// Relative iterate change ||b_{t+1} - b_t|| / max(1, ||b_t||) at exit.
  double tol = 1e-10;
  int max_iter = 1000;
  /// Points closer than this to an iterate count as coincident with it.
  /// Unset means 1e-12 times the largest absolute coordinate of the data.
  std::optional<double> anchor_eps;
  /// Estimating-equation residual allowed per observation at exit.
  double tol_grad = 1e-7;
  /// Keep the objective value of every iterate in the result.
  bool record_trace = false;

  /// Throws InvalidArgument unless tol > 0, tol_grad > 0 and max_iter >= 1.
  void validate() const;
};

/// Raw output of the minimizer on an arbitrary point cloud.
struct SolverResult {
  Vector minimizer;
  int iterations = 0;
  /// L(b) = sum_i (||x_i - b|| - ||x_i||) at the minimizer.
  double objective = 0.0;
  /// ||sum_i S(x_i - b)|| with S(0) = 0.
  double grad_norm = 0.0;
  /// Number of points coincident with the minimizer.
  Eigen::Index coincident = 0;
  double anchor_eps = 0.0;
  std::vector<double> objective_trace;
};

struct SpatialMedianFit {
  Vector theta_hat;
  int iterations = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  /// n^-1 sum ||X_i - theta_hat||^-1 over non-coincident observations; unset
  /// when every residual is zero.
  std::optional<double> zeta1_hat;
  /// Diagonal of n^-1 sum S(X_i - theta_hat) S(X_i - theta_hat)^T over the
  /// same observations; zeros when zeta1_hat is unset.
  Vector b_diag_hat;
  /// Observations that entered zeta1_hat and b_diag_hat.
  Eigen::Index scale_count = 0;
  double anchor_eps = 0.0;
  std::vector<double> objective_trace;
};

/// x / ||x||, or the zero vector when x == 0.
Vector spatial_sign(const Eigen::Ref<const Vector>& x);

/// Minimizes sum_i ||x_i - b|| over the rows of `points` with the modified
/// Weiszfeld iteration (Vardi-Zhang step at data points), started from the
/// coordinate-wise median.
///
/// Exit requires both a relative iterate change below `tol` and the
/// subgradient residual at the iterate below (coincident count) + n * tol_grad.
/// After a few dozen iterations the nearest data point is also tested for
/// optimality, which avoids the sublinear crawl toward a vertex solution.
/// Throws DidNotConverge once `max_iter` iterations are spent.
SolverResult minimize_distance_sum(const Eigen::Ref<const Matrix>& points,
                                   const SolverConfig& config = {});

/// Same iteration started from `start` instead of the coordinate-wise median.
SolverResult minimize_distance_sum(const Eigen::Ref<const Matrix>& points,
                                   const SolverConfig& config, const Vector& start);

/// Sample spatial median together with zeta1_hat and the diagonal of B_hat.
SpatialMedianFit spatial_median(const Sample& sample, const SolverConfig& config = {});

/// Coordinate-wise median (average of the two middle values for even n).
Vector coordinatewise_median(const Eigen::Ref<const Matrix>& points);

/// Sizes of `k_blocks` contiguous groups covering n rows, differing by at most
/// one; the larger blocks come first.
std::vector<Eigen::Index> block_sizes(Eigen::Index n, Eigen::Index k_blocks);

/// Row order used by gmom: a Fisher-Yates shuffle driven by the
/// GmomPermutation substream of `seed`.
std::vector<Eigen::Index> gmom_permutation(Eigen::Index n, std::uint64_t seed);

/// Geometric median-of-means: shuffle rows by `seed`, split them into
/// `k_blocks` near-equal contiguous blocks, and return the spatial median of
/// the block means. Requires 1 <= k_blocks <= n.
Vector gmom(const Sample& sample, Eigen::Index k_blocks, const SolverConfig& config,
            std::uint64_t seed);

/// Empirical Bahadur remainder
///   | sqrt(n)(theta_hat - theta) - n^-1/2 zeta1_hat^-1 sum_i S(X_i - theta) |_inf.
/// Throws DegenerateRemainder when zeta1_hat is undefined.
double bahadur_remainder(const Sample& sample, const Eigen::Ref<const Vector>& theta_true,
                         const SpatialMedianFit& fit);

}  // namespace geomedian
