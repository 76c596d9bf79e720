#pragma once

#include "geomedian/bootstrap.hpp"
#include "geomedian/data_model.hpp"
#include "geomedian/estimator.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geomedian {

/// Knobs shared by the bootstrap-backed procedures.
struct InferenceOptions {
  SolverConfig solver{};
  unsigned workers = 1;
};

enum class CenterMethod { SpatialMedian, Mean };
enum class TestMethod { MedianMax, MeanMax, WPL, CQ };

std::string_view to_string(CenterMethod method) noexcept;
std::string_view to_string(TestMethod method) noexcept;

/// Simultaneous intervals center_j -/+ q_boot / sqrt(n); every interval has the
/// same width 2 q_boot / sqrt(n).
struct SciResult {
  Vector center;
  Vector lower;
  Vector upper;
  double level = 0.0;
  double q_boot = 0.0;
  CenterMethod method = CenterMethod::SpatialMedian;

  double width() const noexcept { return lower.size() ? upper[0] - lower[0] : 0.0; }
  bool covers(const Eigen::Ref<const Vector>& theta) const;
};

struct GlobalTestResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  TestMethod method = TestMethod::MedianMax;
};

/// Step-up outcome: k_hat, the rejected indices (0-based, ascending) and the
/// p-value threshold P_(k_hat) (0 when nothing is rejected).
struct FdrDecision {
  std::size_t k_hat = 0;
  std::vector<std::size_t> rejected;
  double threshold_p = 0.0;
};

struct FdrResult {
  Vector t_stats;
  Vector p_values;
  std::size_t k_hat = 0;
  std::vector<std::size_t> rejected;
  double threshold_p = 0.0;
  double alpha = 0.0;
};

struct AreModel {
  enum class Kind { Gaussian, StudentT };
  Kind kind = Kind::Gaussian;
  double df = 0.0;

  static AreModel gaussian() { return {Kind::Gaussian, 0.0}; }
  static AreModel student_t(double df) { return {Kind::StudentT, df}; }
  std::string describe() const;
};

struct AreReport {
  double are_estimate = 0.0;
  std::optional<double> are_analytic;
  std::string model;
  double mean_variance = 0.0;
  double median_variance = 0.0;
};

// ---------------------------------------------------------------------------
// Simultaneous confidence intervals
// ---------------------------------------------------------------------------

/// Intervals at confidence `level` around `center`, calibrated by the
/// `level`-quantile of `draws`.
SciResult sci_from_draws(const Eigen::Ref<const Vector>& center, const BootstrapDraws& draws,
                         double level, CenterMethod method);

/// Fits the chosen center, runs the matching multiplier bootstrap with B
/// replicates and returns the simultaneous intervals. Requires n >= 2.
SciResult sci(const Sample& sample, double level, std::size_t B, std::uint64_t seed,
              CenterMethod method, const InferenceOptions& options = {});

// ---------------------------------------------------------------------------
// Global tests of H0: theta = theta0. `alpha` is the significance level.
// ---------------------------------------------------------------------------

/// Bootstrap-calibrated max-norm decision; p = (1 + #{stat_b >= T}) / (B + 1).
GlobalTestResult max_test_from_draws(double statistic, const BootstrapDraws& draws, double alpha,
                                     TestMethod method);

/// T_n = sqrt(n) |theta_hat - theta0|_inf against the spatial-median bootstrap.
GlobalTestResult global_test_median(const Sample& sample, const Eigen::Ref<const Vector>& theta0,
                                    double alpha, std::size_t B, std::uint64_t seed,
                                    const InferenceOptions& options = {});

/// T_mean = sqrt(n) |X_bar - theta0|_inf against the mean bootstrap.
GlobalTestResult global_test_mean(const Sample& sample, const Eigen::Ref<const Vector>& theta0,
                                  double alpha, std::size_t B, std::uint64_t seed,
                                  const InferenceOptions& options = {});

/// Spatial-sign U-statistic sum_{i<j} W_i^T W_j with W_i = S(X_i - theta0),
/// one-sided normal calibration. The null variance n(n-1)/2 tr(B^2) uses the
/// off-diagonal estimate tr(B^2) ~ sum_{i!=j} (W_i^T W_j)^2 / (n(n-1)).
GlobalTestResult global_test_wpl(const Sample& sample, const Eigen::Ref<const Vector>& theta0,
                                 double alpha);

/// Mean-based comparator sum_{i!=j} (X_i - theta0)^T (X_j - theta0) with null
/// variance 2n(n-1) tr(Sigma^2); tr(Sigma^2) is estimated from the centered
/// data by the Bai-Saranadasa unbiased formula. Requires n >= 3.
GlobalTestResult global_test_cq(const Sample& sample, const Eigen::Ref<const Vector>& theta0,
                                double alpha);

// ---------------------------------------------------------------------------
// Coordinate-wise multiple testing
// ---------------------------------------------------------------------------

/// T_j = sqrt(n)(theta_hat_j - theta0_j) / s_j with s_j^2 = zeta1_hat^-2 B_hat_jj.
/// Throws ZeroScale(j) when B_hat_jj is zero.
Vector marginal_stats(const Sample& sample, const SpatialMedianFit& fit,
                      const Eigen::Ref<const Vector>& theta0);

/// Standard normal CDF.
double normal_cdf(double x);
/// Upper-tail standard normal quantile: z with P(N(0,1) > z) = tail.
double normal_upper_quantile(double tail);
/// 2 Phi(-|t|), computed through erfc so both tails are symmetric.
double two_sided_normal_p(double t);

/// Benjamini-Hochberg step-up rule. Throws InvalidAlpha unless 0 < alpha < 1
/// and InvalidArgument for p-values outside [0, 1].
FdrDecision bh_fdr(std::span<const double> p_values, double alpha);

/// spatial_median -> marginal_stats -> two-sided normal p-values -> bh_fdr.
FdrResult fdr_screen(const Sample& sample, const Eigen::Ref<const Vector>& theta0, double alpha,
                     const SolverConfig& solver = {});

// ---------------------------------------------------------------------------
// Relative efficiency of the spatial median against the mean
// ---------------------------------------------------------------------------

/// Var*(|X_bar*|_inf) / Var*(|theta_tilde|_inf) from the two bootstraps run on
/// the same sample with their own substream families. Throws ZeroVariance if
/// the spatial-median variance vanishes.
AreReport are_bootstrap(const Sample& sample, std::size_t B, std::uint64_t seed,
                        const InferenceOptions& options = {});

/// Closed forms, evaluated in log-gamma space:
///   Gaussian:    p Gamma(p/2 - 1/2)^2 / {2^(1/2) Gamma(p/2)}^2
///   Student t_v: p {Gamma(v/2 + 1/2) Gamma(p/2 - 1/2)}^2 / {(v - 2) Gamma(v/2)^2 Gamma(p/2)^2}
/// Requires p >= 2 and, for t, v > 2 (InvalidDf).
double are_analytic(const AreModel& model, std::int64_t p);

}  // namespace geomedian
