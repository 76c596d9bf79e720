#include "geomedian/bootstrap.hpp"
#include "geomedian/error.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

using namespace geomedian;

namespace {

std::vector<double> signs_of(unsigned mask, Eigen::Index n) {
  std::vector<double> z(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = (mask >> i) & 1u ? 1.0 : -1.0;
  return z;
}

/// Statistic for every one of the 2^n sign vectors, sorted.
template <class Stat>
std::vector<double> enumerate(Eigen::Index n, Stat stat) {
  std::vector<double> all;
  for (unsigned mask = 0; mask < (1u << n); ++mask) all.push_back(stat(signs_of(mask, n)));
  std::sort(all.begin(), all.end());
  return all;
}

/// Kolmogorov-Smirnov distance between two empirical laws, ties handled by
/// evaluating both CDFs at every support point.
double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> support = a;
  support.insert(support.end(), b.begin(), b.end());
  double worst = 0.0;
  for (double t : support) {
    const double fa = static_cast<double>(std::upper_bound(a.begin(), a.end(), t) - a.begin()) / a.size();
    const double fb = static_cast<double>(std::upper_bound(b.begin(), b.end(), t) - b.begin()) / b.size();
    worst = std::max(worst, std::fabs(fa - fb));
  }
  return worst;
}

TEST(Bootstrap, ReplicateSignsAreRademacherAndStable) {
  const auto z = replicate_signs(5, BootstrapTarget::SpatialMedian, 3, 64);
  EXPECT_EQ(z.size(), 64u);
  for (double s : z) EXPECT_TRUE(s == 1.0 || s == -1.0);
  EXPECT_EQ(z, replicate_signs(5, BootstrapTarget::SpatialMedian, 3, 64));
  EXPECT_NE(z, replicate_signs(5, BootstrapTarget::Mean, 3, 64));
  EXPECT_NE(z, replicate_signs(5, BootstrapTarget::SpatialMedian, 4, 64));
}

TEST(Bootstrap, ZeroResidualsGiveZeroStats) {
  const Sample s = validate_sample(Matrix::Constant(6, 3, 2.5));
  const auto fit = spatial_median(s);
  const auto median = bootstrap_spatial_median(s, fit, 50, 1);
  const auto mean = bootstrap_mean(s, 50, 1);
  for (double v : median.stats) EXPECT_EQ(v, 0.0);
  for (double v : mean.stats) EXPECT_EQ(v, 0.0);
}

TEST(Bootstrap, MirrorPairMedianTwoPointLaw) {
  // Equal signs give {r, -r}, whose minimizer started from the multiplied mean
  // is 0; opposite signs give {r, r} or {-r, -r}, whose minimizer is +-r.
  Matrix r(2, 3);
  r << 1.0, -2.0, 0.5, -1.0, 2.0, -0.5;
  const auto draws = bootstrap_median_residuals(r, 4000, 3);
  const double top = std::sqrt(2.0) * 2.0;
  std::size_t high = 0;
  for (double v : draws.stats) {
    const bool is_zero = v < 1e-12;
    const bool is_top = std::fabs(v - top) < 1e-12;
    ASSERT_TRUE(is_zero || is_top) << v;
    high += is_top;
  }
  EXPECT_NEAR(static_cast<double>(high), 2000.0, 3 * std::sqrt(4000 * 0.25));
}

TEST(Bootstrap, MirrorPairMeanTwoPointLaw) {
  Matrix x(2, 2);
  x << 1.0, 3.0, -1.0, -3.0;
  const auto draws = bootstrap_mean(validate_sample(x), 4000, 11);
  const double top = std::sqrt(2.0) * 3.0;
  std::size_t high = 0;
  for (double v : draws.stats) {
    const bool is_zero = v == 0.0;
    const bool is_top = std::fabs(v - top) < 1e-12;
    ASSERT_TRUE(is_zero || is_top) << v;
    high += is_top;
  }
  const double sigma = std::sqrt(4000 * 0.25);
  EXPECT_NEAR(static_cast<double>(high), 2000.0, 3 * sigma);
  // Two-point law {0, 3 sqrt(2) / sqrt(2)} with equal mass: variance 9/4 * B/(B-1).
  EXPECT_NEAR(conditional_variance(draws), 2.25, 0.15);
}

TEST(Bootstrap, MedianMatchesEnumeration) {
  gen::Cases cases(81);
  const Matrix r = cases.gaussian(8, 2);
  const auto exact = enumerate(8, [&](const std::vector<double>& z) { return multiplier_median_stat(r, z); });
  const auto draws = bootstrap_median_residuals(r, 10000, 2024);
  EXPECT_LT(ks_distance(draws.stats, exact), 0.03);
}

TEST(Bootstrap, MeanMatchesEnumeration) {
  gen::Cases cases(82);
  const Matrix x = cases.gaussian(10, 3);
  const Sample s = validate_sample(x);
  Matrix r = x;
  r.rowwise() -= s.mean().transpose();
  const auto exact = enumerate(10, [&](const std::vector<double>& z) { return multiplier_mean_stat(r, z); });
  const auto draws = bootstrap_mean(s, 10000, 2024);
  EXPECT_LT(ks_distance(draws.stats, exact), 0.03);
}

TEST(Bootstrap, DeterministicAcrossWorkers) {
  gen::Cases cases(83);
  const Sample s = validate_sample(cases.gaussian(40, 25));
  const auto fit = spatial_median(s);
  const auto one = bootstrap_spatial_median(s, fit, 64, 99, {}, 1);
  for (unsigned workers : {2u, 3u, 8u}) {
    EXPECT_EQ(one.stats, bootstrap_spatial_median(s, fit, 64, 99, {}, workers).stats);
    EXPECT_EQ(bootstrap_mean(s, 64, 99, 1).stats, bootstrap_mean(s, 64, 99, workers).stats);
  }
  EXPECT_EQ(one.stats, bootstrap_spatial_median(s, fit, 64, 99).stats);
  EXPECT_NE(one.stats, bootstrap_spatial_median(s, fit, 64, 100).stats);
}

TEST(Bootstrap, ReplicateDoesNotDependOnB) {
  gen::Cases cases(84);
  const Matrix r = cases.gaussian(12, 4);
  const auto small = bootstrap_median_residuals(r, 10, 5);
  const auto large = bootstrap_median_residuals(r, 30, 5);
  EXPECT_TRUE(std::equal(small.stats.begin(), small.stats.end(), large.stats.begin()));
}

TEST(Bootstrap, MeanTranslationInvariantBitwise) {
  // Dyadic data with n = 8 keep every sum, mean and residual exact.
  gen::Cases cases(85);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = cases.dyadic(8, 4);
    Matrix shifted = x;
    for (Eigen::Index j = 0; j < 4; ++j) shifted.col(j).array() += static_cast<double>(cases.integer(-50, 50));
    EXPECT_EQ(bootstrap_mean(validate_sample(x), 40, 7).stats,
              bootstrap_mean(validate_sample(shifted), 40, 7).stats);
  }
}

TEST(Bootstrap, MedianTranslationInvariant) {
  gen::Cases cases(86);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = cases.gaussian(15, 5);
    Matrix shifted = x;
    shifted.rowwise() += Eigen::RowVectorXd(cases.gaussian(1, 5, 10.0));
    const Sample a = validate_sample(x);
    const Sample b = validate_sample(shifted);
    // The residuals inherit the fit's error, so fit both centers tightly.
    SolverConfig tight;
    tight.tol = 1e-14;
    const auto da = bootstrap_spatial_median(a, spatial_median(a, tight), 40, 7);
    const auto db = bootstrap_spatial_median(b, spatial_median(b, tight), 40, 7);
    for (std::size_t k = 0; k < da.stats.size(); ++k) EXPECT_NEAR(da.stats[k], db.stats[k], 1e-9);
  }
}

TEST(Bootstrap, SignFlipClosureBitwise) {
  gen::Cases cases(87);
  for (int trial = 0; trial < 10; ++trial) {
    const auto n = cases.integer(2, 30);
    const Matrix r = cases.gaussian(n, cases.integer(1, 10));
    const Matrix neg = -r;
    const auto z = replicate_signs(cases.seed(), BootstrapTarget::SpatialMedian, 0, n);
    std::vector<double> flipped(z.size());
    std::transform(z.begin(), z.end(), flipped.begin(), [](double s) { return -s; });
    const double base = multiplier_median_stat(r, z);
    EXPECT_EQ(base, multiplier_median_stat(neg, z));
    EXPECT_EQ(base, multiplier_median_stat(r, flipped));
    EXPECT_EQ(multiplier_mean_stat(r, z), multiplier_mean_stat(neg, z));
    EXPECT_EQ(bootstrap_median_residuals(r, 20, 4).stats, bootstrap_median_residuals(neg, 20, 4).stats);
  }
}

TEST(Bootstrap, FailingReplicateIsNamed) {
  gen::Cases cases(88);
  const Sample s = validate_sample(cases.gaussian(30, 6));
  const auto fit = spatial_median(s);
  SolverConfig tight;
  tight.max_iter = 1;
  tight.tol = 1e-15;
  try {
    bootstrap_spatial_median(s, fit, 20, 3, tight, 4);
    FAIL();
  } catch (const DidNotConverge& e) {
    ASSERT_TRUE(e.replicate().has_value());
    EXPECT_EQ(*e.replicate(), 0u);
  }
}

TEST(Quantile, Examples) {
  const std::vector<double> four{4, 1, 3, 2};
  EXPECT_EQ(quantile(four, 0.5), 2.0);
  const std::vector<double> one{5};
  for (double level : {0.01, 0.5, 0.99}) EXPECT_EQ(quantile(one, level), 5.0);
  std::vector<double> hundred(100);
  std::iota(hundred.begin(), hundred.end(), 1.0);
  EXPECT_EQ(quantile(hundred, 0.95), 95.0);
  EXPECT_EQ(quantile(hundred, 0.951), 96.0);
}

TEST(Quantile, InvalidLevel) {
  const std::vector<double> v{1, 2};
  for (double level : {0.0, 1.0, -0.5, 1.5}) {
    try {
      quantile(v, level);
      FAIL() << level;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidLevel);
    }
  }
}

TEST(Quantile, IsSmallestDrawReachingLevel) {
  gen::Cases cases(89);
  for (int trial = 0; trial < 200; ++trial) {
    const auto b = cases.integer(1, 60);
    std::vector<double> v(static_cast<std::size_t>(b));
    for (auto& x : v) x = static_cast<double>(cases.integer(0, 10));
    const double level = cases.real(0.001, 0.999);
    const double q = quantile(v, level);
    const auto at_most = std::count_if(v.begin(), v.end(), [&](double x) { return x <= q; });
    const auto below = std::count_if(v.begin(), v.end(), [&](double x) { return x < q; });
    EXPECT_GE(static_cast<double>(at_most) / b, level - 1e-12);
    EXPECT_LT(static_cast<double>(below) / b, level);
  }
}

TEST(ConditionalVariance, Examples) {
  BootstrapDraws constant{{3, 3, 3}, 3, 0, BootstrapTarget::Mean, 4};
  EXPECT_EQ(conditional_variance(constant), 0.0);
  BootstrapDraws two{{0, 4}, 2, 0, BootstrapTarget::Mean, 4};
  EXPECT_DOUBLE_EQ(conditional_variance(two), 2.0);
  BootstrapDraws single{{1}, 1, 0, BootstrapTarget::Mean, 4};
  try {
    conditional_variance(single);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewDraws);
  }
}

TEST(Bootstrap, StatsCsvDump) {
  BootstrapDraws d{{0.5, 1.25}, 2, 0, BootstrapTarget::SpatialMedian, 4};
  std::ostringstream out;
  write_stats_csv(out, d);
  EXPECT_EQ(out.str(), "stat\n0.5\n1.25\n");
}

}  // namespace
