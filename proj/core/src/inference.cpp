#include "geomedian/inference.hpp"

#include "geomedian/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace geomedian {
namespace {

void require_significance(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidLevel, "significance level must lie in (0, 1)");
  }
}

void require_dimension(const Sample& sample, const Eigen::Ref<const Vector>& theta0) {
  if (theta0.size() != sample.p()) {
    throw Error(ErrorCode::DimensionMismatch,
                "theta0 has length " + std::to_string(theta0.size()) + ", sample has p = " +
                    std::to_string(sample.p()));
  }
}

/// Upper-tail normal decision for a statistic with null mean 0 and standard
/// deviation `sd`.
GlobalTestResult normal_upper_test(double statistic, double sd, double alpha, TestMethod method) {
  GlobalTestResult result;
  result.method = method;
  result.statistic = statistic;
  if (sd > 0.0) {
    result.critical_value = normal_upper_quantile(alpha) * sd;
    result.p_value = 0.5 * std::erfc(statistic / sd / std::sqrt(2.0));
  } else {
    result.critical_value = 0.0;
    result.p_value = statistic > 0.0 ? 0.0 : 1.0;
  }
  result.reject = result.statistic > result.critical_value;
  return result;
}

}  // namespace

std::string_view to_string(CenterMethod method) noexcept {
  return method == CenterMethod::SpatialMedian ? "SpatialMedian" : "Mean";
}

std::string_view to_string(TestMethod method) noexcept {
  switch (method) {
    case TestMethod::MedianMax: return "MedianMax";
    case TestMethod::MeanMax: return "MeanMax";
    case TestMethod::WPL: return "WPL";
    case TestMethod::CQ: return "CQ";
  }
  return "Unknown";
}

std::string AreModel::describe() const {
  if (kind == Kind::Gaussian) return "Gaussian";
  std::ostringstream os;
  os << "StudentT(" << df << ")";
  return os.str();
}

bool SciResult::covers(const Eigen::Ref<const Vector>& theta) const {
  if (theta.size() != lower.size()) {
    throw Error(ErrorCode::DimensionMismatch, "theta has the wrong length");
  }
  return (theta.array() >= lower.array()).all() && (theta.array() <= upper.array()).all();
}

SciResult sci_from_draws(const Eigen::Ref<const Vector>& center, const BootstrapDraws& draws,
                         double level, CenterMethod method) {
  SciResult result;
  result.level = level;
  result.method = method;
  result.q_boot = quantile(draws, level);
  const double half_width = result.q_boot / std::sqrt(static_cast<double>(draws.n));
  result.center = center;
  result.lower = center.array() - half_width;
  result.upper = center.array() + half_width;
  return result;
}

SciResult sci(const Sample& sample, double level, std::size_t B, std::uint64_t seed,
              CenterMethod method, const InferenceOptions& options) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidLevel, "confidence level must lie in (0, 1)");
  }
  if (sample.n() < 2) throw Error(ErrorCode::InvalidArgument, "intervals need n >= 2");
  if (method == CenterMethod::SpatialMedian) {
    const auto fit = spatial_median(sample, options.solver);
    const auto draws =
        bootstrap_spatial_median(sample, fit, B, seed, options.solver, options.workers);
    return sci_from_draws(fit.theta_hat, draws, level, method);
  }
  const auto draws = bootstrap_mean(sample, B, seed, options.workers);
  return sci_from_draws(sample.mean(), draws, level, method);
}

GlobalTestResult max_test_from_draws(double statistic, const BootstrapDraws& draws, double alpha,
                                     TestMethod method) {
  require_significance(alpha);
  GlobalTestResult result;
  result.method = method;
  result.statistic = statistic;
  result.critical_value = quantile(draws, 1.0 - alpha);
  result.reject = statistic > result.critical_value;
  const auto exceed = std::count_if(draws.stats.begin(), draws.stats.end(),
                                    [statistic](double s) { return s >= statistic; });
  result.p_value = (1.0 + static_cast<double>(exceed)) / (static_cast<double>(draws.B) + 1.0);
  return result;
}

GlobalTestResult global_test_median(const Sample& sample, const Eigen::Ref<const Vector>& theta0,
                                    double alpha, std::size_t B, std::uint64_t seed,
                                    const InferenceOptions& options) {
  require_dimension(sample, theta0);
  require_significance(alpha);
  const auto fit = spatial_median(sample, options.solver);
  const auto draws =
      bootstrap_spatial_median(sample, fit, B, seed, options.solver, options.workers);
  const double statistic =
      std::sqrt(static_cast<double>(sample.n())) * max_norm(fit.theta_hat - theta0);
  return max_test_from_draws(statistic, draws, alpha, TestMethod::MedianMax);
}

GlobalTestResult global_test_mean(const Sample& sample, const Eigen::Ref<const Vector>& theta0,
                                  double alpha, std::size_t B, std::uint64_t seed,
                                  const InferenceOptions& options) {
  require_dimension(sample, theta0);
  require_significance(alpha);
  const auto draws = bootstrap_mean(sample, B, seed, options.workers);
  const double statistic =
      std::sqrt(static_cast<double>(sample.n())) * max_norm(sample.mean() - theta0);
  return max_test_from_draws(statistic, draws, alpha, TestMethod::MeanMax);
}

GlobalTestResult global_test_wpl(const Sample& sample, const Eigen::Ref<const Vector>& theta0,
                                 double alpha) {
  require_dimension(sample, theta0);
  require_significance(alpha);
  const Eigen::Index n = sample.n();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "the WPL test needs n >= 2");
  Matrix signs = sample.values().rowwise() - theta0.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = signs.row(i).norm();
    if (norm > 0.0) {
      signs.row(i) /= norm;
    } else {
      signs.row(i).setZero();
    }
  }
  const DenseMatrix gram = signs * signs.transpose();
  const double statistic = 0.5 * (gram.sum() - gram.trace());
  // n(n-1)/2 * tr(B^2) with tr(B^2) estimated by the off-diagonal mean of G_ij^2.
  const double off_diagonal_sq = gram.squaredNorm() - gram.diagonal().squaredNorm();
  const double sd = std::sqrt(0.5 * off_diagonal_sq);
  return normal_upper_test(statistic, sd, alpha, TestMethod::WPL);
}

GlobalTestResult global_test_cq(const Sample& sample, const Eigen::Ref<const Vector>& theta0,
                                double alpha) {
  require_dimension(sample, theta0);
  require_significance(alpha);
  const Eigen::Index n = sample.n();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "the CQ test needs n >= 3");
  const Matrix shifted = sample.values().rowwise() - theta0.transpose();
  const DenseMatrix gram = shifted * shifted.transpose();
  const double statistic = gram.sum() - gram.trace();

  const Matrix centered = sample.values().rowwise() - sample.mean().transpose();
  const DenseMatrix centered_gram = centered * centered.transpose();
  const double m = static_cast<double>(n - 1);
  const double tr_s = centered_gram.trace() / m;
  const double tr_s2 = centered_gram.squaredNorm() / (m * m);
  const double nn = static_cast<double>(n);
  double tr_sigma2 = m * m / ((nn - 2.0) * (nn + 1.0)) * (tr_s2 - tr_s * tr_s / m);
  tr_sigma2 = std::max(tr_sigma2, 0.0);
  const double sd = std::sqrt(2.0 * nn * (nn - 1.0) * tr_sigma2);
  return normal_upper_test(statistic, sd, alpha, TestMethod::CQ);
}

Vector marginal_stats(const Sample& sample, const SpatialMedianFit& fit,
                      const Eigen::Ref<const Vector>& theta0) {
  require_dimension(sample, theta0);
  if (!fit.zeta1_hat) throw ZeroScale(0);
  const double root_n = std::sqrt(static_cast<double>(sample.n()));
  Vector t(sample.p());
  for (Eigen::Index j = 0; j < sample.p(); ++j) {
    const double b = fit.b_diag_hat[j];
    if (!(b > 0.0)) throw ZeroScale(static_cast<std::size_t>(j));
    const double scale = std::sqrt(b) / *fit.zeta1_hat;
    t[j] = root_n * (fit.theta_hat[j] - theta0[j]) / scale;
  }
  return t;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_upper_quantile(double tail) {
  if (!(tail > 0.0 && tail < 1.0)) {
    throw Error(ErrorCode::InvalidLevel, "tail probability must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<>(), tail));
}

double two_sided_normal_p(double t) { return std::erfc(std::fabs(t) / std::sqrt(2.0)); }

FdrDecision bh_fdr(std::span<const double> p_values, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha must lie in (0, 1)");
  }
  for (const double pv : p_values) {
    if (!(pv >= 0.0 && pv <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "p-values must lie in [0, 1]");
    }
  }
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  FdrDecision decision;
  for (std::size_t rank = m; rank >= 1; --rank) {
    const double bound = alpha * static_cast<double>(rank) / static_cast<double>(m);
    if (p_values[order[rank - 1]] <= bound) {
      decision.k_hat = rank;
      decision.threshold_p = p_values[order[rank - 1]];
      break;
    }
  }
  if (decision.k_hat > 0) {
    for (std::size_t j = 0; j < m; ++j) {
      if (p_values[j] <= decision.threshold_p) decision.rejected.push_back(j);
    }
  }
  return decision;
}

FdrResult fdr_screen(const Sample& sample, const Eigen::Ref<const Vector>& theta0, double alpha,
                     const SolverConfig& solver) {
  require_dimension(sample, theta0);
  const auto fit = spatial_median(sample, solver);
  FdrResult result;
  result.alpha = alpha;
  result.t_stats = marginal_stats(sample, fit, theta0);
  result.p_values = result.t_stats.unaryExpr([](double t) { return two_sided_normal_p(t); });
  auto decision = bh_fdr(std::span<const double>(result.p_values.data(),
                                                 static_cast<std::size_t>(result.p_values.size())),
                         alpha);
  result.k_hat = decision.k_hat;
  result.rejected = std::move(decision.rejected);
  result.threshold_p = decision.threshold_p;
  return result;
}

AreReport are_bootstrap(const Sample& sample, std::size_t B, std::uint64_t seed,
                        const InferenceOptions& options) {
  if (sample.n() < 2) throw Error(ErrorCode::InvalidArgument, "ARE estimation needs n >= 2");
  if (B < 2) throw Error(ErrorCode::TooFewDraws, "ARE estimation needs B >= 2");
  const auto fit = spatial_median(sample, options.solver);
  const auto median_draws =
      bootstrap_spatial_median(sample, fit, B, seed, options.solver, options.workers);
  const auto mean_draws = bootstrap_mean(sample, B, seed, options.workers);

  AreReport report;
  report.model = "bootstrap";
  report.median_variance = conditional_variance(median_draws);
  report.mean_variance = conditional_variance(mean_draws);
  if (!(report.median_variance > 0.0)) {
    throw Error(ErrorCode::ZeroVariance, "spatial-median bootstrap variance is zero");
  }
  report.are_estimate = report.mean_variance / report.median_variance;
  return report;
}

double are_analytic(const AreModel& model, std::int64_t p) {
  if (p < 2) throw Error(ErrorCode::InvalidArgument, "analytic ARE needs p >= 2");
  const double half_p = 0.5 * static_cast<double>(p);
  const double dim = static_cast<double>(p);
  const double radial = std::lgamma(half_p - 0.5) - std::lgamma(half_p);
  if (model.kind == AreModel::Kind::Gaussian) {
    return 0.5 * dim * std::exp(2.0 * radial);
  }
  const double v = model.df;
  if (!(v > 2.0)) throw Error(ErrorCode::InvalidDf, "Student t ARE needs df > 2");
  const double mixing = std::lgamma(0.5 * v + 0.5) - std::lgamma(0.5 * v);
  return dim / (v - 2.0) * std::exp(2.0 * (mixing + radial));
}

}  // namespace geomedian
