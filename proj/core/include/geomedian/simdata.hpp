#pragma once

#include "geomedian/data_model.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace geomedian {

enum class DistributionKind { GaussianI, StudentT, LaplaceIC };

/// How Sigma enters the multivariate t law. Covariance: Cov(X) = Sigma (the
/// mixing Gaussian is shrunk by (v - 2) / v). Scale: X = theta + Sigma^1/2 Z
/// / sqrt(W / v), so Cov(X) = Sigma v / (v - 2).
enum class TParameterization { Covariance, Scale };

std::string_view to_string(DistributionKind kind) noexcept;
std::string_view to_string(TParameterization param) noexcept;

/// A fully specified synthetic law: X = theta + A * noise with A = Sigma^1/2.
struct DistributionSpec {
  DistributionKind kind = DistributionKind::GaussianI;
  double df = 0.0;
  TParameterization t_param = TParameterization::Covariance;
  Vector theta;
  ShapeMatrix sigma = ShapeMatrix::identity(1);

  static DistributionSpec gaussian(Vector theta, ShapeMatrix sigma);
  static DistributionSpec student_t(double df, Vector theta, ShapeMatrix sigma,
                                    TParameterization param = TParameterization::Covariance);
  static DistributionSpec laplace(Vector theta, ShapeMatrix sigma);

  /// InvalidDf for t with df <= 2; DimensionMismatch if theta and sigma disagree.
  void validate() const;
  std::string describe() const;
};

/// Location patterns used by the experiments.
struct ThetaPattern {
  enum class Kind { Sparse3, DenseQuarter, LogSparse, TenPercent, Zero };
  Kind kind = Kind::Zero;
  double c0 = 0.0;
  double kappa = 0.0;
  double scale = 0.0;

  static ThetaPattern sparse3() { return {Kind::Sparse3}; }
  static ThetaPattern dense_quarter() { return {Kind::DenseQuarter}; }
  static ThetaPattern log_sparse(double c0, double kappa) { return {Kind::LogSparse, c0, kappa}; }
  static ThetaPattern ten_percent(double scale) { return {Kind::TenPercent, 0.0, 0.0, scale}; }
  static ThetaPattern zero() { return {Kind::Zero}; }

  std::string describe() const;
};

/// Emits the pattern for dimension p and sample size n:
///   Sparse3       (2, -2, 3, 0, ...)
///   DenseQuarter  0.2 on the first floor(p/4) coordinates
///   LogSparse     kappa sqrt(log p / n) on the first floor(c0 log p)
///   TenPercent    scale sqrt(log p / n) on the first floor(p/10)
/// Throws PatternTooLarge when p cannot host the pattern.
Vector theta_vector(const ThetaPattern& pattern, Eigen::Index p, Eigen::Index n);

/// Sampler that factors Sigma once and then draws any number of samples.
///
/// Row i of a draw with `seed` uses only substream(seed, SampleRow, i): for t
/// one chi-square mixing variate, then p noise variates. Growing n extends a sample without changing its earlier rows, and with a diagonal
/// shape growing p extends every row.
class Sampler {
 public:
  explicit Sampler(DistributionSpec spec);

  const DistributionSpec& spec() const noexcept { return spec_; }
  Eigen::Index dim() const noexcept { return spec_.theta.size(); }

  /// n observations; rows are filled in parallel on `workers` threads.
  Sample draw(Eigen::Index n, std::uint64_t seed, unsigned workers = 1) const;

  /// Same rows as draw() but without adding theta.
  Matrix draw_noise(Eigen::Index n, std::uint64_t seed, unsigned workers = 1) const;

 private:
  DistributionSpec spec_;
  /// Diagonal of A when Sigma is diagonal, otherwise empty.
  Vector root_diag_;
  DenseMatrix root_;
};

/// One-shot convenience around Sampler.
Sample draw(const DistributionSpec& spec, Eigen::Index n, std::uint64_t seed,
            unsigned workers = 1);

}  // namespace geomedian
