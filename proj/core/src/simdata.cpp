#include "geomedian/simdata.hpp"

#include "geomedian/error.hpp"
#include "geomedian/parallel.hpp"
#include "geomedian/rng.hpp"

#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/laplace_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <sstream>

namespace geomedian {

std::string_view to_string(DistributionKind kind) noexcept {
  switch (kind) {
    case DistributionKind::GaussianI: return "GaussianI";
    case DistributionKind::StudentT: return "StudentT";
    case DistributionKind::LaplaceIC: return "LaplaceIC";
  }
  return "Unknown";
}

std::string_view to_string(TParameterization param) noexcept {
  return param == TParameterization::Covariance ? "covariance" : "scale";
}

DistributionSpec DistributionSpec::gaussian(Vector theta, ShapeMatrix sigma) {
  DistributionSpec spec{DistributionKind::GaussianI, 0.0, TParameterization::Covariance,
                        std::move(theta), std::move(sigma)};
  spec.validate();
  return spec;
}

DistributionSpec DistributionSpec::student_t(double df, Vector theta, ShapeMatrix sigma,
                                             TParameterization param) {
  DistributionSpec spec{DistributionKind::StudentT, df, param, std::move(theta), std::move(sigma)};
  spec.validate();
  return spec;
}

DistributionSpec DistributionSpec::laplace(Vector theta, ShapeMatrix sigma) {
  DistributionSpec spec{DistributionKind::LaplaceIC, 0.0, TParameterization::Covariance,
                        std::move(theta), std::move(sigma)};
  spec.validate();
  return spec;
}

void DistributionSpec::validate() const {
  if (kind == DistributionKind::StudentT && !(df > 2.0)) {
    throw Error(ErrorCode::InvalidDf, "multivariate t needs df > 2");
  }
  if (theta.size() != sigma.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "theta length differs from the shape dimension");
  }
  if (theta.size() == 0) throw Error(ErrorCode::EmptyInput, "distribution has dimension 0");
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == DistributionKind::StudentT) os << '(' << df << ", " << to_string(t_param) << ')';
  return os.str();
}

std::string ThetaPattern::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Sparse3: os << "Sparse3"; break;
    case Kind::DenseQuarter: os << "DenseQuarter"; break;
    case Kind::LogSparse: os << "LogSparse(c0=" << c0 << ", kappa=" << kappa << ')'; break;
    case Kind::TenPercent: os << "TenPercent(" << scale << ')'; break;
    case Kind::Zero: os << "Zero"; break;
  }
  return os.str();
}

Vector theta_vector(const ThetaPattern& pattern, Eigen::Index p, Eigen::Index n) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "pattern dimension must be positive");
  Vector theta = Vector::Zero(p);
  const auto rate = [&] {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "pattern needs n >= 1");
    return std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
  };
  switch (pattern.kind) {
    case ThetaPattern::Kind::Sparse3:
      if (p < 3) throw Error(ErrorCode::PatternTooLarge, "Sparse3 needs p >= 3");
      theta.head(3) << 2.0, -2.0, 3.0;
      break;
    case ThetaPattern::Kind::DenseQuarter:
      theta.head(p / 4).setConstant(0.2);
      break;
    case ThetaPattern::Kind::LogSparse: {
      if (pattern.c0 < 0.0) throw Error(ErrorCode::InvalidArgument, "c0 must be non-negative");
      const auto count = static_cast<Eigen::Index>(
          std::floor(pattern.c0 * std::log(static_cast<double>(p))));
      if (count > p) throw Error(ErrorCode::PatternTooLarge, "floor(c0 log p) exceeds p");
      theta.head(count).setConstant(pattern.kappa * rate());
      break;
    }
    case ThetaPattern::Kind::TenPercent:
      theta.head(p / 10).setConstant(pattern.scale * rate());
      break;
    case ThetaPattern::Kind::Zero:
      break;
  }
  return theta;
}

Sampler::Sampler(DistributionSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.sigma.is_diagonal()) {
    root_diag_ = spec_.sigma.omega().diagonal().cwiseSqrt();
  } else {
    root_ = symmetric_sqrt(spec_.sigma);
  }
}

Matrix Sampler::draw_noise(Eigen::Index n, std::uint64_t seed, unsigned workers) const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "draw needs n >= 1");
  const Eigen::Index p = dim();
  const double df = spec_.df;
  const bool is_t = spec_.kind == DistributionKind::StudentT;
  double shrink = 1.0;
  if (is_t && spec_.t_param == TParameterization::Covariance) shrink = std::sqrt((df - 2.0) / df);

  const bool dense = root_.size() != 0;
  Matrix x(n, p);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t row) {
    auto engine = rng::substream(seed, rng::Family::SampleRow, row);
    const auto i = static_cast<Eigen::Index>(row);
    Vector z(p);
    if (spec_.kind == DistributionKind::LaplaceIC) {
      boost::random::laplace_distribution<double> laplace(0.0, 1.0 / std::sqrt(2.0));
      for (Eigen::Index j = 0; j < p; ++j) z[j] = laplace(engine);
    } else {
      double mix = 1.0;
      if (is_t) {
        boost::random::chi_squared_distribution<double> chi2(df);
        mix = shrink / std::sqrt(chi2(engine) / df);
      }
      boost::random::normal_distribution<double> normal;
      for (Eigen::Index j = 0; j < p; ++j) z[j] = mix * normal(engine);
    }
    // One product per row keeps each row independent of n and of the schedule.
    if (dense) {
      x.row(i).noalias() = (root_ * z).transpose();
    } else {
      x.row(i) = z.cwiseProduct(root_diag_).transpose();
    }
  });
  return x;
}

Sample Sampler::draw(Eigen::Index n, std::uint64_t seed, unsigned workers) const {
  Matrix x = draw_noise(n, seed, workers);
  x.rowwise() += spec_.theta.transpose();
  return validate_sample(std::move(x));
}

Sample draw(const DistributionSpec& spec, Eigen::Index n, std::uint64_t seed, unsigned workers) {
  return Sampler(spec).draw(n, seed, workers);
}

}  // namespace geomedian
