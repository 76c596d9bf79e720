#include "geomedian/error.hpp"
#include "geomedian/estimator.hpp"
#include "geomedian/simdata.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace geomedian;

namespace {

DenseMatrix covariance(const Matrix& x) {
  const Matrix centered = x.rowwise() - x.colwise().mean();
  return (centered.transpose() * centered) / static_cast<double>(x.rows() - 1);
}

TEST(ThetaVector, Patterns) {
  EXPECT_EQ(theta_vector(ThetaPattern::sparse3(), 5, 100), (Vector(5) << 2, -2, 3, 0, 0).finished());
  EXPECT_EQ(theta_vector(ThetaPattern::dense_quarter(), 8, 100),
            (Vector(8) << 0.2, 0.2, 0, 0, 0, 0, 0, 0).finished());
  EXPECT_TRUE(theta_vector(ThetaPattern::zero(), 4, 10).isZero(0.0));
}

TEST(ThetaVector, ScaledPatterns) {
  const double rate = std::sqrt(std::log(1000.0) / 50.0);
  const Vector ten = theta_vector(ThetaPattern::ten_percent(2.0), 1000, 50);
  EXPECT_EQ((ten.array() != 0.0).count(), 100);
  EXPECT_DOUBLE_EQ(ten[99], 2.0 * rate);
  EXPECT_EQ(ten[100], 0.0);

  // floor(0.5 log 1000) = 3 coordinates of size 4 sqrt(log p / n).
  const Vector sparse = theta_vector(ThetaPattern::log_sparse(0.5, 4.0), 1000, 50);
  EXPECT_EQ((sparse.array() != 0.0).count(), 3);
  EXPECT_DOUBLE_EQ(sparse[2], 4.0 * rate);
}

TEST(ThetaVector, TooLarge) {
  try {
    theta_vector(ThetaPattern::sparse3(), 2, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PatternTooLarge);
  }
  EXPECT_THROW(theta_vector(ThetaPattern::log_sparse(10.0, 1.0), 3, 10), Error);
}

TEST(DistributionSpec, Validation) {
  try {
    DistributionSpec::student_t(2.0, Vector::Zero(2), ShapeMatrix::identity(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDf);
  }
  try {
    DistributionSpec::gaussian(Vector::Zero(3), ShapeMatrix::identity(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Draw, ReproducibleAndWorkerIndependent) {
  const auto spec = DistributionSpec::student_t(3.0, Vector::Constant(6, 1.0), ar1_shape(6, 0.5));
  const Sample a = draw(spec, 50, 17, 1);
  EXPECT_TRUE((a.values().array() == draw(spec, 50, 17, 1).values().array()).all());
  EXPECT_TRUE((a.values().array() == draw(spec, 50, 17, 4).values().array()).all());
  EXPECT_FALSE((a.values().array() == draw(spec, 50, 18, 1).values().array()).all());
}

TEST(Draw, GrowingNExtendsRows) {
  for (auto spec : {DistributionSpec::gaussian(Vector::Zero(4), ar1_shape(4, 0.8)),
                    DistributionSpec::student_t(5.0, Vector::Zero(4), ShapeMatrix::identity(4)),
                    DistributionSpec::laplace(Vector::Zero(4), ShapeMatrix::identity(4))}) {
    const Sample small = draw(spec, 7, 3);
    const Sample large = draw(spec, 30, 3);
    EXPECT_TRUE((small.values().array() == large.values().topRows(7).array()).all()) << spec.describe();
  }
}

TEST(Draw, GrowingPExtendsRowsForDiagonalShape) {
  for (auto kind : {DistributionKind::GaussianI, DistributionKind::StudentT, DistributionKind::LaplaceIC}) {
    DistributionSpec narrow{kind, 5.0, TParameterization::Scale, Vector::Zero(3), ShapeMatrix::identity(3)};
    DistributionSpec wide{kind, 5.0, TParameterization::Scale, Vector::Zero(9), ShapeMatrix::identity(9)};
    const Sample a = draw(narrow, 20, 8);
    const Sample b = draw(wide, 20, 8);
    EXPECT_TRUE((a.values().array() == b.values().leftCols(3).array()).all()) << to_string(kind);
  }
}

TEST(Draw, GaussianMomentsLln) {
  const int n = 10000;
  const Sample s = draw(DistributionSpec::gaussian(Vector::Zero(2), ShapeMatrix::identity(2)), n, 1);
  EXPECT_LT(max_norm(s.mean()), 4.0 / std::sqrt(n));
  EXPECT_LT((covariance(s.values()) - DenseMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Draw, ThetaIsAdded) {
  const Vector theta = (Vector(3) << 5, -5, 1).finished();
  const auto spec = DistributionSpec::gaussian(theta, ShapeMatrix::identity(3));
  const Sample x = draw(spec, 20, 2);
  const Matrix noise = Sampler(spec).draw_noise(20, 2);
  EXPECT_TRUE(((x.values().rowwise() - theta.transpose()) - noise).isZero(1e-14));
}

TEST(Draw, StudentTCovarianceReading) {
  const int n = 100000;
  const Sample s = draw(DistributionSpec::student_t(5.0, Vector::Zero(3), ShapeMatrix::identity(3)), n, 4);
  const DenseMatrix cov = covariance(s.values());
  // Var(X_j^2) for t5 with unit variance is E X^4 - 1 = 9 - 1 = 8.
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(cov(j, j), 1.0, 5.0 * std::sqrt(8.0 / n));
}

TEST(Draw, StudentTScaleReading) {
  const int n = 100000;
  const Sample s = draw(DistributionSpec::student_t(5.0, Vector::Zero(2), ShapeMatrix::identity(2),
                                                    TParameterization::Scale),
                        n, 4);
  const DenseMatrix cov = covariance(s.values());
  // Scale reading: Var = v / (v - 2) = 5/3.
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(cov(j, j), 5.0 / 3.0, 5.0 * (5.0 / 3.0) * std::sqrt(8.0 / n));
}

TEST(Draw, StudentTCovarianceConverges) {
  const auto shape = ar1_shape(5, 0.6);
  const Sample s = draw(DistributionSpec::student_t(5.0, Vector::Zero(5), shape), 100000, 9);
  EXPECT_LT((covariance(s.values()) - shape.omega()).norm(), 0.15);
}

TEST(Draw, LaplaceKurtosis) {
  const int n = 100000;
  const Sample s = draw(DistributionSpec::laplace(Vector::Zero(2), ShapeMatrix::identity(2)), n, 5);
  for (int j = 0; j < 2; ++j) {
    const Vector c = s.values().col(j).array() - s.values().col(j).mean();
    const double m2 = c.squaredNorm() / n;
    const double m4 = c.array().pow(4).sum() / n;
    EXPECT_NEAR(m2, 1.0, 0.03);
    EXPECT_NEAR(m4 / (m2 * m2) - 3.0, 3.0, 0.3);
  }
}

TEST(Draw, SpatialSignsCentered) {
  const int n = 10000;
  const int p = 10;
  for (auto spec : {DistributionSpec::gaussian(Vector::Zero(p), ShapeMatrix::identity(p)),
                    DistributionSpec::student_t(3.0, Vector::Zero(p), ar1_shape(p, 0.5))}) {
    const Sample s = draw(spec, n, 6);
    Vector total = Vector::Zero(p);
    for (Eigen::Index i = 0; i < n; ++i) total += spatial_sign(s.row(i).transpose());
    EXPECT_LT(max_norm(total / n), 4.0 / std::sqrt(static_cast<double>(n) * p)) << spec.describe();
  }
}

TEST(Draw, RejectsEmpty) {
  const auto spec = DistributionSpec::gaussian(Vector::Zero(2), ShapeMatrix::identity(2));
  EXPECT_THROW(draw(spec, 0, 1), Error);
}

}  // namespace
