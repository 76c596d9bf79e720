#include "geomedian/data_model.hpp"
#include "geomedian/error.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace geomedian;

namespace {

TEST(Sample, RejectsEmpty) {
  try {
    validate_sample(Matrix(0, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
  EXPECT_THROW(validate_sample(Matrix(3, 0)), Error);
}

TEST(Sample, ReportsFirstNonFiniteInRowMajorOrder) {
  Matrix x = Matrix::Zero(3, 3);
  x(2, 0) = std::numeric_limits<double>::quiet_NaN();
  x(1, 2) = std::numeric_limits<double>::infinity();
  try {
    validate_sample(x);
    FAIL();
  } catch (const NonFiniteEntry& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteEntry);
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.col(), 2u);
  }
}

TEST(Sample, RaggedRowsRejected) {
  try {
    validate_sample(std::vector<std::vector<double>>{{1, 2}, {3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(Sample, MeanAndShape) {
  const Sample s = validate_sample(std::vector<std::vector<double>>{{1, 2}, {3, 6}});
  EXPECT_EQ(s.n(), 2);
  EXPECT_EQ(s.p(), 2);
  EXPECT_DOUBLE_EQ(s.mean()[0], 2.0);
  EXPECT_DOUBLE_EQ(s.mean()[1], 4.0);
}

TEST(ShapeMatrix, IdentityIsDiagonal) {
  const auto id = ShapeMatrix::identity(4);
  EXPECT_TRUE(id.is_diagonal());
  EXPECT_EQ(id.dim(), 4);
  EXPECT_TRUE(id.omega().isIdentity());
}

TEST(ShapeMatrix, RejectsAsymmetric) {
  DenseMatrix m(2, 2);
  m << 1, 0.5, 0.4, 1;
  EXPECT_THROW(ShapeMatrix::from_matrix(m), Error);
}

TEST(ShapeMatrix, NormalizedHasTraceP) {
  DenseMatrix m(3, 3);
  m << 4, 1, 0, 1, 2, 0, 0, 0, 6;
  const auto s = ShapeMatrix::normalized(m);
  EXPECT_NEAR(s.omega().trace(), 3.0, 1e-12);
  EXPECT_FALSE(s.is_diagonal());
}

TEST(Ar1, EntriesAndDomain) {
  const auto s = ar1_shape(5, 0.5);
  for (int j = 0; j < 5; ++j)
    for (int l = 0; l < 5; ++l) EXPECT_DOUBLE_EQ(s.omega()(j, l), std::pow(0.5, std::abs(j - l)));
  EXPECT_TRUE(ar1_shape(3, 0.0).is_diagonal());
  for (double rho : {-0.1, 1.0, 1.5}) {
    try {
      ar1_shape(3, rho);
      FAIL() << rho;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidRho);
    }
  }
}

TEST(SymmetricSqrt, SquaresBack) {
  gen::Cases cases(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = cases.integer(1, 12);
    const double rho = cases.real(0.0, 0.95);
    const auto shape = ar1_shape(p, rho);
    const DenseMatrix root = symmetric_sqrt(shape);
    EXPECT_LT((root - root.transpose()).norm(), 1e-12);
    EXPECT_LT((root * root - shape.omega()).norm(), 1e-10 * p);
  }
}

TEST(SymmetricSqrt, RejectsIndefinite) {
  DenseMatrix m(2, 2);
  m << 1, 2, 2, 1;
  try {
    symmetric_sqrt(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPSD);
  }
}

TEST(SymmetricSqrt, ClampsRoundOff) {
  // Rank-one matrix: eigenvalues 2 and 0 up to round-off.
  DenseMatrix m(2, 2);
  m << 1, 1, 1, 1;
  const DenseMatrix root = symmetric_sqrt(m);
  EXPECT_TRUE(root.allFinite());
  EXPECT_LT((root * root - m).norm(), 1e-12);
}

TEST(MaxNorm, Basic) {
  Vector v(3);
  v << 1, -4, 2;
  EXPECT_DOUBLE_EQ(max_norm(v), 4.0);
  EXPECT_DOUBLE_EQ(max_norm(Vector()), 0.0);
}

}  // namespace
