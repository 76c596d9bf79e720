#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace geomedian {

/// Observations are stored row-major so that each observation is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// An n x p data matrix, one observation per row. Every entry is finite and
/// the shape never changes after construction.
class Sample {
 public:
  Eigen::Index n() const noexcept { return values_.rows(); }
  Eigen::Index p() const noexcept { return values_.cols(); }

  const Matrix& values() const noexcept { return values_; }
  auto row(Eigen::Index i) const { return values_.row(i); }

  /// Column means.
  Vector mean() const;

 private:
  explicit Sample(Matrix values) : values_(std::move(values)) {}

  friend Sample validate_sample(Matrix raw);

  Matrix values_;
};

/// Throws EmptyInput for a 0-row or 0-column matrix and NonFiniteEntry for the
/// first NaN/Inf in row-major order.
Sample validate_sample(Matrix raw);

/// Nested-vector convenience overload; ragged rows raise InvalidArgument.
Sample validate_sample(const std::vector<std::vector<double>>& rows);

/// Symmetric positive-definite p x p shape matrix.
class ShapeMatrix {
 public:
  /// Accepts `omega` as given after checking symmetry (1e-12 relative).
  static ShapeMatrix from_matrix(DenseMatrix omega);
  /// Rescales `omega` so that trace(omega) == p.
  static ShapeMatrix normalized(DenseMatrix omega);
  static ShapeMatrix identity(Eigen::Index p);

  Eigen::Index dim() const noexcept { return omega_.rows(); }
  const DenseMatrix& omega() const noexcept { return omega_; }
  bool is_diagonal() const noexcept { return diagonal_; }

 private:
  explicit ShapeMatrix(DenseMatrix omega);

  DenseMatrix omega_;
  bool diagonal_ = false;
};

/// AR(1) correlation: entry (j, l) = rho^|j - l|. Requires 0 <= rho < 1.
ShapeMatrix ar1_shape(Eigen::Index p, double rho);

/// Unique symmetric PSD square root via spectral decomposition. Eigenvalues
/// below -1e-10 * (largest eigenvalue) raise NotPSD; smaller negative
/// round-off is clamped to zero.
DenseMatrix symmetric_sqrt(const ShapeMatrix& omega);
DenseMatrix symmetric_sqrt(const DenseMatrix& symmetric);

/// Max-norm |x|_inf.
inline double max_norm(const Eigen::Ref<const Vector>& x) {
  return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

}  // namespace geomedian
