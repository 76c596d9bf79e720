#include "geomedian/data_model.hpp"

#include "geomedian/error.hpp"

#include <cmath>
#include <string>

namespace geomedian {

Vector Sample::mean() const { return values_.colwise().mean().transpose(); }

Sample validate_sample(Matrix raw) {
  if (raw.rows() == 0 || raw.cols() == 0) {
    throw Error(ErrorCode::EmptyInput, "sample must have at least one row and one column");
  }
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
      if (!std::isfinite(raw(i, j))) {
        throw NonFiniteEntry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
  }
  return Sample(std::move(raw));
}

Sample validate_sample(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorCode::EmptyInput, "sample must have at least one row and one column");
  }
  const auto p = rows.front().size();
  Matrix raw(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != p) {
      throw Error(ErrorCode::InvalidArgument,
                  "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                      " fields, expected " + std::to_string(p));
    }
    for (std::size_t j = 0; j < p; ++j) {
      raw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return validate_sample(std::move(raw));
}

ShapeMatrix::ShapeMatrix(DenseMatrix omega) : omega_(std::move(omega)) {
  const DenseMatrix off = omega_ - DenseMatrix(omega_.diagonal().asDiagonal());
  diagonal_ = off.cwiseAbs().maxCoeff() == 0.0;
}

ShapeMatrix ShapeMatrix::from_matrix(DenseMatrix omega) {
  if (omega.rows() == 0 || omega.rows() != omega.cols()) {
    throw Error(ErrorCode::InvalidArgument, "shape matrix must be square and non-empty");
  }
  if (!omega.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "shape matrix has non-finite entries");
  }
  const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
  if ((omega - omega.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::InvalidArgument, "shape matrix is not symmetric");
  }
  return ShapeMatrix(std::move(omega));
}

ShapeMatrix ShapeMatrix::normalized(DenseMatrix omega) {
  const double trace = omega.trace();
  if (!(trace > 0.0)) {
    throw Error(ErrorCode::NotPSD, "shape matrix must have positive trace");
  }
  omega *= static_cast<double>(omega.rows()) / trace;
  return from_matrix(std::move(omega));
}

ShapeMatrix ShapeMatrix::identity(Eigen::Index p) {
  return ShapeMatrix(DenseMatrix::Identity(p, p));
}

ShapeMatrix ar1_shape(Eigen::Index p, double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::InvalidRho, "rho must lie in [0, 1), got " + std::to_string(rho));
  }
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  DenseMatrix omega(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    omega(j, j) = 1.0;
    double value = 1.0;
    for (Eigen::Index l = j + 1; l < p; ++l) {
      value *= rho;
      omega(j, l) = value;
      omega(l, j) = value;
    }
  }
  return ShapeMatrix::from_matrix(std::move(omega));
}

DenseMatrix symmetric_sqrt(const DenseMatrix& symmetric) {
  if (symmetric.rows() != symmetric.cols()) {
    throw Error(ErrorCode::InvalidArgument, "matrix square root needs a square matrix");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPSD, "eigendecomposition failed");
  }
  Vector values = solver.eigenvalues();
  const double largest = values.maxCoeff();
  const double smallest = values.minCoeff();
  if (smallest < -1e-10 * std::max(largest, 0.0) || (largest <= 0.0 && smallest < 0.0)) {
    throw Error(ErrorCode::NotPSD,
                "matrix is not positive semi-definite (eigenvalue " + std::to_string(smallest) + ")");
  }
  values = values.cwiseMax(0.0).cwiseSqrt();
  const auto& vectors = solver.eigenvectors();
  DenseMatrix root = vectors * values.asDiagonal() * vectors.transpose();
  return (0.5 * (root + root.transpose())).eval();
}

DenseMatrix symmetric_sqrt(const ShapeMatrix& omega) {
  if (omega.is_diagonal()) {
    const Vector diag = omega.omega().diagonal();
    if (diag.minCoeff() < 0.0) {
      throw Error(ErrorCode::NotPSD, "diagonal shape matrix has a negative entry");
    }
    return DenseMatrix(diag.cwiseSqrt().asDiagonal());
  }
  return symmetric_sqrt(omega.omega());
}

}  // namespace geomedian
