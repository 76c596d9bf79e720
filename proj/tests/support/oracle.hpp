#pragma once

// Reference spatial-median solver used only by the tests. It shares no code
// with the library: optimal data points are found by Kuhn's vertex condition,
// otherwise the smooth objective is minimised by damped Newton steps.

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace oracle {

using Points = Eigen::MatrixXd;  // one point per row
using Point = Eigen::VectorXd;

inline double distance_sum(const Points& x, const Point& b) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) total += (x.row(i).transpose() - b).norm();
  return total;
}

/// Norm of the minimum-norm subgradient of sum_i ||x_i - b|| at b.
inline double subgradient_residual(const Points& x, const Point& b, double tie = 1e-14) {
  Point pull = Point::Zero(x.cols());
  double ties = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Point d = b - x.row(i).transpose();
    const double r = d.norm();
    if (r <= tie) {
      ties += 1.0;
    } else {
      pull += d / r;
    }
  }
  return std::max(0.0, pull.norm() - ties);
}

/// Levenberg-damped Newton iteration on the smooth part of the objective.
/// The damping grows until the step decreases the objective, so singular
/// Hessians (points spanning a lower-dimensional affine hull) do not stall it.
inline Point newton_median(const Points& x, int max_steps = 500) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Point v = x.row(k).transpose();
    if (subgradient_residual(x, v, 0.0) == 0.0) return v;
  }
  Point b = x.colwise().mean().transpose();
  for (int step = 0; step < max_steps; ++step) {
    Point g = Point::Zero(p);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Point d = b - x.row(i).transpose();
      const double r = d.norm();
      if (r == 0.0) continue;
      const Point u = d / r;
      g += u;
      h += (Eigen::MatrixXd::Identity(p, p) - u * u.transpose()) / r;
    }
    if (g.norm() < 1e-13) break;
    const double f0 = distance_sum(x, b);
    double mu = 1e-12 * (1.0 + h.trace());
    bool moved = false;
    for (int attempt = 0; attempt < 80; ++attempt, mu *= 10.0) {
      const Eigen::MatrixXd damped = h + mu * Eigen::MatrixXd::Identity(p, p);
      const Point next = b + damped.ldlt().solve(-g);
      if (next.allFinite() && distance_sum(x, next) < f0) {
        b = next;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return b;
}

}  // namespace oracle
