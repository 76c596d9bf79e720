#include "geomedian/estimator.hpp"

#include "geomedian/error.hpp"
#include "geomedian/rng.hpp"

#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geomedian {
namespace {

// Iterations before the nearest-vertex optimality probe is switched on.
constexpr int kVertexProbeAfter = 25;

struct Evaluation {
  double objective = 0.0;       // sum_i ||x_i - b||, without the constant
  double weight_sum = 0.0;      // sum over non-coincident points of 1/d_i
  Eigen::Index coincident = 0;  // points with d_i <= eps
  Eigen::Index nearest = 0;     // argmin_i d_i
  double nearest_distance = 0.0;
  Vector weighted_points;       // sum over non-coincident points of x_i / d_i
  Vector residual;              // weighted_points - weight_sum * b
};

class DistanceSum {
 public:
  DistanceSum(const Eigen::Ref<const Matrix>& points, double eps)
      : points_(points), eps_(eps), weights_(points.rows()) {}

  Evaluation evaluate(const Vector& b) {
    Evaluation e;
    e.nearest_distance = std::numeric_limits<double>::infinity();
    const Eigen::Index n = points_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = (points_.row(i) - b.transpose()).norm();
      e.objective += d;
      if (d < e.nearest_distance) {
        e.nearest_distance = d;
        e.nearest = i;
      }
      if (d <= eps_) {
        ++e.coincident;
        weights_[i] = 0.0;
      } else {
        weights_[i] = 1.0 / d;
        e.weight_sum += weights_[i];
      }
    }
    e.weighted_points.noalias() = points_.transpose() * weights_;
    e.residual = e.weighted_points - e.weight_sum * b;
    return e;
  }

  /// Kuhn's condition: vertex x_k minimizes the sum iff the norm of the summed
  /// unit directions from x_k to the other points is at most its multiplicity.
  bool vertex_is_optimal(Eigen::Index k) const {
    const Eigen::Index n = points_.rows();
    const Vector vertex = points_.row(k).transpose();
    Vector pull = Vector::Zero(points_.cols());
    Eigen::Index multiplicity = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto diff = points_.row(i).transpose() - vertex;
      const double d = diff.norm();
      if (d <= eps_) {
        ++multiplicity;
      } else {
        pull += diff / d;
      }
    }
    return pull.norm() <= static_cast<double>(multiplicity);
  }

 private:
  const Eigen::Ref<const Matrix>& points_;
  double eps_;
  Vector weights_;
};

// Squared-extrapolation step (Varadhan and Roland) on the Weiszfeld map T:
// with r = T(b) - b and v = T(T(b)) - 2 T(b) + b the candidate is
// b - 2 a r + a^2 v, a = -|r| / |v|. It is kept only when it beats T(T(b)),
// so the objective still decreases monotonically.
Vector extrapolate(DistanceSum& objective, const Vector& b, Vector once) {
  const Evaluation e1 = objective.evaluate(once);
  if (e1.coincident > 0 || e1.weight_sum == 0.0) return once;
  Vector twice = e1.weighted_points / e1.weight_sum;
  const Vector r = once - b;
  const Vector v = twice - once - r;
  const double v_norm = v.norm();
  if (!(v_norm > 0.0)) return twice;
  const double a = std::min(-1.0, -r.norm() / v_norm);
  Vector candidate = b - 2.0 * a * r + a * a * v;
  const Evaluation e2 = objective.evaluate(twice);
  const Evaluation ec = objective.evaluate(candidate);
  if (ec.objective < e2.objective) return candidate;
  return twice;
}

double resolve_eps(const Eigen::Ref<const Matrix>& points, const SolverConfig& config) {
  if (config.anchor_eps) return *config.anchor_eps;
  return 1e-12 * points.cwiseAbs().maxCoeff();
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0) || !(tol_grad > 0.0) || max_iter < 1 ||
      (anchor_eps && !(*anchor_eps >= 0.0))) {
    throw Error(ErrorCode::InvalidArgument,
                "solver config requires tol > 0, tol_grad > 0, max_iter >= 1, anchor_eps >= 0");
  }
}

Vector spatial_sign(const Eigen::Ref<const Vector>& x) {
  const double norm = x.norm();
  if (norm == 0.0) return Vector::Zero(x.size());
  return x / norm;
}

Vector coordinatewise_median(const Eigen::Ref<const Matrix>& points) {
  const Eigen::Index n = points.rows();
  const Eigen::Index p = points.cols();
  // Column-major working copy so every coordinate is contiguous.
  DenseMatrix columns = points;
  Vector median(p);
  const Eigen::Index mid = n / 2;
  for (Eigen::Index j = 0; j < p; ++j) {
    double* first = columns.col(j).data();
    std::nth_element(first, first + mid, first + n);
    double value = first[mid];
    if (n % 2 == 0) value = 0.5 * (*std::max_element(first, first + mid) + value);
    median[j] = value;
  }
  return median;
}

SolverResult minimize_distance_sum(const Eigen::Ref<const Matrix>& points,
                                   const SolverConfig& config) {
  if (points.rows() == 0 || points.cols() == 0) {
    throw Error(ErrorCode::EmptyInput, "cannot take the spatial median of an empty point set");
  }
  return minimize_distance_sum(points, config, coordinatewise_median(points));
}

SolverResult minimize_distance_sum(const Eigen::Ref<const Matrix>& points,
                                   const SolverConfig& config, const Vector& start) {
  config.validate();
  if (points.rows() == 0 || points.cols() == 0) {
    throw Error(ErrorCode::EmptyInput, "cannot take the spatial median of an empty point set");
  }
  const Eigen::Index n = points.rows();
  const double eps = resolve_eps(points, config);
  const double norm_offset = points.rowwise().norm().sum();
  const double residual_slack = static_cast<double>(n) * config.tol_grad;

  DistanceSum objective(points, eps);
  SolverResult result;
  result.anchor_eps = eps;

  if (start.size() != points.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "start point has the wrong dimension");
  }
  Vector b = start;
  bool converged = false;
  int iteration = 0;
  while (iteration < config.max_iter) {
    const Evaluation e = objective.evaluate(b);
    if (config.record_trace) result.objective_trace.push_back(e.objective - norm_offset);
    if (e.weight_sum == 0.0) {  // every point coincides with b
      converged = true;
      break;
    }
    const double eta = static_cast<double>(e.coincident);
    const double pull = e.residual.norm();
    if (e.coincident > 0 && pull <= eta) {  // b is an optimal data point
      converged = true;
      break;
    }
    ++iteration;

    Vector next = e.weighted_points / e.weight_sum;
    if (e.coincident > 0) {
      const double shrink = eta / pull;
      next = (1.0 - shrink) * next + shrink * b;
    }
    const double step = (next - b).norm() / std::max(1.0, b.norm());
    const bool residual_ok = pull <= eta + residual_slack;
    if (step < config.tol && residual_ok) {
      b = std::move(next);
      converged = true;
      break;
    }
    if (iteration >= kVertexProbeAfter && e.nearest_distance > eps &&
        objective.vertex_is_optimal(e.nearest)) {
      b = points.row(e.nearest).transpose();
      converged = true;
      break;
    }
    if (iteration >= kVertexProbeAfter && e.coincident == 0) {
      b = extrapolate(objective, b, std::move(next));
    } else {
      b = std::move(next);
    }
  }

  const Evaluation final_eval = objective.evaluate(b);
  result.minimizer = std::move(b);
  result.iterations = iteration;
  result.objective = final_eval.objective - norm_offset;
  result.grad_norm = final_eval.residual.norm();
  result.coincident = final_eval.coincident;
  if (config.record_trace) result.objective_trace.push_back(result.objective);
  if (!converged) throw DidNotConverge(iteration, result.grad_norm);
  return result;
}

SpatialMedianFit spatial_median(const Sample& sample, const SolverConfig& config) {
  SolverResult solved = minimize_distance_sum(sample.values(), config);

  SpatialMedianFit fit;
  fit.iterations = solved.iterations;
  fit.objective = solved.objective;
  fit.grad_norm = solved.grad_norm;
  fit.anchor_eps = solved.anchor_eps;
  fit.objective_trace = std::move(solved.objective_trace);
  fit.theta_hat = std::move(solved.minimizer);

  const Eigen::Index p = sample.p();
  fit.b_diag_hat = Vector::Zero(p);
  double inverse_radius_sum = 0.0;
  Eigen::Index used = 0;
  for (Eigen::Index i = 0; i < sample.n(); ++i) {
    const Vector r = sample.row(i).transpose() - fit.theta_hat;
    const double radius = r.norm();
    if (radius <= fit.anchor_eps) continue;
    ++used;
    inverse_radius_sum += 1.0 / radius;
    fit.b_diag_hat += r.array().square().matrix() / (radius * radius);
  }
  fit.scale_count = used;
  if (used > 0) {
    fit.zeta1_hat = inverse_radius_sum / static_cast<double>(used);
    fit.b_diag_hat /= static_cast<double>(used);
  }
  return fit;
}

std::vector<Eigen::Index> block_sizes(Eigen::Index n, Eigen::Index k_blocks) {
  if (k_blocks < 1 || k_blocks > n) {
    throw Error(ErrorCode::InvalidArgument, "k_blocks must satisfy 1 <= k_blocks <= n");
  }
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k_blocks), n / k_blocks);
  for (Eigen::Index b = 0; b < n % k_blocks; ++b) ++sizes[static_cast<std::size_t>(b)];
  return sizes;
}

std::vector<Eigen::Index> gmom_permutation(Eigen::Index n, std::uint64_t seed) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto engine = rng::substream(seed, rng::Family::GmomPermutation, 0);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    boost::random::uniform_int_distribution<Eigen::Index> pick(0, i);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(engine))]);
  }
  return order;
}

Vector gmom(const Sample& sample, Eigen::Index k_blocks, const SolverConfig& config,
            std::uint64_t seed) {
  const auto sizes = block_sizes(sample.n(), k_blocks);
  const auto order = gmom_permutation(sample.n(), seed);
  Matrix means(k_blocks, sample.p());
  std::size_t cursor = 0;
  for (Eigen::Index b = 0; b < k_blocks; ++b) {
    Vector sum = Vector::Zero(sample.p());
    const auto size = sizes[static_cast<std::size_t>(b)];
    for (Eigen::Index m = 0; m < size; ++m) sum += sample.row(order[cursor++]).transpose();
    means.row(b) = (sum / static_cast<double>(size)).transpose();
  }
  return minimize_distance_sum(means, config).minimizer;
}

double bahadur_remainder(const Sample& sample, const Eigen::Ref<const Vector>& theta_true,
                         const SpatialMedianFit& fit) {
  if (theta_true.size() != sample.p() || fit.theta_hat.size() != sample.p()) {
    throw Error(ErrorCode::DimensionMismatch, "theta has the wrong length");
  }
  if (!fit.zeta1_hat) {
    throw Error(ErrorCode::DegenerateRemainder,
                "zeta1_hat is undefined: every residual is zero");
  }
  Vector sign_sum = Vector::Zero(sample.p());
  for (Eigen::Index i = 0; i < sample.n(); ++i) {
    sign_sum += spatial_sign(sample.row(i).transpose() - theta_true);
  }
  const double root_n = std::sqrt(static_cast<double>(sample.n()));
  const Vector remainder =
      root_n * (fit.theta_hat - theta_true) - sign_sum / (root_n * *fit.zeta1_hat);
  return max_norm(remainder);
}

}  // namespace geomedian
