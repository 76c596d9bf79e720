#include "geomedian/harness.hpp"

#include "geomedian/bootstrap.hpp"
#include "geomedian/error.hpp"
#include "geomedian/parallel.hpp"
#include "geomedian/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace geomedian {
namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t replication_seed(std::uint64_t seed, std::size_t r) {
  return rng::derive_seed(seed, rng::Family::Replication, r);
}

/// Runs body(r) for every replication and returns the results by index. A
/// failure is rethrown with the scenario name and replication attached.
template <class T>
std::vector<T> replicate(const ScenarioSpec& spec, std::size_t count,
                         const std::function<T(std::size_t)>& body) {
  std::vector<T> out(count);
  parallel_for(count, spec.workers, [&](std::size_t r) {
    try {
      out[r] = body(r);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "scenario '" << spec.name << "', replication " << r << ": " << e.what();
      throw Error(e.code(), os.str());
    }
  });
  return out;
}

double bernoulli_stderr(double rate, std::size_t m) {
  return std::sqrt(std::max(0.0, rate * (1.0 - rate)) / static_cast<double>(m));
}

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (const double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (const double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size();
  return k % 2 ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
}

double sample_variance(const std::vector<double>& xs) {
  const double s = sd_of(xs);
  return s * s;
}

/// Jackknife standard error of var(a) / var(b) over paired replications.
double jackknife_ratio_stderr(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t m = a.size();
  if (m < 3) return 0.0;
  const double mean_a = mean_of(a);
  const double mean_b = mean_of(b);
  double sa = 0.0, saa = 0.0, sb = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sa += da;
    saa += da * da;
    sb += db;
    sbb += db * db;
  }
  const double k = static_cast<double>(m - 1);
  std::vector<double> loo(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    const double ma = (sa - da) / k;
    const double mb = (sb - db) / k;
    const double va = (saa - da * da - k * ma * ma) / (k - 1.0);
    const double vb = (sbb - db * db - k * mb * mb) / (k - 1.0);
    loo[i] = va / vb;
  }
  const double center = mean_of(loo);
  double ss = 0.0;
  for (const double x : loo) ss += (x - center) * (x - center);
  return std::sqrt(k / static_cast<double>(m) * ss);
}

MetricsRow base_row(const ScenarioSpec& spec, Eigen::Index n, Eigen::Index p, double level,
                    std::string method) {
  MetricsRow row;
  row.scenario = spec.name;
  row.n = n;
  row.p = p;
  row.level = level;
  row.method = std::move(method);
  return row;
}

void stamp_runtime(MetricsTable& table, const ScenarioSpec& spec, Clock::time_point start) {
  if (!spec.timing) return;
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  for (auto& row : table.rows) row.runtime_seconds = seconds;
}

InferenceOptions single_threaded(const ScenarioSpec& spec) { return {spec.solver, 1}; }

}  // namespace

std::string_view to_string(Experiment experiment) noexcept {
  switch (experiment) {
    case Experiment::Coverage: return "coverage";
    case Experiment::SizePower: return "size_power";
    case Experiment::Fdr: return "fdr";
    case Experiment::Are: return "are";
  }
  return "unknown";
}

DistributionSpec ModelTemplate::instantiate(Vector theta) const {
  const auto p = theta.size();
  ShapeMatrix sigma = rho == 0.0 ? ShapeMatrix::identity(p) : ar1_shape(p, rho);
  switch (kind) {
    case DistributionKind::GaussianI: return DistributionSpec::gaussian(std::move(theta), sigma);
    case DistributionKind::StudentT:
      return DistributionSpec::student_t(df, std::move(theta), sigma, t_param);
    case DistributionKind::LaplaceIC: return DistributionSpec::laplace(std::move(theta), sigma);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown distribution kind");
}

std::string ModelTemplate::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == DistributionKind::StudentT) os << '(' << df << ", " << to_string(t_param) << ')';
  os << " rho=" << rho;
  return os.str();
}

void ScenarioSpec::validate() const {
  if (n < 1 || p < 1) throw Error(ErrorCode::InvalidArgument, "scenario needs n, p >= 1");
  if (replications < 1) throw Error(ErrorCode::InvalidArgument, "replications must be >= 1");
  if (B < 1) throw Error(ErrorCode::InvalidArgument, "B must be >= 1");
  if (experiment != Experiment::Are && levels.empty()) {
    throw Error(ErrorCode::InvalidLevel, "scenario needs at least one level");
  }
  for (const double level : levels) {
    if (!(level > 0.0 && level < 1.0)) {
      throw Error(ErrorCode::InvalidLevel, "levels must lie in (0, 1)");
    }
  }
  if (distribution.rho < 0.0 || distribution.rho >= 1.0) {
    throw Error(ErrorCode::InvalidRho, "rho must lie in [0, 1)");
  }
  if (distribution.kind == DistributionKind::StudentT && !(distribution.df > 2.0)) {
    throw Error(ErrorCode::InvalidDf, "multivariate t needs df > 2");
  }
  if (experiment == Experiment::SizePower && (kappa_grid.empty() || methods.empty())) {
    throw Error(ErrorCode::InvalidArgument, "size/power needs a kappa grid and methods");
  }
  solver.validate();
}

const std::vector<std::string>& MetricsTable::columns() {
  static const std::vector<std::string> names{
      "scenario", "n",         "p",          "kappa",     "level",     "method",
      "coverage", "median_length", "size",   "power",     "fdr",       "fdr_power",
      "are_ratio", "mc_stderr", "runtime_seconds"};
  return names;
}

void MetricsTable::append(const MetricsTable& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

// ---------------------------------------------------------------------------

MetricsTable run_coverage(const ScenarioSpec& spec) {
  spec.validate();
  const auto start = Clock::now();
  const Vector theta = theta_vector(spec.theta_pattern, spec.p, spec.n);
  const Sampler sampler(spec.distribution.instantiate(theta));
  const std::size_t levels = spec.levels.size();
  const auto options = single_threaded(spec);

  struct Outcome {
    // [method][level], method 0 = spatial median, 1 = mean
    std::vector<char> covered[2];
    std::vector<double> width[2];
  };
  const auto outcomes = replicate<Outcome>(spec, spec.replications, [&](std::size_t r) {
    const auto seed = replication_seed(spec.seed, r);
    const Sample sample = sampler.draw(spec.n, seed);
    const auto fit = spatial_median(sample, options.solver);
    const BootstrapDraws draws[2] = {
        bootstrap_spatial_median(sample, fit, spec.B, seed, options.solver, 1),
        bootstrap_mean(sample, spec.B, seed, 1)};
    const Vector centers[2] = {fit.theta_hat, sample.mean()};
    const CenterMethod kinds[2] = {CenterMethod::SpatialMedian, CenterMethod::Mean};
    Outcome out;
    for (int m = 0; m < 2; ++m) {
      for (const double level : spec.levels) {
        const auto sci = sci_from_draws(centers[m], draws[m], level, kinds[m]);
        out.covered[m].push_back(sci.covers(theta) ? 1 : 0);
        out.width[m].push_back(sci.width());
      }
    }
    return out;
  });

  MetricsTable table;
  const CenterMethod kinds[2] = {CenterMethod::SpatialMedian, CenterMethod::Mean};
  for (std::size_t l = 0; l < levels; ++l) {
    for (int m = 0; m < 2; ++m) {
      double hits = 0.0;
      std::vector<double> widths;
      widths.reserve(outcomes.size());
      for (const auto& o : outcomes) {
        hits += o.covered[m][l];
        widths.push_back(o.width[m][l]);
      }
      auto row = base_row(spec, spec.n, spec.p, spec.levels[l], std::string(to_string(kinds[m])));
      const double rate = hits / static_cast<double>(outcomes.size());
      row.coverage = rate;
      row.median_length = median_of(std::move(widths));
      row.mc_stderr = bernoulli_stderr(rate, outcomes.size());
      table.rows.push_back(std::move(row));
    }
  }
  stamp_runtime(table, spec, start);
  return table;
}

// ---------------------------------------------------------------------------

MetricsTable run_size_power(const ScenarioSpec& spec) {
  return run_size_power(spec, spec.kappa_grid, spec.c0, spec.methods);
}

MetricsTable run_size_power(const ScenarioSpec& spec, const std::vector<double>& kappa_grid,
                            double c0, const std::vector<TestMethod>& methods) {
  spec.validate();
  if (kappa_grid.empty() || methods.empty()) {
    throw Error(ErrorCode::InvalidArgument, "size/power needs a kappa grid and methods");
  }
  const auto start = Clock::now();
  const Sampler sampler(spec.distribution.instantiate(Vector::Zero(spec.p)));
  std::vector<Vector> shifts;
  for (const double kappa : kappa_grid) {
    shifts.push_back(theta_vector(ThetaPattern::log_sparse(c0, kappa), spec.p, spec.n));
  }
  const Vector theta0 = Vector::Zero(spec.p);
  const auto options = single_threaded(spec);
  const std::size_t K = kappa_grid.size();
  const std::size_t L = spec.levels.size();
  const std::size_t M = methods.size();
  const double root_n = std::sqrt(static_cast<double>(spec.n));

  // rejections[(k * L + l) * M + m]
  const auto outcomes =
      replicate<std::vector<char>>(spec, spec.replications, [&](std::size_t r) {
        const auto seed = replication_seed(spec.seed, r);
        const Matrix noise = sampler.draw_noise(spec.n, seed);
        std::vector<char> reject(K * L * M, 0);

        std::optional<BootstrapDraws> median_draws;
        std::optional<BootstrapDraws> mean_draws;
        for (std::size_t k = 0; k < K; ++k) {
          Matrix shifted = noise;
          shifted.rowwise() += shifts[k].transpose();
          const Sample sample = validate_sample(std::move(shifted));
          for (std::size_t m = 0; m < M; ++m) {
            double statistic = 0.0;
            const BootstrapDraws* draws = nullptr;
            switch (methods[m]) {
              case TestMethod::MedianMax: {
                const auto fit = spatial_median(sample, options.solver);
                if (!median_draws) {
                  median_draws =
                      bootstrap_spatial_median(sample, fit, spec.B, seed, options.solver, 1);
                }
                statistic = root_n * max_norm(fit.theta_hat - theta0);
                draws = &*median_draws;
                break;
              }
              case TestMethod::MeanMax:
                if (!mean_draws) mean_draws = bootstrap_mean(sample, spec.B, seed, 1);
                statistic = root_n * max_norm(sample.mean() - theta0);
                draws = &*mean_draws;
                break;
              case TestMethod::WPL:
              case TestMethod::CQ:
                break;
            }
            for (std::size_t l = 0; l < L; ++l) {
              const double alpha = spec.levels[l];
              bool decision = false;
              if (draws) {
                decision = max_test_from_draws(statistic, *draws, alpha, methods[m]).reject;
              } else if (methods[m] == TestMethod::WPL) {
                decision = global_test_wpl(sample, theta0, alpha).reject;
              } else {
                decision = global_test_cq(sample, theta0, alpha).reject;
              }
              reject[(k * L + l) * M + m] = decision ? 1 : 0;
            }
          }
        }
        return reject;
      });

  MetricsTable table;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t l = 0; l < L; ++l) {
      for (std::size_t m = 0; m < M; ++m) {
        double hits = 0.0;
        for (const auto& o : outcomes) hits += o[(k * L + l) * M + m];
        const double rate = hits / static_cast<double>(outcomes.size());
        auto row = base_row(spec, spec.n, spec.p, spec.levels[l], std::string(to_string(methods[m])));
        row.kappa = kappa_grid[k];
        row.power = rate;
        if (kappa_grid[k] == 0.0) row.size = rate;
        row.mc_stderr = bernoulli_stderr(rate, outcomes.size());
        table.rows.push_back(std::move(row));
      }
    }
  }
  stamp_runtime(table, spec, start);
  return table;
}

// ---------------------------------------------------------------------------

namespace {

struct ScreenOutcome {
  double fdp = 0.0;
  std::optional<double> tpp;
};

ScreenOutcome score_screen(const FdrDecision& decision, const Eigen::Ref<const Vector>& theta) {
  std::size_t false_hits = 0;
  std::size_t true_hits = 0;
  for (const std::size_t j : decision.rejected) {
    if (theta[static_cast<Eigen::Index>(j)] == 0.0) {
      ++false_hits;
    } else {
      ++true_hits;
    }
  }
  const auto signals = (theta.array() != 0.0).count();
  ScreenOutcome out;
  out.fdp = static_cast<double>(false_hits) /
            static_cast<double>(std::max<std::size_t>(decision.rejected.size(), 1));
  if (signals > 0) out.tpp = static_cast<double>(true_hits) / static_cast<double>(signals);
  return out;
}

/// Classical two-sided p-values of sqrt(n) X_bar_j / sd_j.
Vector mean_t_p_values(const Sample& sample) {
  const Vector mean = sample.mean();
  const Matrix centered = sample.values().rowwise() - mean.transpose();
  const double n = static_cast<double>(sample.n());
  const Vector sd = (centered.colwise().squaredNorm().transpose() / (n - 1.0)).cwiseSqrt();
  Vector p(sample.p());
  for (Eigen::Index j = 0; j < sample.p(); ++j) {
    if (!(sd[j] > 0.0)) throw ZeroScale(static_cast<std::size_t>(j));
    p[j] = two_sided_normal_p(std::sqrt(n) * mean[j] / sd[j]);
  }
  return p;
}

}  // namespace

MetricsTable run_fdr(const ScenarioSpec& spec) {
  spec.validate();
  if (spec.n < 2) throw Error(ErrorCode::InvalidArgument, "FDR experiment needs n >= 2");
  const auto start = Clock::now();
  const Vector theta = theta_vector(spec.theta_pattern, spec.p, spec.n);
  const Sampler sampler(spec.distribution.instantiate(theta));
  const Vector theta0 = Vector::Zero(spec.p);
  const std::size_t L = spec.levels.size();

  // [l * 2 + m], m = 0 spatial median, m = 1 mean
  const auto outcomes =
      replicate<std::vector<ScreenOutcome>>(spec, spec.replications, [&](std::size_t r) {
        const Sample sample = sampler.draw(spec.n, replication_seed(spec.seed, r));
        const auto fit = spatial_median(sample, spec.solver);
        const Vector t = marginal_stats(sample, fit, theta0);
        const Vector median_p = t.unaryExpr([](double x) { return two_sided_normal_p(x); });
        const Vector mean_p = mean_t_p_values(sample);
        const auto as_span = [](const Vector& v) {
          return std::span<const double>(v.data(), static_cast<std::size_t>(v.size()));
        };
        std::vector<ScreenOutcome> out;
        for (const double alpha : spec.levels) {
          out.push_back(score_screen(bh_fdr(as_span(median_p), alpha), theta));
          out.push_back(score_screen(bh_fdr(as_span(mean_p), alpha), theta));
        }
        return out;
      });

  MetricsTable table;
  const CenterMethod kinds[2] = {CenterMethod::SpatialMedian, CenterMethod::Mean};
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t m = 0; m < 2; ++m) {
      std::vector<double> fdp;
      std::vector<double> tpp;
      for (const auto& o : outcomes) {
        fdp.push_back(o[l * 2 + m].fdp);
        if (o[l * 2 + m].tpp) tpp.push_back(*o[l * 2 + m].tpp);
      }
      auto row = base_row(spec, spec.n, spec.p, spec.levels[l], std::string(to_string(kinds[m])));
      row.fdr = mean_of(fdp);
      if (!tpp.empty()) row.fdr_power = mean_of(tpp);
      row.mc_stderr = sd_of(fdp) / std::sqrt(static_cast<double>(fdp.size()));
      table.rows.push_back(std::move(row));
    }
  }
  stamp_runtime(table, spec, start);
  return table;
}

// ---------------------------------------------------------------------------

MetricsTable run_are(const ScenarioSpec& spec) {
  const std::vector<Eigen::Index> p_grid = spec.p_grid.empty() ? std::vector{spec.p} : spec.p_grid;
  const std::vector<Eigen::Index> n_grid = spec.n_grid.empty() ? std::vector{spec.n} : spec.n_grid;
  return run_are(spec, p_grid, n_grid);
}

MetricsTable run_are(const ScenarioSpec& spec, const std::vector<Eigen::Index>& p_grid,
                     const std::vector<Eigen::Index>& n_grid) {
  spec.validate();
  if (p_grid.empty() || n_grid.empty()) {
    throw Error(ErrorCode::InvalidArgument, "ARE experiment needs non-empty grids");
  }
  for (const auto n : n_grid) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "ARE experiment needs every n >= 2");
  }
  for (const auto p : p_grid) {
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "ARE experiment needs every p >= 1");
  }
  if (spec.replications < 2) {
    throw Error(ErrorCode::TooFewDraws, "ARE experiment needs at least two replications");
  }
  const auto start = Clock::now();
  const auto options = single_threaded(spec);

  // Replication r at sample size n uses the same seed for every p, so with an
  // identity shape the p-dimensional rows extend the lower-dimensional ones.
  MetricsTable table;
  for (const auto p : p_grid) {
    const Sampler sampler(spec.distribution.instantiate(Vector::Zero(p)));
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
      const auto n = n_grid[ni];
      const auto grid_seed = rng::derive_seed(spec.seed, rng::Family::Synthetic, ni);
      const Vector location = theta_vector(spec.theta_pattern, p, n);
      struct Outcome {
        double mean_norm = 0.0;
        double median_norm = 0.0;
        double bootstrap = 0.0;
      };
      const auto outcomes = replicate<Outcome>(spec, spec.replications, [&](std::size_t r) {
        const auto seed = replication_seed(grid_seed, r);
        Matrix x = sampler.draw_noise(n, seed);
        x.rowwise() += location.transpose();
        const Sample sample = validate_sample(std::move(x));
        Outcome o;
        o.mean_norm = max_norm(sample.mean());
        o.median_norm = max_norm(spatial_median(sample, options.solver).theta_hat);
        if (spec.are_bootstrap) o.bootstrap = are_bootstrap(sample, spec.B, seed, options).are_estimate;
        return o;
      });
      std::vector<double> a, b, boot;
      for (const auto& o : outcomes) {
        a.push_back(o.mean_norm);
        b.push_back(o.median_norm);
        boot.push_back(o.bootstrap);
      }
      const double median_var = sample_variance(b);
      if (!(median_var > 0.0)) {
        throw Error(ErrorCode::ZeroVariance, "spatial-median norms have zero variance");
      }
      auto row = base_row(spec, n, p, 0.0, "MonteCarlo");
      row.are_ratio = sample_variance(a) / median_var;
      row.mc_stderr = jackknife_ratio_stderr(a, b);
      table.rows.push_back(std::move(row));
      if (spec.are_bootstrap) {
        auto brow = base_row(spec, n, p, 0.0, "Bootstrap");
        brow.are_ratio = mean_of(boot);
        brow.mc_stderr = sd_of(boot) / std::sqrt(static_cast<double>(boot.size()));
        table.rows.push_back(std::move(brow));
      }
    }
  }
  stamp_runtime(table, spec, start);
  return table;
}

MetricsTable run_scenario(const ScenarioSpec& spec) {
  switch (spec.experiment) {
    case Experiment::Coverage: return run_coverage(spec);
    case Experiment::SizePower: return run_size_power(spec);
    case Experiment::Fdr: return run_fdr(spec);
    case Experiment::Are: return run_are(spec);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown experiment");
}

std::vector<BahadurPoint> bahadur_decay(const ModelTemplate& model, Eigen::Index p,
                                        const std::vector<Eigen::Index>& n_grid,
                                        std::size_t replications, std::uint64_t seed,
                                        const SolverConfig& solver, unsigned workers) {
  if (replications < 2) throw Error(ErrorCode::TooFewDraws, "need at least two replications");
  const Vector theta = Vector::Zero(p);
  const Sampler sampler(model.instantiate(theta));
  std::vector<BahadurPoint> points;
  std::size_t grid_index = 0;
  for (const auto n : n_grid) {
    const auto grid_seed = rng::derive_seed(seed, rng::Family::Synthetic, grid_index++);
    std::vector<double> remainders(replications);
    parallel_for(replications, workers, [&](std::size_t r) {
      const Sample sample = sampler.draw(n, replication_seed(grid_seed, r));
      remainders[r] = bahadur_remainder(sample, theta, spatial_median(sample, solver));
    });
    points.push_back({n, mean_of(remainders),
                      sd_of(remainders) / std::sqrt(static_cast<double>(replications))});
  }
  return points;
}

}  // namespace geomedian
