#pragma once

#include "geomedian/estimator.hpp"
#include "geomedian/inference.hpp"
#include "geomedian/simdata.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace geomedian {

enum class Experiment { Coverage, SizePower, Fdr, Are };
enum class ReportFormat { Csv, Json, Markdown };

std::string_view to_string(Experiment experiment) noexcept;

/// A distribution family without its location: Sigma is the AR(1) matrix
/// rho^|j - l| in whatever dimension the experiment asks for.
struct ModelTemplate {
  DistributionKind kind = DistributionKind::GaussianI;
  double df = 0.0;
  TParameterization t_param = TParameterization::Covariance;
  double rho = 0.0;

  DistributionSpec instantiate(Vector theta) const;
  std::string describe() const;
};

/// Declarative Monte Carlo experiment.
///
/// `levels` are confidence levels for Coverage and significance levels for
/// SizePower and Fdr; Are ignores them. Replication r draws its sample from
/// derive_seed(seed, Replication, r), and every method in that replication
/// sees the same sample.
struct ScenarioSpec {
  std::string name = "scenario";
  Experiment experiment = Experiment::Coverage;
  ModelTemplate distribution{};
  Eigen::Index n = 100;
  Eigen::Index p = 100;
  ThetaPattern theta_pattern = ThetaPattern::sparse3();
  std::size_t replications = 500;
  std::size_t B = 200;
  std::vector<double> levels{0.9};
  std::uint64_t seed = 0;

  // SizePower: the signal kappa sqrt(log p / n) sits on floor(c0 log p) coordinates.
  std::vector<double> kappa_grid{0.0};
  double c0 = 0.5;
  std::vector<TestMethod> methods{TestMethod::MedianMax, TestMethod::MeanMax, TestMethod::WPL};

  // Are: empty grids fall back to {n} and {p}.
  std::vector<Eigen::Index> n_grid;
  std::vector<Eigen::Index> p_grid;
  bool are_bootstrap = false;

  unsigned workers = 1;
  bool timing = false;
  SolverConfig solver{};

  /// InvalidArgument / InvalidLevel on malformed settings.
  void validate() const;
};

/// Strict parser: unknown keys are a ParseError.
ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioSpec& spec);

/// One aggregated result. Metrics that do not apply to the experiment are
/// left empty.
struct MetricsRow {
  std::string scenario;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  std::optional<double> kappa;
  double level = 0.0;
  std::string method;
  std::optional<double> coverage;
  std::optional<double> median_length;
  std::optional<double> size;
  std::optional<double> power;
  std::optional<double> fdr;
  std::optional<double> fdr_power;
  std::optional<double> are_ratio;
  double mc_stderr = 0.0;
  std::optional<double> runtime_seconds;

  bool operator==(const MetricsRow&) const = default;
};

struct MetricsTable {
  std::vector<MetricsRow> rows;

  /// Column names in report order.
  static const std::vector<std::string>& columns();
  void append(const MetricsTable& other);
};

/// SCIs from both centers on each sample; coverage is the fraction of
/// replications whose intervals hold every coordinate of theta, and
/// median_length the median interval width across replications.
MetricsTable run_coverage(const ScenarioSpec& spec);

/// Rejection frequencies of H0: theta = 0 per (kappa, level, method). The
/// kappa = 0 rows also carry `size`. The noise of a replication is shared
/// across the kappa grid; bootstrap critical values are computed once per
/// replication because the bootstrap residuals do not depend on a location
/// shift.
MetricsTable run_size_power(const ScenarioSpec& spec);
MetricsTable run_size_power(const ScenarioSpec& spec, const std::vector<double>& kappa_grid,
                            double c0, const std::vector<TestMethod>& methods);

/// Mean FDP and true-positive proportion of the spatial-median screen and of
/// the t-statistic baseline sqrt(n) X_bar_j / sd_j with normal p-values.
MetricsTable run_fdr(const ScenarioSpec& spec);

/// Var(|X_bar|_inf) / Var(|theta_hat|_inf) across replications for every
/// (n, p) grid point, with a jackknife standard error. With are_bootstrap set
/// a second row averages the per-sample bootstrap estimate.
MetricsTable run_are(const ScenarioSpec& spec);
MetricsTable run_are(const ScenarioSpec& spec, const std::vector<Eigen::Index>& p_grid,
                     const std::vector<Eigen::Index>& n_grid);

/// Dispatches on spec.experiment.
MetricsTable run_scenario(const ScenarioSpec& spec);

/// Mean empirical Bahadur remainder at one sample size.
struct BahadurPoint {
  Eigen::Index n = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean remainder over `replications` samples with theta = 0 for each n.
std::vector<BahadurPoint> bahadur_decay(const ModelTemplate& model, Eigen::Index p,
                                        const std::vector<Eigen::Index>& n_grid,
                                        std::size_t replications, std::uint64_t seed,
                                        const SolverConfig& solver = {}, unsigned workers = 1);

/// CSV and JSON are lossless; Markdown shows coverage tables as
/// "median-center (mean-center)" pairs and everything else as a flat table.
std::string emit_report(const MetricsTable& table, ReportFormat format);
MetricsTable metrics_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MetricsTable& table);

}  // namespace geomedian
