#include "geomedian_cli/cli.hpp"

#include "geomedian/bootstrap.hpp"
#include "geomedian/csv.hpp"
#include "geomedian/error.hpp"
#include "geomedian/estimator.hpp"
#include "geomedian/harness.hpp"
#include "geomedian/inference.hpp"
#include "geomedian/parallel.hpp"
#include "geomedian/serialize.hpp"
#include "geomedian/simdata.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace geomedian::cli {
namespace {

using nlohmann::json;

struct Options {
  std::string in;
  std::string out;
  double level = 0.95;
  std::optional<double> alpha;
  std::size_t boot = kDefaultBootstrapReplicates;
  std::optional<std::uint64_t> seed;
  Eigen::Index blocks = 0;
  std::string method;
  std::string null_spec = "zeros";
  std::string config;
  unsigned workers = 0;
  std::string format = "json";
  bool timing = false;

  // are
  std::string are_model;
  double df = 0.0;

  // generate
  std::string model = "gaussian";
  std::string t_param = "covariance";
  double rho = 0.0;
  Eigen::Index n = 100;
  Eigen::Index p = 100;
  std::string pattern = "zero";
  double c0 = 0.5;
  double kappa = 0.0;
  double scale = 2.0;
};

/// Raised for semantic usage errors that CLI11 cannot see.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t require_seed(const Options& o, const char* subcommand) {
  if (!o.seed) throw UsageError(std::string(subcommand) + " needs --seed");
  return *o.seed;
}

Sample load_input(const Options& o) {
  if (o.in.empty()) throw UsageError("--in is required");
  return csv::read_sample(std::filesystem::path(o.in));
}

Vector load_null(const Options& o, Eigen::Index p) {
  if (o.null_spec == "zeros") return Vector::Zero(p);
  std::ifstream file(o.null_spec);
  if (!file) throw Error(ErrorCode::IoError, "cannot open null vector file '" + o.null_spec + "'");
  const auto table = csv::read_table(file);
  if (table.rows.size() != 1) {
    throw Error(ErrorCode::ParseError, "null vector file must hold exactly one row");
  }
  const auto& row = table.rows.front();
  Vector theta0(static_cast<Eigen::Index>(row.size()));
  for (std::size_t j = 0; j < row.size(); ++j) theta0[static_cast<Eigen::Index>(j)] = row[j];
  if (theta0.size() != p) {
    throw Error(ErrorCode::DimensionMismatch, "null vector has length " +
                                                  std::to_string(theta0.size()) + ", data has p = " +
                                                  std::to_string(p));
  }
  return theta0;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open output file '" + o.out + "'");
  file << text;
}

std::string dump(const json& j) { return j.dump(2) + '\n'; }

void require_json(const Options& o) {
  if (o.format != "json") throw UsageError("this subcommand only writes --format json");
}

InferenceOptions inference_options(const Options& o) { return {SolverConfig{}, o.workers}; }

// ---------------------------------------------------------------------------

std::string cmd_estimate(const Options& o) {
  require_json(o);
  const Sample sample = load_input(o);
  json j = to_json(spatial_median(sample));
  j["n"] = sample.n();
  j["p"] = sample.p();
  return dump(j);
}

std::string cmd_gmom(const Options& o) {
  require_json(o);
  const auto seed = require_seed(o, "gmom");
  const Sample sample = load_input(o);
  if (o.blocks < 1) throw UsageError("gmom needs --blocks >= 1");
  const Vector estimate = gmom(sample, o.blocks, SolverConfig{}, seed);
  return dump({{"theta_hat", vector_json(estimate)}, {"blocks", o.blocks}, {"seed", seed}});
}

CenterMethod center_method(const Options& o) {
  if (o.method.empty() || o.method == "median") return CenterMethod::SpatialMedian;
  if (o.method == "mean") return CenterMethod::Mean;
  throw UsageError("sci supports --method median|mean");
}

std::string cmd_sci(const Options& o) {
  const auto seed = require_seed(o, "sci");
  const Sample sample = load_input(o);
  const auto result = sci(sample, o.level, o.boot, seed, center_method(o), inference_options(o));
  if (o.format == "json") {
    json j = to_json(result);
    j["B"] = o.boot;
    j["seed"] = seed;
    return dump(j);
  }
  std::ostringstream os;
  if (o.format == "csv") {
    os << "coordinate,lower,upper\n";
    for (Eigen::Index j = 0; j < result.lower.size(); ++j) {
      os << j << ',' << csv::format_real(result.lower[j]) << ','
         << csv::format_real(result.upper[j]) << '\n';
    }
  } else {
    os << "| coordinate | lower | upper |\n| --- | --- | --- |\n";
    for (Eigen::Index j = 0; j < result.lower.size(); ++j) {
      os << "| " << j << " | " << csv::format_real(result.lower[j]) << " | "
         << csv::format_real(result.upper[j]) << " |\n";
    }
  }
  return os.str();
}

std::string cmd_test(const Options& o) {
  require_json(o);
  const Sample sample = load_input(o);
  const Vector theta0 = load_null(o, sample.p());
  const double alpha = o.alpha.value_or(0.05);
  const std::string method = o.method.empty() ? "median" : o.method;
  GlobalTestResult result;
  json extra;
  if (method == "median" || method == "mean") {
    const auto seed = require_seed(o, "test");
    result = method == "median"
                 ? global_test_median(sample, theta0, alpha, o.boot, seed, inference_options(o))
                 : global_test_mean(sample, theta0, alpha, o.boot, seed, inference_options(o));
    extra = {{"B", o.boot}, {"seed", seed}};
  } else if (method == "wpl") {
    result = global_test_wpl(sample, theta0, alpha);
  } else if (method == "cq") {
    result = global_test_cq(sample, theta0, alpha);
  } else {
    throw UsageError("test supports --method median|mean|wpl|cq");
  }
  json j = to_json(result);
  j["alpha"] = alpha;
  if (!extra.is_null()) j.update(extra);
  return dump(j);
}

std::string cmd_fdr(const Options& o) {
  require_json(o);
  const Sample sample = load_input(o);
  const Vector theta0 = load_null(o, sample.p());
  return dump(to_json(fdr_screen(sample, theta0, o.alpha.value_or(0.1))));
}

std::string cmd_are(const Options& o) {
  require_json(o);
  const auto seed = require_seed(o, "are");
  const Sample sample = load_input(o);
  AreReport report = are_bootstrap(sample, o.boot, seed, inference_options(o));
  if (!o.are_model.empty()) {
    AreModel model;
    if (o.are_model == "gaussian") {
      model = AreModel::gaussian();
    } else if (o.are_model == "t") {
      model = AreModel::student_t(o.df);
    } else {
      throw UsageError("are supports --model gaussian|t");
    }
    report.are_analytic = are_analytic(model, sample.p());
    report.model = model.describe();
  }
  json j = to_json(report);
  j["B"] = o.boot;
  j["seed"] = seed;
  return dump(j);
}

ModelTemplate model_template(const Options& o) {
  static const std::map<std::string, DistributionKind> kinds{
      {"gaussian", DistributionKind::GaussianI},
      {"t", DistributionKind::StudentT},
      {"laplace", DistributionKind::LaplaceIC}};
  const auto kind = kinds.find(o.model);
  if (kind == kinds.end()) throw UsageError("generate supports --model gaussian|t|laplace");
  if (o.t_param != "covariance" && o.t_param != "scale") {
    throw UsageError("--t-param must be covariance or scale");
  }
  ModelTemplate m;
  m.kind = kind->second;
  m.df = o.df;
  m.rho = o.rho;
  m.t_param =
      o.t_param == "scale" ? TParameterization::Scale : TParameterization::Covariance;
  return m;
}

ThetaPattern theta_pattern(const Options& o) {
  if (o.pattern == "zero") return ThetaPattern::zero();
  if (o.pattern == "sparse3") return ThetaPattern::sparse3();
  if (o.pattern == "dense_quarter") return ThetaPattern::dense_quarter();
  if (o.pattern == "log_sparse") return ThetaPattern::log_sparse(o.c0, o.kappa);
  if (o.pattern == "ten_percent") return ThetaPattern::ten_percent(o.scale);
  throw UsageError("--pattern must be zero|sparse3|dense_quarter|log_sparse|ten_percent");
}

std::string cmd_generate(const Options& o) {
  if (o.format != "csv" && o.format != "json") throw UsageError("generate writes CSV");
  const auto seed = require_seed(o, "generate");
  if (o.n < 1 || o.p < 1) throw UsageError("generate needs --n, --p >= 1");
  const auto spec = model_template(o).instantiate(theta_vector(theta_pattern(o), o.p, o.n));
  const Sample sample = Sampler(spec).draw(o.n, seed, o.workers);
  std::ostringstream os;
  csv::write_sample(os, sample);
  return os.str();
}

std::string cmd_simulate(const Options& o) {
  if (o.config.empty()) throw UsageError("simulate needs --config");
  ReportFormat format;
  if (o.format == "json") {
    format = ReportFormat::Json;
  } else if (o.format == "csv") {
    format = ReportFormat::Csv;
  } else {
    format = ReportFormat::Markdown;
  }
  std::ifstream file(o.config);
  if (!file) throw Error(ErrorCode::IoError, "cannot open config '" + o.config + "'");
  json config;
  try {
    config = json::parse(file);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config is not valid JSON: ") + e.what());
  }
  const json scenarios = config.is_array() ? config : json::array({config});
  MetricsTable table;
  for (const auto& entry : scenarios) {
    ScenarioSpec spec = scenario_from_json(entry);
    if (o.seed) {
      spec.seed = *o.seed;
    } else if (!entry.contains("seed")) {
      throw UsageError("every scenario needs a seed (in the config or via --seed)");
    }
    spec.workers = o.workers;
    spec.timing = spec.timing || o.timing;
    table.append(run_scenario(spec));
  }
  return emit_report(table, format);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatial-median inference for high-dimensional location parameters", "geomedian"};
  app.require_subcommand(1, 1);
  Options o;

  const auto add_in = [&](CLI::App* cmd) {
    cmd->add_option("--in", o.in, "Input CSV, one observation per row")->required();
  };
  const auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", o.out, "Write the result to this file instead of stdout");
  };
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Master seed (required for random subcommands)");
  };
  const auto add_boot = [&](CLI::App* cmd) {
    cmd->add_option("--boot", o.boot, "Bootstrap replicates B")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };
  const auto add_workers = [&](CLI::App* cmd) {
    cmd->add_option("--workers", o.workers, "Worker threads (0 = all available)")
        ->capture_default_str();
  };
  const auto add_format = [&](CLI::App* cmd, std::vector<std::string> allowed) {
    cmd->add_option("--format", o.format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember(std::move(allowed)));
  };
  const auto add_null = [&](CLI::App* cmd) {
    cmd->add_option("--null", o.null_spec, "theta0: 'zeros' or a one-row CSV file")
        ->capture_default_str();
  };
  const auto open_unit = CLI::Range(0.0, 1.0);

  auto* estimate = app.add_subcommand("estimate", "Sample spatial median with diagnostics");
  add_in(estimate);
  add_out(estimate);
  add_workers(estimate);
  add_format(estimate, {"json"});

  auto* gmom_cmd = app.add_subcommand("gmom", "Geometric median-of-means");
  add_in(gmom_cmd);
  add_out(gmom_cmd);
  add_seed(gmom_cmd);
  add_workers(gmom_cmd);
  gmom_cmd->add_option("--blocks", o.blocks, "Number of disjoint blocks")->required();
  add_format(gmom_cmd, {"json"});

  auto* sci_cmd = app.add_subcommand("sci", "Simultaneous confidence intervals");
  add_in(sci_cmd);
  add_out(sci_cmd);
  add_seed(sci_cmd);
  add_boot(sci_cmd);
  add_workers(sci_cmd);
  sci_cmd->add_option("--level", o.level, "Confidence level 1 - tau")
      ->capture_default_str()
      ->check(open_unit);
  sci_cmd->add_option("--method", o.method, "Center: median or mean")
      ->check(CLI::IsMember({"median", "mean"}));
  add_format(sci_cmd, {"json", "csv", "markdown"});

  auto* test_cmd = app.add_subcommand("test", "Global test of H0: theta = theta0");
  add_in(test_cmd);
  add_out(test_cmd);
  add_seed(test_cmd);
  add_boot(test_cmd);
  add_workers(test_cmd);
  add_null(test_cmd);
  test_cmd->add_option("--alpha", o.alpha, "Significance level (default 0.05)")->check(open_unit);
  test_cmd->add_option("--method", o.method, "median (default), mean, wpl or cq")
      ->check(CLI::IsMember({"median", "mean", "wpl", "cq"}));
  add_format(test_cmd, {"json"});

  auto* fdr_cmd = app.add_subcommand("fdr", "Coordinate-wise tests with B-H FDR control");
  add_in(fdr_cmd);
  add_out(fdr_cmd);
  add_null(fdr_cmd);
  fdr_cmd->add_option("--alpha", o.alpha, "Nominal FDR level (default 0.1)")->check(open_unit);
  add_workers(fdr_cmd);
  add_format(fdr_cmd, {"json"});

  auto* are_cmd = app.add_subcommand("are", "Relative efficiency of the spatial median");
  add_in(are_cmd);
  add_out(are_cmd);
  add_seed(are_cmd);
  add_boot(are_cmd);
  add_workers(are_cmd);
  are_cmd->add_option("--model", o.are_model, "Also report the closed form: gaussian or t")
      ->check(CLI::IsMember({"gaussian", "t"}));
  are_cmd->add_option("--df", o.df, "Degrees of freedom for --model t");
  add_format(are_cmd, {"json"});

  auto* generate = app.add_subcommand("generate", "Draw a synthetic sample as CSV");
  add_out(generate);
  add_seed(generate);
  add_workers(generate);
  generate->add_option("--model", o.model, "gaussian, t or laplace")->capture_default_str();
  generate->add_option("--df", o.df, "Degrees of freedom for t");
  generate->add_option("--t-param", o.t_param, "t parameterization: covariance or scale")
      ->capture_default_str();
  generate->add_option("--rho", o.rho, "AR(1) correlation of Sigma")->capture_default_str();
  generate->add_option("--n", o.n, "Observations")->capture_default_str();
  generate->add_option("--p", o.p, "Dimension")->capture_default_str();
  generate->add_option("--pattern", o.pattern,
                       "theta: zero, sparse3, dense_quarter, log_sparse or ten_percent")
      ->capture_default_str();
  generate->add_option("--c0", o.c0, "log_sparse support constant")->capture_default_str();
  generate->add_option("--kappa", o.kappa, "log_sparse signal multiplier")->capture_default_str();
  generate->add_option("--scale", o.scale, "ten_percent signal multiplier")->capture_default_str();
  generate->add_option("--format", o.format, "Output format (csv)")
      ->check(CLI::IsMember({"csv"}));

  auto* simulate = app.add_subcommand("simulate", "Run Monte Carlo scenarios from a JSON file");
  add_out(simulate);
  add_seed(simulate);
  add_workers(simulate);
  simulate->add_option("--config", o.config, "Scenario JSON (object or array)")->required();
  simulate->add_flag("--timing", o.timing, "Record wall-clock runtime per scenario");
  add_format(simulate, {"json", "csv", "markdown"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    std::string text;
    if (*estimate) text = cmd_estimate(o);
    else if (*gmom_cmd) text = cmd_gmom(o);
    else if (*sci_cmd) text = cmd_sci(o);
    else if (*test_cmd) text = cmd_test(o);
    else if (*fdr_cmd) text = cmd_fdr(o);
    else if (*are_cmd) text = cmd_are(o);
    else if (*generate) {
      if (o.format == "json") o.format = "csv";
      text = cmd_generate(o);
    } else text = cmd_simulate(o);
    emit(o, out, text);
  } catch (const UsageError& e) {
    err << "geomedian: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "geomedian: " << e.what() << '\n';
    out << dump(error_json(e));
    return kExitComputation;
  }
  return kExitOk;
}

}  // namespace geomedian::cli
