#include "geomedian/csv.hpp"
#include "geomedian/error.hpp"
#include "geomedian/harness.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace geomedian {

using nlohmann::json;

namespace {

template <class Enum>
Enum parse_enum(const json& value, const std::map<std::string, Enum>& names, const char* what) {
  if (!value.is_string()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a string");
  const auto it = names.find(value.get<std::string>());
  if (it == names.end()) {
    throw Error(ErrorCode::ParseError,
                std::string("unknown ") + what + " '" + value.get<std::string>() + "'");
  }
  return it->second;
}

template <class Enum>
std::string enum_name(Enum e, const std::map<std::string, Enum>& names) {
  for (const auto& [name, value] : names) {
    if (value == e) return name;
  }
  return "unknown";
}

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const char* where) {
  if (!object.is_object()) throw Error(ErrorCode::ParseError, std::string(where) + " must be an object");
  for (const auto& [key, _] : object.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::ParseError, std::string("unknown key '") + key + "' in " + where);
    }
  }
}

const std::map<std::string, Experiment> kExperiments{{"coverage", Experiment::Coverage},
                                                     {"size_power", Experiment::SizePower},
                                                     {"fdr", Experiment::Fdr},
                                                     {"are", Experiment::Are}};
const std::map<std::string, DistributionKind> kModels{{"gaussian", DistributionKind::GaussianI},
                                                      {"t", DistributionKind::StudentT},
                                                      {"laplace", DistributionKind::LaplaceIC}};
const std::map<std::string, TParameterization> kTParams{
    {"covariance", TParameterization::Covariance}, {"scale", TParameterization::Scale}};
const std::map<std::string, ThetaPattern::Kind> kPatterns{
    {"sparse3", ThetaPattern::Kind::Sparse3},
    {"dense_quarter", ThetaPattern::Kind::DenseQuarter},
    {"log_sparse", ThetaPattern::Kind::LogSparse},
    {"ten_percent", ThetaPattern::Kind::TenPercent},
    {"zero", ThetaPattern::Kind::Zero}};
const std::map<std::string, TestMethod> kMethods{{"median", TestMethod::MedianMax},
                                                 {"mean", TestMethod::MeanMax},
                                                 {"wpl", TestMethod::WPL},
                                                 {"cq", TestMethod::CQ}};

template <class T>
T get_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string(key) + " must be a number");
  if constexpr (std::is_integral_v<T>) {
    const bool negative = v.is_number_integer() && v.get<long long>() < 0;
    if (!v.is_number_integer() || (std::is_unsigned_v<T> && negative)) {
      throw Error(ErrorCode::ParseError, std::string(key) + " must be a non-negative integer");
    }
  }
  return v.get<T>();
}

std::string format_optional(const std::optional<double>& v) {
  return v ? csv::format_real(*v) : std::string();
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::vector<std::string> row_cells(const MetricsRow& r) {
  return {r.scenario,
          std::to_string(r.n),
          std::to_string(r.p),
          format_optional(r.kappa),
          csv::format_real(r.level),
          r.method,
          format_optional(r.coverage),
          format_optional(r.median_length),
          format_optional(r.size),
          format_optional(r.power),
          format_optional(r.fdr),
          format_optional(r.fdr_power),
          format_optional(r.are_ratio),
          csv::format_real(r.mc_stderr),
          format_optional(r.runtime_seconds)};
}

std::string markdown_flat(const MetricsTable& table) {
  const auto& cols = MetricsTable::columns();
  std::ostringstream os;
  os << '|';
  for (const auto& c : cols) os << ' ' << c << " |";
  os << "\n|";
  for (std::size_t i = 0; i < cols.size(); ++i) os << " --- |";
  os << '\n';
  for (const auto& row : table.rows) {
    os << '|';
    for (const auto& cell : row_cells(row)) os << ' ' << cell << " |";
    os << '\n';
  }
  return os.str();
}

/// Coverage rows paired by (scenario, n, p, level): "median (mean)".
std::string markdown_coverage(const MetricsTable& table) {
  struct Pair {
    const MetricsRow* median = nullptr;
    const MetricsRow* mean = nullptr;
  };
  std::vector<std::tuple<std::string, Eigen::Index, Eigen::Index, double>> order;
  std::map<std::tuple<std::string, Eigen::Index, Eigen::Index, double>, Pair> groups;
  for (const auto& row : table.rows) {
    const auto key = std::make_tuple(row.scenario, row.n, row.p, row.level);
    if (!groups.contains(key)) order.push_back(key);
    auto& pair = groups[key];
    (row.method == "Mean" ? pair.mean : pair.median) = &row;
  }
  const auto cell = [](const MetricsRow* median, const MetricsRow* mean, auto pick, int digits,
                       double scale) {
    const auto show = [&](const MetricsRow* r) {
      if (!r || !(r->*pick)) return std::string("-");
      return fixed(*(r->*pick) * scale, digits);
    };
    return show(median) + " (" + show(mean) + ")";
  };
  std::ostringstream os;
  os << "| scenario | n | p | level | coverage % median (mean) | median length median (mean) |\n";
  os << "| --- | --- | --- | --- | --- | --- |\n";
  for (const auto& key : order) {
    const auto& pair = groups[key];
    os << "| " << std::get<0>(key) << " | " << std::get<1>(key) << " | " << std::get<2>(key)
       << " | " << csv::format_real(std::get<3>(key)) << " | "
       << cell(pair.median, pair.mean, &MetricsRow::coverage, 1, 100.0) << " | "
       << cell(pair.median, pair.mean, &MetricsRow::median_length, 2, 1.0) << " |\n";
  }
  return os.str();
}

}  // namespace

ScenarioSpec scenario_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"name", "experiment", "distribution", "n", "p", "theta_pattern",
                       "replications", "B", "levels", "seed", "kappa_grid", "c0", "methods",
                       "n_grid", "p_grid", "are_bootstrap", "workers", "timing"},
                      "scenario");
  ScenarioSpec spec;
  try {
    if (j.contains("name")) spec.name = j.at("name").get<std::string>();
    if (!j.contains("experiment")) throw Error(ErrorCode::ParseError, "scenario needs 'experiment'");
    spec.experiment = parse_enum(j.at("experiment"), kExperiments, "experiment");
    if (j.contains("distribution")) {
      const auto& d = j.at("distribution");
      reject_unknown_keys(d, {"model", "df", "t_param", "rho"}, "distribution");
      if (d.contains("model")) spec.distribution.kind = parse_enum(d.at("model"), kModels, "model");
      if (d.contains("df")) spec.distribution.df = get_number<double>(d, "df");
      if (d.contains("t_param")) {
        spec.distribution.t_param = parse_enum(d.at("t_param"), kTParams, "t_param");
      }
      if (d.contains("rho")) spec.distribution.rho = get_number<double>(d, "rho");
    }
    if (j.contains("n")) spec.n = get_number<Eigen::Index>(j, "n");
    if (j.contains("p")) spec.p = get_number<Eigen::Index>(j, "p");
    if (j.contains("theta_pattern")) {
      const auto& t = j.at("theta_pattern");
      reject_unknown_keys(t, {"kind", "c0", "kappa", "scale"}, "theta_pattern");
      if (!t.contains("kind")) throw Error(ErrorCode::ParseError, "theta_pattern needs 'kind'");
      spec.theta_pattern.kind = parse_enum(t.at("kind"), kPatterns, "theta pattern");
      if (t.contains("c0")) spec.theta_pattern.c0 = get_number<double>(t, "c0");
      if (t.contains("kappa")) spec.theta_pattern.kappa = get_number<double>(t, "kappa");
      if (t.contains("scale")) spec.theta_pattern.scale = get_number<double>(t, "scale");
    }
    if (j.contains("replications")) spec.replications = get_number<std::size_t>(j, "replications");
    if (j.contains("B")) spec.B = get_number<std::size_t>(j, "B");
    if (j.contains("levels")) spec.levels = j.at("levels").get<std::vector<double>>();
    if (j.contains("seed")) spec.seed = get_number<std::uint64_t>(j, "seed");
    if (j.contains("kappa_grid")) spec.kappa_grid = j.at("kappa_grid").get<std::vector<double>>();
    if (j.contains("c0")) spec.c0 = get_number<double>(j, "c0");
    if (j.contains("methods")) {
      spec.methods.clear();
      for (const auto& m : j.at("methods")) spec.methods.push_back(parse_enum(m, kMethods, "method"));
    }
    if (j.contains("n_grid")) spec.n_grid = j.at("n_grid").get<std::vector<Eigen::Index>>();
    if (j.contains("p_grid")) spec.p_grid = j.at("p_grid").get<std::vector<Eigen::Index>>();
    if (j.contains("are_bootstrap")) spec.are_bootstrap = j.at("are_bootstrap").get<bool>();
    if (j.contains("workers")) spec.workers = get_number<unsigned>(j, "workers");
    if (j.contains("timing")) spec.timing = j.at("timing").get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed scenario: ") + e.what());
  }
  spec.validate();
  return spec;
}

json to_json(const ScenarioSpec& spec) {
  json methods = json::array();
  for (const auto m : spec.methods) methods.push_back(enum_name(m, kMethods));
  json distribution = {{"model", enum_name(spec.distribution.kind, kModels)},
                       {"rho", spec.distribution.rho}};
  if (spec.distribution.kind == DistributionKind::StudentT) {
    distribution["df"] = spec.distribution.df;
    distribution["t_param"] = enum_name(spec.distribution.t_param, kTParams);
  }
  return {{"name", spec.name},
          {"experiment", enum_name(spec.experiment, kExperiments)},
          {"distribution", distribution},
          {"n", spec.n},
          {"p", spec.p},
          {"theta_pattern",
           {{"kind", enum_name(spec.theta_pattern.kind, kPatterns)},
            {"c0", spec.theta_pattern.c0},
            {"kappa", spec.theta_pattern.kappa},
            {"scale", spec.theta_pattern.scale}}},
          {"replications", spec.replications},
          {"B", spec.B},
          {"levels", spec.levels},
          {"seed", spec.seed},
          {"kappa_grid", spec.kappa_grid},
          {"c0", spec.c0},
          {"methods", methods},
          {"n_grid", spec.n_grid},
          {"p_grid", spec.p_grid},
          {"are_bootstrap", spec.are_bootstrap}};
}

json to_json(const MetricsTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"scenario", r.scenario},
                    {"n", r.n},
                    {"p", r.p},
                    {"kappa", optional_json(r.kappa)},
                    {"level", r.level},
                    {"method", r.method},
                    {"coverage", optional_json(r.coverage)},
                    {"median_length", optional_json(r.median_length)},
                    {"size", optional_json(r.size)},
                    {"power", optional_json(r.power)},
                    {"fdr", optional_json(r.fdr)},
                    {"fdr_power", optional_json(r.fdr_power)},
                    {"are_ratio", optional_json(r.are_ratio)},
                    {"mc_stderr", r.mc_stderr},
                    {"runtime_seconds", optional_json(r.runtime_seconds)}});
  }
  return {{"columns", MetricsTable::columns()}, {"rows", std::move(rows)}};
}

MetricsTable metrics_from_json(const json& j) {
  MetricsTable table;
  try {
    for (const auto& r : j.at("rows")) {
      MetricsRow row;
      row.scenario = r.at("scenario").get<std::string>();
      row.n = r.at("n").get<Eigen::Index>();
      row.p = r.at("p").get<Eigen::Index>();
      row.kappa = optional_from(r, "kappa");
      row.level = r.at("level").get<double>();
      row.method = r.at("method").get<std::string>();
      row.coverage = optional_from(r, "coverage");
      row.median_length = optional_from(r, "median_length");
      row.size = optional_from(r, "size");
      row.power = optional_from(r, "power");
      row.fdr = optional_from(r, "fdr");
      row.fdr_power = optional_from(r, "fdr_power");
      row.are_ratio = optional_from(r, "are_ratio");
      row.mc_stderr = r.at("mc_stderr").get<double>();
      row.runtime_seconds = optional_from(r, "runtime_seconds");
      table.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed metrics table: ") + e.what());
  }
  return table;
}

std::string emit_report(const MetricsTable& table, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json:
      return to_json(table).dump(2) + '\n';
    case ReportFormat::Csv: {
      std::ostringstream os;
      const auto& cols = MetricsTable::columns();
      for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
      os << '\n';
      for (const auto& row : table.rows) {
        const auto cells = row_cells(row);
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
        os << '\n';
      }
      return os.str();
    }
    case ReportFormat::Markdown: {
      const bool coverage_only =
          !table.rows.empty() &&
          std::all_of(table.rows.begin(), table.rows.end(),
                      [](const MetricsRow& r) { return r.coverage.has_value(); });
      return coverage_only ? markdown_coverage(table) : markdown_flat(table);
    }
  }
  return {};
}

}  // namespace geomedian
