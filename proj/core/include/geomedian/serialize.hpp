#pragma once

#include "geomedian/error.hpp"
#include "geomedian/estimator.hpp"
#include "geomedian/inference.hpp"

#include <json.hpp>

#include <span>

namespace geomedian {

// JSON views of the result types. Index sets are 0-based.

nlohmann::json vector_json(const Eigen::Ref<const Vector>& v);
Vector vector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SpatialMedianFit& fit);
/// {method, level, q_boot, intervals: [[lo, hi], ...]}
nlohmann::json to_json(const SciResult& sci);
/// {method, statistic, critical_value, p_value, reject}
nlohmann::json to_json(const GlobalTestResult& test);
/// {alpha, k_hat, threshold_p, rejected, p_values, t_stats}
nlohmann::json to_json(const FdrResult& fdr);
nlohmann::json to_json(const AreReport& are);
/// {"error": {"code", "message"}} plus details for the structured error types.
nlohmann::json error_json(const Error& error);

}  // namespace geomedian
