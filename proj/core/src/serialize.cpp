#include "geomedian/serialize.hpp"

namespace geomedian {

using nlohmann::json;

json vector_json(const Eigen::Ref<const Vector>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "expected a JSON array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::ParseError, "expected a JSON array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json to_json(const SpatialMedianFit& fit) {
  json out;
  out["theta_hat"] = vector_json(fit.theta_hat);
  out["iterations"] = fit.iterations;
  out["objective"] = fit.objective;
  out["grad_norm"] = fit.grad_norm;
  out["zeta1_hat"] = fit.zeta1_hat ? json(*fit.zeta1_hat) : json(nullptr);
  out["b_diag_hat"] = vector_json(fit.b_diag_hat);
  out["scale_count"] = fit.scale_count;
  out["anchor_eps"] = fit.anchor_eps;
  return out;
}

json to_json(const SciResult& sci) {
  json intervals = json::array();
  for (Eigen::Index j = 0; j < sci.lower.size(); ++j) {
    intervals.push_back(json::array({sci.lower[j], sci.upper[j]}));
  }
  return {{"method", std::string(to_string(sci.method))},
          {"level", sci.level},
          {"q_boot", sci.q_boot},
          {"center", vector_json(sci.center)},
          {"intervals", std::move(intervals)}};
}

json to_json(const GlobalTestResult& test) {
  return {{"method", std::string(to_string(test.method))},
          {"statistic", test.statistic},
          {"critical_value", test.critical_value},
          {"p_value", test.p_value},
          {"reject", test.reject}};
}

json to_json(const FdrResult& fdr) {
  return {{"alpha", fdr.alpha},
          {"k_hat", fdr.k_hat},
          {"threshold_p", fdr.threshold_p},
          {"rejected", fdr.rejected},
          {"p_values", vector_json(fdr.p_values)},
          {"t_stats", vector_json(fdr.t_stats)}};
}

json to_json(const AreReport& are) {
  return {{"are_estimate", are.are_estimate},
          {"are_analytic", are.are_analytic ? json(*are.are_analytic) : json(nullptr)},
          {"model", are.model},
          {"mean_variance", are.mean_variance},
          {"median_variance", are.median_variance}};
}

json error_json(const Error& error) {
  json body = {{"code", std::string(to_string(error.code()))}, {"message", error.what()}};
  if (const auto* e = dynamic_cast<const DidNotConverge*>(&error)) {
    body["iterations"] = e->iterations();
    body["grad_norm"] = e->grad_norm();
    if (e->replicate()) body["replicate"] = *e->replicate();
  } else if (const auto* e = dynamic_cast<const NonFiniteEntry*>(&error)) {
    body["row"] = e->row();
    body["col"] = e->col();
  } else if (const auto* e = dynamic_cast<const ZeroScale*>(&error)) {
    body["coordinate"] = e->coordinate();
  }
  return {{"error", std::move(body)}};
}

}  // namespace geomedian
