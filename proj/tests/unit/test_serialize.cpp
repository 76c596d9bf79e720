#include "geomedian/serialize.hpp"

#include <gtest/gtest.h>

using namespace geomedian;
using nlohmann::json;

namespace {

TEST(Serialize, VectorRoundTrip) {
  const Vector v = (Vector(3) << 0.1, -2.5, 1e300).finished();
  EXPECT_EQ(vector_from_json(json::parse(vector_json(v).dump())), v);
  EXPECT_THROW(vector_from_json(json::parse(R"([1, "a"])")), Error);
  EXPECT_THROW(vector_from_json(json::parse(R"({"a": 1})")), Error);
}

TEST(Serialize, FitFields) {
  SpatialMedianFit fit;
  fit.theta_hat = Vector::Constant(2, 1.0);
  fit.b_diag_hat = Vector::Constant(2, 0.5);
  const json j = to_json(fit);
  for (const char* key : {"theta_hat", "iterations", "objective", "grad_norm", "zeta1_hat",
                          "b_diag_hat", "scale_count", "anchor_eps"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j.at("zeta1_hat").is_null());
  fit.zeta1_hat = 2.0;
  EXPECT_EQ(to_json(fit).at("zeta1_hat"), 2.0);
}

TEST(Serialize, SciIntervals) {
  SciResult sci;
  sci.center = (Vector(2) << 0, 1).finished();
  sci.lower = (Vector(2) << -1, 0).finished();
  sci.upper = (Vector(2) << 1, 2).finished();
  sci.level = 0.9;
  sci.q_boot = 3.0;
  const json j = to_json(sci);
  EXPECT_EQ(j.at("level"), 0.9);
  EXPECT_EQ(j.at("q_boot"), 3.0);
  EXPECT_EQ(j.at("intervals"), json::parse("[[-1.0, 1.0], [0.0, 2.0]]"));
  EXPECT_EQ(j.at("method"), "SpatialMedian");
}

TEST(Serialize, TestAndFdr) {
  GlobalTestResult t{2.0, 1.5, 0.01, true, TestMethod::WPL};
  EXPECT_EQ(to_json(t), json::parse(R"({"method":"WPL","statistic":2.0,"critical_value":1.5,"p_value":0.01,"reject":true})"));
  FdrResult f;
  f.alpha = 0.1;
  f.k_hat = 1;
  f.rejected = {2};
  f.threshold_p = 0.001;
  f.p_values = (Vector(3) << 0.5, 0.2, 0.001).finished();
  f.t_stats = Vector::Zero(3);
  const json j = to_json(f);
  EXPECT_EQ(j.at("rejected"), json::parse("[2]"));
  EXPECT_EQ(j.at("k_hat"), 1);
  EXPECT_EQ(j.at("p_values").size(), 3u);
}

TEST(Serialize, ErrorDetails) {
  const json a = error_json(DidNotConverge(10, 0.5, 4));
  EXPECT_EQ(a.at("error").at("code"), "DidNotConverge");
  EXPECT_EQ(a.at("error").at("iterations"), 10);
  EXPECT_EQ(a.at("error").at("replicate"), 4);
  const json b = error_json(NonFiniteEntry(2, 3));
  EXPECT_EQ(b.at("error").at("row"), 2);
  EXPECT_EQ(b.at("error").at("col"), 3);
  const json c = error_json(ZeroScale(7));
  EXPECT_EQ(c.at("error").at("coordinate"), 7);
  const json d = error_json(Error(ErrorCode::InvalidAlpha, "bad"));
  EXPECT_EQ(d.at("error").at("code"), "InvalidAlpha");
  EXPECT_EQ(d.at("error").at("message"), "bad");
}

}  // namespace
