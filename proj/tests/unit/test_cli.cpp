#include "geomedian_cli/cli.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace cli = geomedian::cli;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("geomedian_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
    write("one.csv", "x\n1\n2\n3\n4\n5\n");
    std::ostringstream data;
    data << "a,b,c\n";
    for (int i = 0; i < 30; ++i) data << (i % 7) * 0.3 - 0.8 << ',' << (i % 5) * 0.4 - 0.9 << ',' << (i % 3) - 1.1 << '\n';
    write("data.csv", data.str());
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  std::filesystem::path dir_;
};

TEST_F(Cli, EstimateUnivariate) {
  const auto r = invoke({"estimate", "--in", path("one.csv")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("theta_hat"), json::parse("[3.0]"));
}

TEST_F(Cli, SciTwiceIsByteIdentical) {
  const std::vector<std::string> args{"sci", "--in", path("data.csv"), "--level", "0.9",
                                      "--boot", "400", "--seed", "7"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto with_workers = args;
  with_workers.insert(with_workers.end(), {"--workers", "4"});
  EXPECT_EQ(a.out, invoke(with_workers).out);
  const json j = json::parse(a.out);
  EXPECT_EQ(j.at("intervals").size(), 3u);
}

TEST_F(Cli, SeededCommandsNeedSeed) {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"sci", "--in", path("data.csv")},
        {"gmom", "--in", path("data.csv"), "--blocks", "3"},
        {"test", "--in", path("data.csv"), "--null", "zeros"},
        {"are", "--in", path("data.csv")},
        {"generate", "--n", "5", "--p", "3"}}) {
    const auto r = invoke(args);
    EXPECT_EQ(r.code, cli::kExitUsage) << args[0];
    EXPECT_FALSE(r.err.empty());
  }
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"estimate", "--in", path("one.csv"), "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"sci", "--in", path("data.csv"), "--seed", "1", "--level", "1.5"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"test", "--in", path("data.csv"), "--null", "zeros", "--method", "nope"}).code,
            cli::kExitUsage);
}

TEST_F(Cli, HelpDocumentsFlags) {
  const auto r = invoke({"sci", "--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  for (const char* flag : {"--in", "--out", "--level", "--boot", "--seed", "--method", "--workers", "--format"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
}

TEST_F(Cli, ComputationErrorsAreStructured) {
  const auto missing = invoke({"estimate", "--in", path("absent.csv")});
  EXPECT_EQ(missing.code, cli::kExitComputation);
  EXPECT_EQ(json::parse(missing.out).at("error").at("code"), "IoError");

  write("nan.csv", "1,2\n3,nan\n");
  const auto bad = invoke({"estimate", "--in", path("nan.csv")});
  EXPECT_EQ(bad.code, cli::kExitComputation);
  const json j = json::parse(bad.out);
  EXPECT_EQ(j.at("error").at("code"), "NonFiniteEntry");
  EXPECT_EQ(j.at("error").at("row"), 1);
  EXPECT_EQ(j.at("error").at("col"), 1);
}

TEST_F(Cli, TestMethodsAndNullFile) {
  write("null.csv", "0.1,0.2,0.3\n");
  for (const char* method : {"median", "mean"}) {
    const auto r = invoke({"test", "--in", path("data.csv"), "--null", path("null.csv"), "--method", method,
                           "--seed", "3", "--boot", "50"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(json::parse(r.out).contains("p_value"));
  }
  for (const char* method : {"wpl", "cq"}) {
    const auto r = invoke({"test", "--in", path("data.csv"), "--null", "zeros", "--method", method});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out).at("method"), method == std::string("wpl") ? "WPL" : "CQ");
  }
  write("wrong.csv", "0.1,0.2\n");
  EXPECT_EQ(invoke({"test", "--in", path("data.csv"), "--null", path("wrong.csv"), "--method", "wpl"}).code,
            cli::kExitComputation);
}

TEST_F(Cli, GenerateThenFdr) {
  const auto gen = invoke({"generate", "--n", "50", "--p", "200", "--pattern", "ten_percent", "--scale", "2",
                           "--seed", "11", "--out", path("gen.csv")});
  ASSERT_EQ(gen.code, 0) << gen.err;
  const auto fdr = invoke({"fdr", "--in", path("gen.csv"), "--null", "zeros", "--alpha", "0.1"});
  ASSERT_EQ(fdr.code, 0) << fdr.err;
  const json j = json::parse(fdr.out);
  EXPECT_GT(j.at("k_hat").get<int>(), 0);
  EXPECT_EQ(j.at("alpha"), 0.1);
}

TEST_F(Cli, GenerateIsDeterministic) {
  const std::vector<std::string> args{"generate", "--model", "t", "--df", "3", "--rho", "0.5",
                                      "--n", "10", "--p", "4", "--seed", "5"};
  const auto a = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, invoke(args).out);
  auto more = args;
  more.insert(more.end(), {"--workers", "4"});
  EXPECT_EQ(a.out, invoke(more).out);
}

TEST_F(Cli, AreAndGmom) {
  const auto are = invoke({"are", "--in", path("data.csv"), "--seed", "2", "--boot", "50", "--model", "t", "--df", "5"});
  ASSERT_EQ(are.code, 0) << are.err;
  const json j = json::parse(are.out);
  EXPECT_GT(j.at("are_estimate").get<double>(), 0.0);
  EXPECT_FALSE(j.at("are_analytic").is_null());
  const auto gm = invoke({"gmom", "--in", path("data.csv"), "--blocks", "5", "--seed", "2"});
  ASSERT_EQ(gm.code, 0) << gm.err;
}

TEST_F(Cli, SimulateFormats) {
  write("scenario.json", R"({"name": "tiny", "experiment": "coverage", "n": 12, "p": 4,
                             "replications": 3, "B": 20, "levels": [0.9], "seed": 1})");
  const auto j = invoke({"simulate", "--config", path("scenario.json")});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_EQ(json::parse(j.out).at("rows").size(), 2u);
  const auto md = invoke({"simulate", "--config", path("scenario.json"), "--format", "markdown"});
  EXPECT_NE(md.out.find("| tiny |"), std::string::npos);
  const auto csv = invoke({"simulate", "--config", path("scenario.json"), "--format", "csv", "--workers", "4"});
  EXPECT_EQ(csv.out.rfind("scenario,n,p,", 0), 0u);

  write("bad.json", R"({"experiment": "coverage", "replicates": 3})");
  const auto bad = invoke({"simulate", "--config", path("bad.json")});
  EXPECT_EQ(bad.code, cli::kExitComputation);
  EXPECT_EQ(json::parse(bad.out).at("error").at("code"), "ParseError");
}

TEST_F(Cli, OutFile) {
  const auto r = invoke({"estimate", "--in", path("one.csv"), "--out", path("fit.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path("fit.json"));
  EXPECT_EQ(json::parse(in).at("theta_hat"), json::parse("[3.0]"));
}

}  // namespace
