// Copyright 2026 The theta-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include <nlohmann/json.hpp>

namespace theta_forge::cli {
namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "theta-forge");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("theta_forge_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, EvalAtI) {
  const auto tau = write("tau_i.json", R"({"g": 1, "re": [[0]], "im": [[1]]})");
  const auto r = run({"eval", "T[0|0]", "--tau", tau});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["points"][0]["value"][0].get<double>(), 1.086434811, 1e-9);
  EXPECT_FALSE(doc["points"][0].contains("d"));
}

TEST_F(CliTest, EvalProductWithDerivative) {
  const auto tau = write("tau_i.json", R"({"g": 1, "re": [[0]], "im": [[1]]})");
  const auto r = run({"eval", "S[0]*S[1]", "--tau", tau, "--deriv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["points"][0]["d"].is_array());
}

TEST_F(CliTest, EvalRandomPoints) {
  const auto r = run({"eval", "T[0,0|0,0]", "--random-tau", "3", "--seed", "5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["points"].size(), 3u);
  EXPECT_EQ(run({"eval", "T[0,0|0,0]", "--random-tau", "3", "--seed", "5"}).out, r.out);
}

TEST_F(CliTest, EvalErrors) {
  const auto tau = write("tau_i.json", R"({"g": 1, "re": [[0]], "im": [[1]]})");
  const auto parse = run({"eval", "T[0|]", "--tau", tau});
  EXPECT_EQ(parse.code, kUsageError);
  EXPECT_NE(parse.err.find("column 5"), std::string::npos);
  EXPECT_NE(parse.err.find("    ^"), std::string::npos);
  const auto bad = write("bad.json", R"({"g": 1, "re": [[0]], "im": [[-1]]})");
  EXPECT_EQ(run({"eval", "T[0|0]", "--tau", bad}).code, kInvalidInput);
  const auto malformed = write("malformed.json", R"({"g": 1, "re": )");
  EXPECT_EQ(run({"eval", "T[0|0]", "--tau", malformed}).code, kUsageError);
  EXPECT_EQ(run({"eval", "T[0|0]", "--tau", (dir_ / "missing.json").string()}).code, kIoError);
  EXPECT_EQ(run({"eval", "T[0|0]"}).code, kUsageError);
  EXPECT_EQ(run({"eval", "T[0,0|0,0]", "--tau", tau}).code, kInvalidInput);
}

TEST_F(CliTest, VerifyWritesReport) {
  const auto out = (dir_ / "report.json").string();
  const auto r = run({"verify", "--g", "2", "--seed", "42", "--tol", "1e-8", "--filter", "gsm_*", "--out", out});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::ifstream in(out);
  const auto doc = nlohmann::json::parse(in);
  EXPECT_EQ(doc["schema"], "theta-forge/report/1");
  EXPECT_EQ(doc["config"]["seed"], 42);
  EXPECT_EQ(doc["config"]["filter"], "gsm_*");
  EXPECT_EQ(doc["config"]["tolerance"], 1e-8);
  EXPECT_EQ(doc["reports"].size(), 2u);
  for (const auto& rep : doc["reports"]) EXPECT_EQ(rep["identity_name"].get<std::string>().rfind("gsm_", 0), 0u);
}

TEST_F(CliTest, VerifyUsageAndIo) {
  EXPECT_EQ(run({"verify", "--g", "5"}).code, kUsageError);
  EXPECT_EQ(run({"verify", "--g", "0"}).code, kUsageError);
  EXPECT_EQ(run({"verify", "--tol", "-1"}).code, kUsageError);
  EXPECT_EQ(run({"verify", "--bogus"}).code, kUsageError);
  EXPECT_EQ(run({}).code, kUsageError);
  EXPECT_EQ(run({"--help"}).code, kOk);
  EXPECT_EQ(run({"verify", "--g", "1", "--filter", "gsm_forward", "--out", (dir_ / "no" / "x.json").string()}).code,
            kIoError);
}

TEST_F(CliTest, VerifyReportsFailures) {
  EXPECT_EQ(run({"verify", "--g", "1", "--filter", "heat_equation", "--tol", "1e-300"}).code, kIdentityFailure);
}

TEST_F(CliTest, VerifyIsDeterministic) {
  const auto a = run({"verify", "--g", "2", "--seed", "7", "--filter", "[gjp]*"});
  const auto b = run({"verify", "--g", "2", "--seed", "7", "--filter", "[gjp]*"});
  ASSERT_EQ(a.code, kOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(run({"verify", "--g", "2", "--seed", "8", "--filter", "[gjp]*"}).out, a.out);
}

TEST_F(CliTest, AuditW) {
  const auto r = run({"audit", "--form", "W:100|100,010|010", "--group", "gamma2", "--words", "4"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["reports"].size(), 4u);
  for (const auto& rep : doc["reports"]) EXPECT_LT(rep["residual"].get<double>(), 1e-7);
}

TEST_F(CliTest, AuditAStar) {
  const auto r = run({"audit", "--form", "A", "--group", "gamma24", "--words", "3", "--g", "3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["reports"].size(), 3u);
}

TEST_F(CliTest, AuditEdgeCases) {
  const auto empty = run({"audit", "--form", "W", "--g", "2", "--words", "0"});
  ASSERT_EQ(empty.code, kOk) << empty.err;
  EXPECT_TRUE(nlohmann::json::parse(empty.out)["reports"].empty());
  EXPECT_EQ(run({"audit", "--form", "W:11|11", "--words", "1"}).code, kUsageError);
  EXPECT_EQ(run({"audit", "--form", "Q", "--g", "2"}).code, kUsageError);
  EXPECT_EQ(run({"audit", "--form", "W", "--g", "2", "--group", "delta"}).code, kUsageError);
  EXPECT_EQ(run({"audit", "--form", "A", "--g", "2", "--group", "gamma2"}).code, kUsageError);
  EXPECT_EQ(run({"audit", "--form", "W"}).code, kUsageError);
  // A vanishing star product cannot be audited.
  EXPECT_EQ(run({"audit", "--form", "A:00,11;10,01", "--group", "gamma24", "--words", "2"}).code, kInvalidInput);
}

}  // namespace
}  // namespace theta_forge::cli
