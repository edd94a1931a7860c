// Copyright 2026 The corerank Authors
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

#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "corerank/cli.hpp"
#include "corerank/csv_io.hpp"
#include "corerank/scoring.hpp"
#include "test_util.hpp"

namespace corerank {
namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "corerank");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::Run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> ColumnOf(const std::string& path, const char* name) {
  const CsvTable t = ReadCsvTable(path);
  const int c = t.Column(name);
  REQUIRE(c >= 0);
  std::vector<std::string> out;
  for (const auto& row : t.rows) out.push_back(row[c]);
  return out;
}

TEST_CASE("score ranks the three-point example") {
  const auto dir = testing::TempDir("cli_score");
  const std::string data = (dir / "x.csv").string();
  WriteFile(data, "0\n1\n4\n");
  const std::string scores = (dir / "s.csv").string();
  const Result r = RunCli({"score", "--input", data, "--output", scores});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("preference center: index 1") != std::string::npos);
  CHECK(ColumnOf(scores, "rank") == std::vector<std::string>{"2", "1", "3"});

  const Result w = RunCli({"score", "--input", data, "--estimator", "winrate"});
  CHECK(w.code == cli::kExitOk);
  std::istringstream lines(w.out);
  std::string header, a, b, c;
  std::getline(lines, header);
  std::getline(lines, a);
  std::getline(lines, b);
  std::getline(lines, c);
  CHECK(header == "index,theta,strength,rank,method");
  CHECK(a.rfind("0,0.5,", 0) == 0);
  CHECK(b.rfind("1,1,", 0) == 0);
  CHECK(c.rfind("2,0,", 0) == 0);
  CHECK(w.err.find("preference center") != std::string::npos);

  const std::string js = (dir / "s.json").string();
  CHECK(RunCli({"score", "--input", data, "--output", js, "--estimator", "spectral"}).code == 0);
  const auto j = nlohmann::json::parse(ReadFile(js));
  CHECK(j["scores"].size() == 3);
  CHECK(j["scores"][1]["rank"] == 1);
}

TEST_CASE("score input validation") {
  const auto dir = testing::TempDir("cli_validate");
  const std::string data = (dir / "x.csv").string();
  WriteFile(data, "0\n1\n4\n");
  const std::string dist = (dir / "d.csv").string();
  WriteFile(dist, "0,1,4\n1,0,3\n4,3,0\n");
  CHECK(RunCli({"score", "--input", data, "--distances", dist}).code == cli::kExitValidation);
  CHECK(RunCli({"score"}).code == cli::kExitValidation);
  CHECK(RunCli({"score", "--input", (dir / "missing.csv").string()}).code ==
        cli::kExitValidation);
  CHECK(RunCli({"score", "--input", data, "--estimator", "magic"}).code ==
        cli::kExitValidation);
  WriteFile(dist, "0,-1,4\n-1,0,3\n4,3,0\n");
  const Result neg = RunCli({"score", "--distances", dist, "--metric", "precomputed"});
  CHECK(neg.code == cli::kExitValidation);
  CHECK(neg.err.find("(1,2)") != std::string::npos);  // 1-based
  CHECK(RunCli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("precomputed distances match raw input") {
  const auto dir = testing::TempDir("cli_precomputed");
  const std::string data = (dir / "x.csv").string();
  WriteFile(data, "0\n1\n4\n");
  const std::string dist = (dir / "d.csv").string();
  WriteFile(dist, "0,1,4\n1,0,3\n4,3,0\n");
  const std::string a = (dir / "a.csv").string();
  const std::string b = (dir / "b.csv").string();
  CHECK(RunCli({"score", "--input", data, "--output", a}).code == 0);
  CHECK(RunCli({"score", "--distances", dist, "--metric", "precomputed", "--output", b}).code == 0);
  CHECK(ReadFile(a) == ReadFile(b));
}

TEST_CASE("separable preferences trip the divergence guard") {
  const auto dir = testing::TempDir("cli_diverge");
  const std::string data = (dir / "x.csv").string();
  WriteFile(data, "0\n1\n4\n");
  const Result r = RunCli({"score", "--input", data, "--tol", "1e-40", "--max-iter", "100000"});
  CHECK(r.code == cli::kExitNumerical);
  CHECK(r.err.find("divergence guard") != std::string::npos);
  CHECK(RunCli({"score", "--input", data, "--tol", "1e-40", "--max-iter", "100000",
                "--ridge", "0.01"})
            .code == cli::kExitOk);
}

TEST_CASE("extend reproduces fitted scores at the sample") {
  const auto dir = testing::TempDir("cli_extend");
  const std::string data = (dir / "x.csv").string();
  WriteFile(data, "0,0\n1,0\n0,2\n3,1\n-1,-1\n2,2\n");
  const std::string scores = (dir / "s.csv").string();
  REQUIRE(RunCli({"score", "--input", data, "--output", scores, "--ridge", "0.01"}).code == 0);
  const std::string ext = (dir / "e.csv").string();
  const Result r = RunCli({"extend", "--scores", scores, "--data", data, "--queries", data,
                           "--bandwidth", "0.01", "--output", ext});
  CHECK(r.code == cli::kExitOk);
  const auto fitted = ColumnOf(scores, "theta");
  const auto extended = ColumnOf(ext, "theta");
  REQUIRE(fitted.size() == extended.size());
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    CHECK(std::stod(extended[i]) == doctest::Approx(std::stod(fitted[i])).epsilon(1e-6));
  }

  const Result median = RunCli({"extend", "--scores", scores, "--data", data, "--queries", data});
  CHECK(median.code == cli::kExitOk);
  CHECK(median.err.find("(median rule)") != std::string::npos);
  CHECK(median.out.rfind("query_index,theta,strength\n", 0) == 0);

  const std::string empty = (dir / "empty.csv").string();
  WriteFile(empty, "");
  const Result none = RunCli({"extend", "--scores", scores, "--data", data, "--queries", empty});
  CHECK(none.code == cli::kExitOk);
  CHECK(none.out == "query_index,theta,strength\n");

  const std::string wide = (dir / "wide.csv").string();
  WriteFile(wide, "0,0,0\n");
  CHECK(RunCli({"extend", "--scores", scores, "--data", data, "--queries", wide}).code ==
        cli::kExitValidation);
  const std::string short_data = (dir / "short.csv").string();
  WriteFile(short_data, "0,0\n1,1\n");
  CHECK(RunCli({"extend", "--scores", scores, "--data", short_data, "--queries", data}).code ==
        cli::kExitValidation);
}

TEST_CASE("diagnose reports fit residuals") {
  const auto dir = testing::TempDir("cli_diagnose");
  const std::string data = (dir / "x.csv").string();
  WriteFile(data, "0.3\n-1.2\n2.5\n0.9\n-0.4\n1.7\n-2.2\n0.1\n");
  const std::string scores = (dir / "s.csv").string();
  const std::string prefs = (dir / "p.csv").string();
  REQUIRE(RunCli({"score", "--input", data, "--output", scores, "--save-preferences", prefs,
                  "--ridge", "0.001", "--tol", "1e-13"})
              .code == 0);
  const std::string report = (dir / "r.json").string();
  CHECK(RunCli({"diagnose", "--scores", scores, "--preferences", prefs, "--output", report})
            .code == 0);
  auto j = nlohmann::json::parse(ReadFile(report));
  CHECK(j["n"] == 8);
  CHECK(j["complementarity_violations"] == 0);
  CHECK(j["centering_residual"].get<double>() < 1e-9);

  // theta = 0 leaves residual 1/2 - r_k.
  std::string zeros = "index,theta\n";
  for (int i = 0; i < 8; ++i) zeros += std::to_string(i) + ",0\n";
  const std::string zero_path = (dir / "z.csv").string();
  WriteFile(zero_path, zeros);
  const Result z = RunCli({"diagnose", "--scores", zero_path, "--preferences", prefs});
  CHECK(z.code == 0);
  j = nlohmann::json::parse(z.out);
  const Vector r = WinRates(LoadPreferenceMatrix(prefs));
  CHECK(j["max_stationarity_residual"].get<double>() ==
        doctest::Approx((0.5 - r.array()).abs().maxCoeff()).epsilon(1e-12));
  CHECK(j["spectral_fixed_point_residual"].get<double>() > 0.0);
}

TEST_CASE("diagnose on an unpenalized fit") {
  const auto dir = testing::TempDir("cli_diagnose_free");
  const std::string dist = (dir / "d.csv").string();
  // Ties keep every leave-two-out preference strictly inside (0, 1) under the
  // half policy, so the unpenalized fit is finite.
  WriteFile(dist, "0,1,1,2\n1,0,2,1\n1,2,0,1\n2,1,1,0\n");
  const std::string scores = (dir / "s.csv").string();
  const std::string prefs = (dir / "p.json").string();
  REQUIRE(RunCli({"score", "--distances", dist, "--metric", "precomputed", "--tie-policy",
                  "half", "--output", scores, "--save-preferences", prefs, "--tol", "1e-14"})
              .code == 0);
  const Result r = RunCli({"diagnose", "--scores", scores, "--preferences", prefs});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["max_stationarity_residual"].get<double>() <= 1e-12);
}

TEST_CASE("simulate validation and a tiny run") {
  const auto dir = testing::TempDir("cli_simulate");
  const Result bad = RunCli({"simulate", "--experiment", "table_9"});
  CHECK(bad.code == cli::kExitValidation);
  CHECK(bad.err.find("fig_1d_methods") != std::string::npos);
  CHECK(RunCli({"simulate", "--experiment", "table_rank_recovery", "--replicates", "0"}).code ==
        cli::kExitValidation);

  const Result ok = RunCli({"simulate", "--experiment", "table_logdensity", "--grid", "30x4",
                            "--replicates", "1", "--distributions", "student_t",
                            "--out", dir.string()});
  CHECK(ok.code == cli::kExitOk);
  CHECK(ok.out.find("CORE-GD spearman_vs_logf") != std::string::npos);
  const CsvTable t = ReadCsvTable((dir / "table_logdensity" / "summary.csv").string());
  CHECK(t.header == std::vector<std::string>{"method", "distribution", "n", "d", "metric", "mean",
                                             "sd", "replicates"});
}

}  // namespace
}  // namespace corerank
