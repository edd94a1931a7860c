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

#include "corerank/cli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "corerank/btl_solver.hpp"
#include "corerank/csv_io.hpp"
#include "corerank/geometry.hpp"
#include "corerank/harness.hpp"
#include "corerank/preference.hpp"
#include "corerank/scoring.hpp"
#include "corerank/spectral.hpp"
#include "corerank/synth.hpp"

namespace corerank::cli {
namespace {

using nlohmann::json;

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Index ParseCount(const std::string& text, const std::string& what) {
  const double v = ParseDouble(text, what);
  if (v < 0 || v != std::floor(v)) {
    throw ValidationError(what + ": expected a non-negative integer, got '" +
                          text + "'");
  }
  return static_cast<Index>(v);
}

// Score CSV with an optional index column; returns theta in index order.
Vector ReadScores(const std::string& path) {
  const CsvTable t = ReadCsvTable(path);
  const int c_theta = t.Column("theta");
  if (c_theta < 0) throw ValidationError(path + ": missing column 'theta'");
  const int c_index = t.Column("index");
  const Index n = static_cast<Index>(t.rows.size());
  Vector theta(n);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Index r = 0; r < n; ++r) {
    const auto& row = t.rows[static_cast<std::size_t>(r)];
    Index i = r;
    if (c_index >= 0) {
      i = ParseCount(row[c_index], path);
      if (i >= n || seen[static_cast<std::size_t>(i)]) {
        throw ValidationError(path + ": bad or repeated index " + row[c_index]);
      }
    }
    seen[static_cast<std::size_t>(i)] = true;
    theta[i] = ParseDouble(row[c_theta], path);
  }
  return theta;
}

struct ScoreRows {
  Vector theta;
  Vector strength;
  std::string method;
};

void WriteScores(const ScoreRows& s, const std::optional<std::string>& path,
                 std::ostream& fallback) {
  const std::vector<Index> ranks = DescendingRanks(s.theta);
  std::string text;
  if (path && EndsWith(*path, ".json")) {
    json rows = json::array();
    for (Index i = 0; i < s.theta.size(); ++i) {
      rows.push_back({{"index", i},
                      {"theta", s.theta[i]},
                      {"strength", s.strength[i]},
                      {"rank", ranks[static_cast<std::size_t>(i)]}});
    }
    text = json{{"method", s.method}, {"scores", rows}}.dump(2) + "\n";
  } else {
    text = "index,theta,strength,rank,method\n";
    for (Index i = 0; i < s.theta.size(); ++i) {
      text += std::to_string(i) + "," + FormatDouble(s.theta[i]) + "," +
              FormatDouble(s.strength[i]) + "," +
              std::to_string(ranks[static_cast<std::size_t>(i)]) + "," +
              s.method + "\n";
    }
  }
  if (path) {
    WriteFile(*path, text);
  } else {
    fallback << text;
  }
}

struct ScoreOptions {
  std::string input;
  std::string distances;
  std::string metric;
  std::string scatter;
  std::string estimator = "gd";
  std::string tie_policy = "strict";
  std::string output;
  std::string save_preferences;
  bool header = false;
  double ridge = 0.0;
  double tol = 0.0;
  int max_iter = 0;
  double smoothing = 0.0;
  std::uint64_t seed = 1;
};

int CmdScore(const ScoreOptions& o, std::ostream& out, std::ostream& err) {
  if (o.input.empty() == o.distances.empty()) {
    throw ValidationError("exactly one of --input and --distances is required");
  }
  // With an output file the log goes to stdout; otherwise stdout carries the
  // score CSV and the log moves to stderr.
  std::ostream& log = o.output.empty() ? err : out;

  std::optional<DataMatrix> data;
  DistanceMatrix distances;
  if (!o.distances.empty()) {
    if (!o.metric.empty() && o.metric != "precomputed") {
      throw ValidationError("--distances implies --metric precomputed");
    }
    const LoadedDistances loaded = LoadDistanceMatrix(o.distances, true);
    if (loaded.max_asymmetry > 0) {
      log << "symmetrized distances (max asymmetry "
          << FormatDouble(loaded.max_asymmetry) << ")\n";
    }
    distances = loaded.matrix;
  } else {
    const MetricKind kind =
        ParseMetricKind(o.metric.empty() ? "euclidean" : o.metric);
    data = LoadDataMatrix(o.input, o.header);
    MetricSpec metric = MetricSpec::Euclidean();
    if (kind == MetricKind::kPrecomputed) {
      throw ValidationError("--metric precomputed needs --distances");
    } else if (kind == MetricKind::kMahalanobis) {
      metric = MetricSpec::Mahalanobis(
          o.scatter.empty() ? SampleCovariance(*data)
                            : ReadNumericCsv(o.scatter, false));
    }
    distances = PairwiseDistanceMatrix(*data, metric);
  }

  const PreferenceMatrix p =
      PreferenceLeaveTwoOut(distances, ParseTiePolicy(o.tie_policy));
  if (!o.save_preferences.empty()) {
    if (EndsWith(o.save_preferences, ".json")) {
      SavePreferenceJson(o.save_preferences, p);
    } else {
      SavePreferenceCsv(o.save_preferences, p);
    }
  }

  ScoreRows rows;
  int code = kExitOk;
  if (o.estimator == "gd") {
    GdConfig cfg;
    cfg.ridge = o.ridge;
    cfg.tolerance = o.tol;
    cfg.max_iter = o.max_iter;
    const GdFit fit = FitCoreGd(p, cfg);
    const FitReport& r = fit.report;
    log << "fit: iterations=" << r.iterations
        << " grad_norm=" << FormatDouble(r.final_grad_norm)
        << " loss=" << FormatDouble(r.final_loss)
        << " converged=" << (r.converged ? "true" : "false")
        << " diverged=" << (r.diverged ? "true" : "false") << "\n";
    if (r.diverged) {
      err << "error: divergence guard tripped: max |theta| exceeded "
          << FormatDouble(cfg.Resolved(p.size()).divergence_bound)
          << " (preferences may be separable; try --ridge)\n";
      code = kExitNumerical;
    } else if (!r.converged) {
      err << "warning: gradient descent hit the iteration cap\n";
    }
    rows = {fit.scores.theta, fit.scores.Strengths(), "gd"};
  } else if (o.estimator == "spectral") {
    SpectralConfig cfg;
    if (o.tol > 0) cfg.tolerance = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.smoothing = o.smoothing;
    const SpectralFit fit = FitCoreSpectral(p, cfg);
    log << "fit: iterations=" << fit.stationary.iterations
        << " last_change=" << FormatDouble(fit.stationary.last_change)
        << " fixed_point_residual="
        << FormatDouble(fit.stationary.fixed_point_residual)
        << " converged=" << (fit.stationary.converged ? "true" : "false")
        << "\n";
    if (!fit.floored.empty()) {
      err << "warning: " << fit.floored.size()
          << " stationary entries raised to the floor "
          << FormatDouble(cfg.floor) << " before taking logs (first index "
          << fit.floored.front() << ")\n";
    }
    if (!fit.stationary.converged) {
      err << "warning: power iteration hit the iteration cap\n";
    }
    rows = {fit.scores.theta, fit.stationary.strengths.s, "spectral"};
  } else if (o.estimator == "winrate") {
    const Vector r = WinRates(p);
    rows = {r, r, "winrate"};
  } else {
    throw ValidationError("unknown estimator '" + o.estimator +
                          "' (expected gd, spectral or winrate)");
  }

  Index center = 0;
  rows.theta.maxCoeff(&center);
  log << "preference center: index " << center;
  if (data) {
    const PreferenceCenter pc = FindPreferenceCenter(ScoreVector{rows.theta}, *data);
    log << " at (";
    for (Index k = 0; k < pc.observation.size(); ++k) {
      log << (k ? ", " : "") << FormatDouble(pc.observation[k]);
    }
    log << ")" << (pc.tied ? " [tied]" : "");
  }
  log << "\n";

  WriteScores(rows, o.output.empty() ? std::nullopt
                                     : std::optional<std::string>(o.output),
              out);
  return code;
}

struct ExtendOptions {
  std::string scores;
  std::string data;
  std::string queries;
  std::string bandwidth = "median";
  std::string metric = "euclidean";
  std::string output;
  bool header = false;
};

int CmdExtend(const ExtendOptions& o, std::ostream& out, std::ostream& err) {
  std::ostream& log = o.output.empty() ? err : out;
  const Vector theta = ReadScores(o.scores);
  const DataMatrix data = LoadDataMatrix(o.data, o.header);
  const DataMatrix queries = LoadDataMatrix(o.queries, o.header);
  if (theta.size() != data.rows()) {
    throw ValidationError("score file has " + std::to_string(theta.size()) +
                          " entries but training data has " +
                          std::to_string(data.rows()) + " rows");
  }
  if (queries.rows() > 0 && queries.cols() != data.cols()) {
    throw ValidationError("query dimension " + std::to_string(queries.cols()) +
                          " does not match training dimension " +
                          std::to_string(data.cols()));
  }
  const MetricKind kind = ParseMetricKind(o.metric);
  if (kind == MetricKind::kPrecomputed) {
    throw ValidationError("extend needs coordinates; --metric precomputed is not supported");
  }
  const MetricSpec metric = kind == MetricKind::kMahalanobis
                                ? MetricSpec::Mahalanobis(SampleCovariance(data))
                                : MetricSpec::Euclidean();
  const KernelSpec kernel = KernelSpec::Parse(o.bandwidth);
  const KernelExtension ext =
      KernelExtend(ScoreVector{theta}, data, queries, metric, kernel);
  log << "bandwidth h = " << FormatDouble(ext.bandwidth)
      << (kernel.bandwidth ? "" : " (median rule)") << "\n";
  if (!ext.nearest_neighbor_fallback.empty()) {
    err << "warning: " << ext.nearest_neighbor_fallback.size()
        << " queries fell back to the nearest sample point\n";
  }
  std::string text = "query_index,theta,strength\n";
  for (Index q = 0; q < ext.theta.size(); ++q) {
    text += std::to_string(q) + "," + FormatDouble(ext.theta[q]) + "," +
            FormatDouble(ext.strength[q]) + "\n";
  }
  if (o.output.empty()) {
    out << text;
  } else {
    WriteFile(o.output, text);
  }
  return kExitOk;
}

struct SimulateOptions {
  std::string experiment;
  std::string scale = "desk";
  std::string config;
  std::string out_dir = "results";
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::optional<Index> m1;
  std::optional<Index> m2;
  std::string sizes;
  std::string grid;
  std::string distributions;
  std::string methods;
};

int CmdSimulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    json j;
    try {
      j = json::parse(ReadFile(o.config));
    } catch (const json::exception& e) {
      throw ValidationError(o.config + ": " + e.what());
    }
    if (!o.experiment.empty()) j["experiment"] = o.experiment;
    if (!j.contains("scale")) j["scale"] = o.scale;
    cfg = ExperimentConfigFromJson(j);
  } else {
    if (o.experiment.empty()) {
      throw ValidationError("--experiment or --config is required");
    }
    cfg = ExperimentConfig::Defaults(ParseExperimentKind(o.experiment),
                                     ParseScale(o.scale));
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.replicates) cfg.replicates = *o.replicates;
  if (o.m1) cfg.m1 = *o.m1;
  if (o.m2) cfg.m2 = *o.m2;
  if (!o.sizes.empty()) {
    cfg.sizes.clear();
    for (const auto& s : SplitList(o.sizes)) cfg.sizes.push_back(ParseCount(s, "--sizes"));
  }
  if (!o.grid.empty()) {
    cfg.grid.clear();
    for (const auto& cell : SplitList(o.grid)) {
      const auto x = cell.find('x');
      if (x == std::string::npos) {
        throw ValidationError("--grid entries look like 150x80, got '" + cell + "'");
      }
      cfg.grid.emplace_back(ParseCount(cell.substr(0, x), "--grid"),
                            ParseCount(cell.substr(x + 1), "--grid"));
    }
  }
  if (!o.distributions.empty()) {
    cfg.distributions.clear();
    for (const auto& kind : SplitList(o.distributions)) {
      json j{{"kind", kind}};
      if (!cfg.IsOneDimensional()) j["dim"] = 1;  // resized per grid cell
      cfg.distributions.push_back(DistributionFromJson(j));
    }
  }
  if (!o.methods.empty()) cfg.methods = SplitList(o.methods);
  cfg.Validate();

  const ResultTable table = RunExperiment(cfg, o.out_dir);
  out << "experiment " << ExperimentName(cfg.experiment) << ": "
      << table.records.size() << " records, " << table.failures.size()
      << " failures -> " << o.out_dir << "/" << ExperimentName(cfg.experiment)
      << "\n";
  for (const auto& c : table.cells) {
    if (c.metric == "center") continue;
    out << "  " << c.distribution << " n=" << c.n << " d=" << c.d << " "
        << c.method << " " << c.metric << " mean=" << FormatDouble(c.mean)
        << " sd=" << FormatDouble(c.sd) << " (R=" << c.replicates << ")\n";
  }
  for (const auto& f : table.failures) {
    err << "warning: replicate " << f.replicate << " of " << f.distribution
        << " n=" << f.n << " d=" << f.d << " " << f.method << " failed: "
        << f.message << "\n";
  }
  return kExitOk;
}

struct DiagnoseOptions {
  std::string scores;
  std::string preferences;
  std::string output;
};

int CmdDiagnose(const DiagnoseOptions& o, std::ostream& out) {
  const Vector theta = ReadScores(o.scores);
  const PreferenceMatrix p = LoadPreferenceMatrix(o.preferences);
  if (theta.size() != p.size()) {
    throw ValidationError("score file has " + std::to_string(theta.size()) +
                          " entries but the preference matrix is " +
                          std::to_string(p.size()) + " x " +
                          std::to_string(p.size()));
  }
  const Vector residuals = MonotoneLinkResiduals(ScoreVector{theta}, p);
  // exp(theta) normalized to a probability vector, checked as a fixed point
  // of the comparison chain.
  Vector s = (theta.array() - theta.maxCoeff()).exp();
  s /= s.sum();
  const TransitionMatrix t = BuildTransition(p);
  const double fixed_point = (t.values.transpose() * s - s).lpNorm<1>();
  const json report{
      {"n", p.size()},
      {"max_stationarity_residual",
       residuals.size() ? residuals.cwiseAbs().maxCoeff() : 0.0},
      {"centering_residual", std::abs(theta.sum())},
      {"complementarity_violations", CountComplementarityViolations(p, 1e-12)},
      {"spectral_fixed_point_residual", fixed_point},
  };
  const std::string text = report.dump(2) + "\n";
  if (o.output.empty()) {
    out << text;
  } else {
    WriteFile(o.output, text);
  }
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Preference-based centrality scores", "corerank"};
  app.require_subcommand(1);

  ScoreOptions score;
  auto* sc = app.add_subcommand("score", "Fit scores to a sample or a distance matrix");
  auto* in_opt = sc->add_option("--input", score.input, "Data CSV, one observation per row");
  auto* d_opt = sc->add_option("--distances", score.distances, "Precomputed distance CSV");
  in_opt->excludes(d_opt);
  sc->add_option("--metric", score.metric, "euclidean|mahalanobis|precomputed");
  sc->add_option("--scatter", score.scatter, "Scatter CSV for mahalanobis (default: sample covariance)");
  sc->add_option("--estimator", score.estimator, "gd|spectral|winrate");
  sc->add_option("--tie-policy", score.tie_policy, "strict|half");
  sc->add_option("--output", score.output, "Score CSV (.json for JSON)");
  sc->add_option("--save-preferences", score.save_preferences, "Also write the preference matrix");
  sc->add_option("--ridge", score.ridge, "Ridge penalty lambda");
  sc->add_option("--tol", score.tol, "Stopping tolerance");
  sc->add_option("--max-iter", score.max_iter, "Iteration cap");
  sc->add_option("--smoothing", score.smoothing, "Spectral smoothing alpha");
  sc->add_option("--seed", score.seed, "Accepted for symmetry; scoring is deterministic");
  sc->add_flag("--header", score.header, "Input CSV has a header row");

  ExtendOptions extend;
  auto* ex = app.add_subcommand("extend", "Kernel-extend fitted scores to new points");
  ex->add_option("--scores", extend.scores, "Fitted score CSV")->required();
  ex->add_option("--data", extend.data, "Training data CSV")->required();
  ex->add_option("--queries", extend.queries, "Query CSV")->required();
  ex->add_option("--bandwidth", extend.bandwidth, "median or a positive number");
  ex->add_option("--metric", extend.metric, "euclidean|mahalanobis");
  ex->add_option("--output", extend.output, "Output CSV");
  ex->add_flag("--header", extend.header, "Data and query CSVs have a header row");

  SimulateOptions sim;
  auto* si = app.add_subcommand("simulate", "Run a simulation experiment");
  si->add_option("--experiment", sim.experiment, "One of: " + [] {
    std::string names;
    for (const auto& n : ExperimentNames()) names += (names.empty() ? "" : ", ") + n;
    return names;
  }());
  si->add_option("--scale", sim.scale, "desk|paper");
  si->add_option("--config", sim.config, "JSON experiment config");
  si->add_option("--out", sim.out_dir, "Output root directory");
  si->add_option("--seed", sim.seed, "Base seed");
  si->add_option("--replicates", sim.replicates, "Replicates per setting");
  si->add_option("--m1", sim.m1, "Monte Carlo opponents");
  si->add_option("--m2", sim.m2, "Monte Carlo references");
  si->add_option("--sizes", sim.sizes, "1D sample sizes, e.g. 50,200");
  si->add_option("--grid", sim.grid, "(n, d) settings, e.g. 150x80,80x200");
  si->add_option("--distributions", sim.distributions, "Distribution kinds, comma separated");
  si->add_option("--methods", sim.methods, "Method labels, comma separated");

  DiagnoseOptions diag;
  auto* dg = app.add_subcommand("diagnose", "Check a fit against its preference matrix");
  dg->add_option("--scores", diag.scores, "Score CSV")->required();
  dg->add_option("--preferences", diag.preferences, "Preference CSV or JSON")->required();
  dg->add_option("--output", diag.output, "Output JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*sc) return CmdScore(score, out, err);
    if (*ex) return CmdExtend(extend, out, err);
    if (*si) return CmdSimulate(sim, out, err);
    if (*dg) return CmdDiagnose(diag, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace corerank::cli
