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

#include "corerank/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "corerank/csv_io.hpp"
#include "corerank/geometry.hpp"
#include "corerank/metrics.hpp"
#include "corerank/parallel.hpp"
#include "corerank/preference.hpp"
#include "corerank/scoring.hpp"

namespace corerank {
namespace {

constexpr const char* kPearsonVsPopulation = "pearson_vs_population";
constexpr const char* kCenter = "center";
constexpr const char* kSpearmanVsR = "spearman_vs_r";
constexpr const char* kSpearmanVsLogF = "spearman_vs_logf";

// Stream purposes within one replicate of one setting.
enum Purpose : std::uint64_t {
  kData = 0,
  kReferenceSample = 1,
  kOracle = 2,
  kProjections = 3,
};

std::uint64_t CellKey(const std::string& label, Index n, Index d) {
  // FNV-1a over a stable textual key.
  const std::string key = label + "|" + std::to_string(n) + "|" + std::to_string(d);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::mt19937_64 StreamFor(const ExperimentConfig& cfg, int replicate,
                          std::uint64_t cell_key, Purpose purpose) {
  return MakeStream(cfg.seed + static_cast<std::uint64_t>(replicate),
                    cell_key * 8 + purpose);
}

struct Job {
  std::size_t dist_index = 0;
  Index n = 0;
  Index d = 0;
  int replicate = 0;
};

struct NamedScores {
  std::string method;
  Vector scores;
};

struct JobOutput {
  std::vector<ReplicateRecord> records;
  std::vector<ReplicateFailure> failures;
  Vector positions;  // first coordinate, 1D experiments only
  std::vector<NamedScores> scores;
};

bool Wants(const std::vector<std::string>& methods, const std::string& m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

std::vector<std::string> DefaultMethods(const ExperimentConfig& cfg, Index n,
                                        Index d) {
  if (cfg.IsOneDimensional()) {
    return {methods::kPopulationGd, methods::kReferenceGd, methods::kLeaveOutGd,
            methods::kLeaveOutSpectral};
  }
  if (n > d) {
    return {methods::kCoreGd,      methods::kCoreSpectral, methods::kMahalanobis,
            methods::kSpatial,     methods::kNegL2,        methods::kRpSpatial};
  }
  return {methods::kCoreGd, methods::kCoreSpectral, methods::kNegL2,
          methods::kRpSpatial};
}

std::vector<std::string> MethodsFor(const ExperimentConfig& cfg, Index n,
                                    Index d) {
  if (cfg.methods.empty()) return DefaultMethods(cfg, n, d);
  std::vector<std::string> out;
  for (const auto& m : cfg.methods) {
    // Mahalanobis depth is undefined once d >= n.
    if (m == methods::kMahalanobis && n <= d) continue;
    out.push_back(m);
  }
  return out;
}

Vector GdScores(const PreferenceMatrix& p, const ExperimentConfig& experiment) {
  GdConfig cfg = experiment.gd;
  cfg.ridge += experiment.ridge_scale * static_cast<double>(p.size());
  GdFit fit = FitCoreGd(p, cfg);
  if (fit.report.diverged) {
    throw NumericalError("divergence guard tripped (max |theta| > " +
                         FormatDouble(cfg.divergence_bound) + ")");
  }
  return std::move(fit.scores.theta);
}

JobOutput RunOneDimensional(const ExperimentConfig& cfg,
                            const DistributionSpec& spec, Index n,
                            int replicate) {
  JobOutput out;
  const std::string label = spec.Label();
  const std::uint64_t key = CellKey(label, n, 1);
  const std::vector<std::string> wanted = MethodsFor(cfg, n, 1);

  auto fail = [&](const std::string& method, const std::string& message) {
    out.failures.push_back({label, n, 1, replicate, method, message});
  };

  auto data_rng = StreamFor(cfg, replicate, key, kData);
  const DataMatrix x = SampleFrom(spec, n, data_rng);
  out.positions = x.values().col(0);
  const std::vector<double> xs(out.positions.data(),
                               out.positions.data() + out.positions.size());

  // The population fit is the benchmark for every other method.
  Vector population;
  try {
    const auto p = PreferencePopulation1d(
        xs, [&](double v) { return Cdf1d(spec, v); });
    population = GdScores(p, cfg);
  } catch (const std::exception& e) {
    fail(methods::kPopulationGd, e.what());
    return out;
  }
  out.scores.push_back({methods::kPopulationGd, population});

  std::optional<PreferenceMatrix> leave_out;
  auto leave_out_matrix = [&]() -> const PreferenceMatrix& {
    if (!leave_out) {
      leave_out = PreferenceLeaveTwoOut(
          PairwiseDistanceMatrix(x, MetricSpec::Euclidean()));
    }
    return *leave_out;
  };

  for (const auto& method : wanted) {
    if (method == methods::kPopulationGd) continue;
    try {
      Vector scores;
      if (method == methods::kReferenceGd) {
        auto ref_rng = StreamFor(cfg, replicate, key, kReferenceSample);
        const DataMatrix z = SampleFrom(spec, n, ref_rng);
        scores = GdScores(PreferenceReference(CrossDistanceMatrix(
                              z, x, MetricSpec::Euclidean())),
                          cfg);
      } else if (method == methods::kLeaveOutGd) {
        scores = GdScores(leave_out_matrix(), cfg);
      } else if (method == methods::kLeaveOutSpectral) {
        scores = FitCoreSpectral(leave_out_matrix(), cfg.spectral).scores.theta;
      } else if (method == methods::kWinRate) {
        scores = WinRates(leave_out_matrix());
      } else {
        throw ValidationError("method '" + method +
                              "' is not available in 1D experiments");
      }
      out.scores.push_back({method, std::move(scores)});
    } catch (const std::exception& e) {
      fail(method, e.what());
    }
  }

  for (const auto& [method, scores] : out.scores) {
    Index best = 0;
    scores.maxCoeff(&best);
    out.records.push_back(
        {method, label, n, 1, replicate, kCenter, out.positions[best]});
    if (method == methods::kPopulationGd) continue;
    const auto r = Pearson(scores, population);
    if (!r) {
      fail(method, "constant score vector; Pearson correlation undefined");
      continue;
    }
    out.records.push_back(
        {method, label, n, 1, replicate, kPearsonVsPopulation, *r});
  }
  return out;
}

JobOutput RunTable(const ExperimentConfig& cfg, const DistributionSpec& base,
                   Index n, Index d, int replicate) {
  JobOutput out;
  const DistributionSpec spec = base.WithDim(d);
  const std::string label = spec.Label();
  const std::uint64_t key = CellKey(label, n, d);
  const bool log_density = cfg.experiment == ExperimentKind::kTableLogDensity;
  const char* metric = log_density ? kSpearmanVsLogF : kSpearmanVsR;

  auto fail = [&](const std::string& method, const std::string& message) {
    out.failures.push_back({label, n, d, replicate, method, message});
  };

  auto data_rng = StreamFor(cfg, replicate, key, kData);
  const DataMatrix x = SampleFrom(spec, n, data_rng);

  Vector benchmark;
  if (log_density) {
    benchmark = LogDensities(spec, x);
  } else {
    auto oracle_rng = StreamFor(cfg, replicate, key, kOracle);
    const MonteCarloOracle oracle(spec, MetricSpec::Euclidean(), cfg.m1, cfg.m2,
                                  oracle_rng());
    benchmark = oracle.EvaluateAll(x);
  }
  out.scores.push_back({"benchmark", benchmark});

  std::optional<PreferenceMatrix> prefs;
  auto preference_matrix = [&]() -> const PreferenceMatrix& {
    if (!prefs) {
      prefs = PreferenceLeaveTwoOut(
          PairwiseDistanceMatrix(x, MetricSpec::Euclidean()));
    }
    return *prefs;
  };

  for (const auto& method : MethodsFor(cfg, n, d)) {
    try {
      Vector scores;
      if (method == methods::kCoreGd) {
        scores = GdScores(preference_matrix(), cfg);
      } else if (method == methods::kCoreSpectral) {
        // Stationary strengths; same ordering as the centered log-scores.
        scores = FitCoreSpectral(preference_matrix(), cfg.spectral)
                     .stationary.strengths.s;
      } else if (method == methods::kWinRate) {
        scores = WinRates(preference_matrix());
      } else if (method == methods::kMahalanobis) {
        scores = MahalanobisDepthScores(x);
      } else if (method == methods::kSpatial) {
        scores = SpatialDepthScores(x);
      } else if (method == methods::kNegL2) {
        scores = NegL2Scores(x);
      } else if (method == methods::kRpSpatial) {
        RpSpatialSpec rp = cfg.rp_spatial;
        rp.proj_dim = std::min(rp.proj_dim, d);
        rp.seed = StreamFor(cfg, replicate, key, kProjections)();
        scores = RpSpatialScores(x, rp);
      } else {
        throw ValidationError("method '" + method +
                              "' is not available in table experiments");
      }
      const auto rho = Spearman(scores, benchmark);
      if (!rho) throw NumericalError("Spearman correlation undefined (constant ranks)");
      out.records.push_back({method, label, n, d, replicate, metric, *rho});
      out.scores.push_back({method, std::move(scores)});
    } catch (const std::exception& e) {
      fail(method, e.what());
    }
  }
  return out;
}

std::string CellName(const std::string& label, Index n, Index d) {
  return label + "_n" + std::to_string(n) + "_d" + std::to_string(d);
}

void WriteOutputs(const ExperimentConfig& cfg, const std::vector<Job>& jobs,
                  const std::vector<JobOutput>& outputs,
                  const ResultTable& table, const std::string& root) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(root) / ExperimentName(cfg.experiment);
  fs::create_directories(dir / "figure_data");
  const bool one_d = cfg.IsOneDimensional();

  WriteFile((dir / "summary.csv").string(), table.SummaryCsv());
  WriteFile((dir / "replicates.csv").string(), RecordsCsv(table.records));

  std::string failures = "distribution,n,d,replicate,method,message\n";
  for (const auto& f : table.failures) {
    std::string msg = f.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    failures += f.distribution + "," + std::to_string(f.n) + "," +
                std::to_string(f.d) + "," + std::to_string(f.replicate) + "," +
                f.method + "," + msg + "\n";
  }
  WriteFile((dir / "failures.csv").string(), failures);

  // Per-setting score dumps, replicates in order.
  std::map<std::string, std::string> cells;
  std::vector<std::string> cell_order;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const Job& job = jobs[k];
    const std::string name =
        CellName(cfg.distributions[job.dist_index].Label(), job.n, job.d);
    if (!cells.count(name)) {
      cells[name] = one_d ? "replicate,index,x,method,score\n"
                          : "replicate,index,method,score\n";
      cell_order.push_back(name);
    }
    std::string& text = cells[name];
    for (const auto& ns : outputs[k].scores) {
      for (Index i = 0; i < ns.scores.size(); ++i) {
        text += std::to_string(job.replicate) + "," + std::to_string(i) + ",";
        if (one_d) text += FormatDouble(outputs[k].positions[i]) + ",";
        text += ns.method + "," + FormatDouble(ns.scores[i]) + "\n";
      }
    }
  }
  for (const auto& name : cell_order) {
    WriteFile((dir / (name + ".csv")).string(), cells[name]);
  }

  if (!one_d) return;

  // Figure inputs: (x, theta, method, n) rows from replicate 0.
  const fs::path fig = dir / "figure_data";
  std::map<std::string, std::string> convergence;
  std::vector<std::string> convergence_order;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const Job& job = jobs[k];
    if (job.replicate != 0) continue;
    const std::string label = cfg.distributions[job.dist_index].Label();
    const JobOutput& o = outputs[k];
    std::vector<Index> order(static_cast<std::size_t>(o.positions.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return o.positions[a] < o.positions[b];
    });
    std::string rows;
    for (const auto& ns : o.scores) {
      for (Index i : order) {
        rows += FormatDouble(o.positions[i]) + "," + FormatDouble(ns.scores[i]) +
                "," + ns.method + "," + std::to_string(job.n) + "," + label + "\n";
      }
    }
    if (cfg.experiment == ExperimentKind::kFig1dMethods) {
      WriteFile((fig / ("methods_" + label + "_n" + std::to_string(job.n) + ".csv"))
                    .string(),
                "x,theta,method,n,distribution\n" + rows);
    } else if (cfg.experiment == ExperimentKind::kFig1dConvergence) {
      if (!convergence.count(label)) {
        convergence[label] = "x,theta,method,n,distribution\n";
        convergence_order.push_back(label);
      }
      convergence[label] += rows;
    }
  }
  for (const auto& label : convergence_order) {
    WriteFile((fig / ("convergence_" + label + ".csv")).string(),
              convergence[label]);
  }

  if (cfg.experiment == ExperimentKind::kFigMeanCorrelation) {
    std::map<std::string, std::string> bars;
    std::vector<std::string> bar_order;
    for (const auto& cell : table.cells) {
      if (cell.metric != kPearsonVsPopulation) continue;
      if (!bars.count(cell.distribution)) {
        bars[cell.distribution] = "x,theta,method,n,sd,distribution\n";
        bar_order.push_back(cell.distribution);
      }
      bars[cell.distribution] +=
          std::to_string(cell.n) + "," + FormatDouble(cell.mean) + "," +
          cell.method + "," + std::to_string(cell.n) + "," +
          FormatDouble(cell.sd) + "," + cell.distribution + "\n";
    }
    for (const auto& label : bar_order) {
      WriteFile((fig / ("mean_correlation_" + label + ".csv")).string(),
                bars[label]);
    }
  }

  std::string annotations = "distribution,mu_star\n";
  for (const auto& spec : cfg.distributions) {
    annotations += spec.Label() + "," + FormatDouble(ReferenceCenter(spec)) + "\n";
  }
  WriteFile((fig / "annotations.csv").string(), annotations);
}

}  // namespace

ExperimentKind ParseExperimentKind(const std::string& name) {
  if (name == "fig_1d_methods") return ExperimentKind::kFig1dMethods;
  if (name == "fig_1d_convergence") return ExperimentKind::kFig1dConvergence;
  if (name == "fig_mean_correlation") return ExperimentKind::kFigMeanCorrelation;
  if (name == "table_rank_recovery") return ExperimentKind::kTableRankRecovery;
  if (name == "table_logdensity") return ExperimentKind::kTableLogDensity;
  std::string valid;
  for (const auto& n : ExperimentNames()) valid += (valid.empty() ? "" : ", ") + n;
  throw ValidationError("unknown experiment '" + name + "'; valid: " + valid);
}

std::string ExperimentName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kFig1dMethods: return "fig_1d_methods";
    case ExperimentKind::kFig1dConvergence: return "fig_1d_convergence";
    case ExperimentKind::kFigMeanCorrelation: return "fig_mean_correlation";
    case ExperimentKind::kTableRankRecovery: return "table_rank_recovery";
    case ExperimentKind::kTableLogDensity: return "table_logdensity";
  }
  return "unknown";
}

std::vector<std::string> ExperimentNames() {
  return {"fig_1d_methods", "fig_1d_convergence", "fig_mean_correlation",
          "table_rank_recovery", "table_logdensity"};
}

Scale ParseScale(const std::string& name) {
  if (name == "desk") return Scale::kDesk;
  if (name == "paper") return Scale::kPaper;
  throw ValidationError("unknown scale '" + name + "' (expected desk or paper)");
}

bool ExperimentConfig::IsOneDimensional() const {
  return experiment == ExperimentKind::kFig1dMethods ||
         experiment == ExperimentKind::kFig1dConvergence ||
         experiment == ExperimentKind::kFigMeanCorrelation;
}

ExperimentConfig ExperimentConfig::Defaults(ExperimentKind kind, Scale scale) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  cfg.replicates = scale == Scale::kDesk ? 5 : 20;
  cfg.m1 = scale == Scale::kDesk ? 500 : 2000;
  cfg.m2 = scale == Scale::kDesk ? 2000 : 10000;
  if (cfg.IsOneDimensional()) {
    cfg.distributions = {DistributionSpec::Normal1d(0.0, 1.0),
                         DistributionSpec::SkewLaplace1d(2.0, 1.0)};
    cfg.sizes = {50, 200, 500, 2000};
  } else {
    cfg.distributions = {DistributionSpec::StudentT(1, 5.0),
                         DistributionSpec::GaussianMixture(10, 4.0, 10),
                         DistributionSpec::SkewAld(1)};
    cfg.grid = {{150, 80}, {500, 200}, {80, 200}, {150, 500}};
  }
  return cfg;
}

void ExperimentConfig::Validate() const {
  if (replicates < 1) throw ValidationError("replicates must be >= 1");
  if (distributions.empty()) throw ValidationError("no distributions configured");
  for (const auto& s : distributions) s.Validate();
  if (IsOneDimensional()) {
    if (sizes.empty()) throw ValidationError("no sample sizes configured");
    for (const auto& s : distributions) {
      if (s.dim != 1) throw ValidationError("1D experiments need 1D distributions");
    }
    for (Index n : sizes) {
      if (n < 3) throw ValidationError("sample sizes must be >= 3");
    }
  } else {
    if (grid.empty()) throw ValidationError("no (n, d) settings configured");
    for (const auto& [n, d] : grid) {
      if (n < 3 || d < 1) throw ValidationError("grid needs n >= 3 and d >= 1");
    }
    if (m1 < 1 || m2 < 1) throw ValidationError("M1 and M2 must be >= 1");
  }
  if (!(ridge_scale >= 0.0)) throw ValidationError("ridge_scale must be nonnegative");
}

ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j) {
  try {
    const ExperimentKind kind =
        ParseExperimentKind(j.at("experiment").get<std::string>());
    ExperimentConfig cfg = ExperimentConfig::Defaults(
        kind, ParseScale(j.value("scale", std::string("desk"))));
    if (j.contains("distributions")) {
      cfg.distributions.clear();
      for (const auto& d : j["distributions"]) {
        cfg.distributions.push_back(DistributionFromJson(d));
      }
    }
    if (j.contains("sizes")) cfg.sizes = j["sizes"].get<std::vector<Index>>();
    if (j.contains("grid")) {
      cfg.grid.clear();
      for (const auto& cell : j["grid"]) {
        cfg.grid.emplace_back(cell.at(0).get<Index>(), cell.at(1).get<Index>());
      }
    }
    cfg.replicates = j.value("replicates", cfg.replicates);
    cfg.m1 = j.value("m1", cfg.m1);
    cfg.m2 = j.value("m2", cfg.m2);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("methods")) {
      cfg.methods = j["methods"].get<std::vector<std::string>>();
    }
    if (j.contains("rp_spatial")) {
      const auto& rp = j["rp_spatial"];
      cfg.rp_spatial.n_proj = rp.value("n_proj", cfg.rp_spatial.n_proj);
      cfg.rp_spatial.proj_dim = rp.value("proj_dim", cfg.rp_spatial.proj_dim);
    }
    if (j.contains("gd")) {
      const auto& gd = j["gd"];
      cfg.gd.ridge = gd.value("ridge", cfg.gd.ridge);
      cfg.gd.tolerance = gd.value("tolerance", cfg.gd.tolerance);
      cfg.gd.max_iter = gd.value("max_iter", cfg.gd.max_iter);
    }
    cfg.ridge_scale = j.value("ridge_scale", cfg.ridge_scale);
    cfg.Validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad experiment config: ") + e.what());
  }
}

nlohmann::json ToJson(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = ExperimentName(cfg.experiment);
  j["replicates"] = cfg.replicates;
  j["seed"] = cfg.seed;
  j["m1"] = cfg.m1;
  j["m2"] = cfg.m2;
  auto& dists = j["distributions"] = nlohmann::json::array();
  for (const auto& s : cfg.distributions) dists.push_back(ToJson(s));
  j["sizes"] = cfg.sizes;
  auto& grid = j["grid"] = nlohmann::json::array();
  for (const auto& [n, d] : cfg.grid) grid.push_back({n, d});
  j["methods"] = cfg.methods;
  j["ridge_scale"] = cfg.ridge_scale;
  j["rp_spatial"] = {{"n_proj", cfg.rp_spatial.n_proj},
                     {"proj_dim", cfg.rp_spatial.proj_dim}};
  return j;
}

const ResultCell* ResultTable::Find(const std::string& method,
                                    const std::string& distribution, Index n,
                                    Index d, const std::string& metric) const {
  for (const auto& c : cells) {
    if (c.method == method && c.distribution == distribution && c.n == n &&
        c.d == d && c.metric == metric) {
      return &c;
    }
  }
  return nullptr;
}

std::vector<ResultCell> Aggregate(const std::vector<ReplicateRecord>& records) {
  using Key = std::tuple<std::string, std::string, Index, Index, std::string>;
  std::map<Key, std::vector<double>> groups;
  std::vector<Key> order;
  for (const auto& r : records) {
    Key key{r.method, r.distribution, r.n, r.d, r.metric};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(r.value);
  }
  std::vector<ResultCell> cells;
  for (const auto& key : order) {
    const auto& values = groups[key];
    ResultCell c;
    std::tie(c.method, c.distribution, c.n, c.d, c.metric) = key;
    c.replicates = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    c.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - c.mean) * (v - c.mean);
      c.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    cells.push_back(std::move(c));
  }
  return cells;
}

std::string ResultTable::SummaryCsv() const {
  std::string text = "method,distribution,n,d,metric,mean,sd,replicates\n";
  for (const auto& c : cells) {
    text += c.method + "," + c.distribution + "," + std::to_string(c.n) + "," +
            std::to_string(c.d) + "," + c.metric + "," + FormatDouble(c.mean) +
            "," + FormatDouble(c.sd) + "," + std::to_string(c.replicates) + "\n";
  }
  return text;
}

std::string RecordsCsv(const std::vector<ReplicateRecord>& records) {
  std::string text = "method,distribution,n,d,replicate,metric,value\n";
  for (const auto& r : records) {
    text += r.method + "," + r.distribution + "," + std::to_string(r.n) + "," +
            std::to_string(r.d) + "," + std::to_string(r.replicate) + "," +
            r.metric + "," + FormatDouble(r.value) + "\n";
  }
  return text;
}

std::vector<ReplicateRecord> ParseRecordsCsv(const std::string& path) {
  const CsvTable t = ReadCsvTable(path);
  const int c_method = t.Column("method"), c_dist = t.Column("distribution"),
            c_n = t.Column("n"), c_d = t.Column("d"),
            c_rep = t.Column("replicate"), c_metric = t.Column("metric"),
            c_value = t.Column("value");
  if (std::min({c_method, c_dist, c_n, c_d, c_rep, c_metric, c_value}) < 0) {
    throw ValidationError(path + ": missing replicate columns");
  }
  std::vector<ReplicateRecord> out;
  for (const auto& row : t.rows) {
    ReplicateRecord r;
    r.method = row[c_method];
    r.distribution = row[c_dist];
    r.n = static_cast<Index>(ParseDouble(row[c_n], path));
    r.d = static_cast<Index>(ParseDouble(row[c_d], path));
    r.replicate = static_cast<int>(ParseDouble(row[c_rep], path));
    r.metric = row[c_metric];
    r.value = ParseDouble(row[c_value], path);
    out.push_back(std::move(r));
  }
  return out;
}

ResultTable RunExperiment(const ExperimentConfig& cfg,
                          const std::optional<std::string>& output_dir) {
  cfg.Validate();
  std::vector<Job> jobs;
  for (std::size_t di = 0; di < cfg.distributions.size(); ++di) {
    if (cfg.IsOneDimensional()) {
      for (Index n : cfg.sizes) {
        for (int r = 0; r < cfg.replicates; ++r) jobs.push_back({di, n, 1, r});
      }
    } else {
      for (const auto& [n, d] : cfg.grid) {
        for (int r = 0; r < cfg.replicates; ++r) jobs.push_back({di, n, d, r});
      }
    }
  }

  std::vector<JobOutput> outputs(jobs.size());
  ParallelFor(0, static_cast<std::ptrdiff_t>(jobs.size()),
              [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
                for (std::ptrdiff_t k = lo; k < hi; ++k) {
                  const Job& job = jobs[k];
                  const auto& spec = cfg.distributions[job.dist_index];
                  outputs[k] = cfg.IsOneDimensional()
                                   ? RunOneDimensional(cfg, spec, job.n, job.replicate)
                                   : RunTable(cfg, spec, job.n, job.d, job.replicate);
                }
              });

  // Keyed merge in job order: method-major within each setting so cells read
  // like the published tables.
  ResultTable table;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    for (const auto& f : outputs[k].failures) table.failures.push_back(f);
  }
  std::vector<ReplicateRecord> all;
  for (const auto& o : outputs) {
    all.insert(all.end(), o.records.begin(), o.records.end());
  }
  std::vector<std::string> method_order;
  for (const auto& r : all) {
    if (!Wants(method_order, r.method)) method_order.push_back(r.method);
  }
  for (const auto& m : method_order) {
    for (const auto& r : all) {
      if (r.method == m) table.records.push_back(r);
    }
  }
  table.cells = Aggregate(table.records);

  if (output_dir) WriteOutputs(cfg, jobs, outputs, table, *output_dir);
  return table;
}

double ReferenceCenter(const DistributionSpec& spec) {
  if (spec.dim != 1) {
    throw ValidationError("reference centers are defined for 1D specs only");
  }
  if (spec.kind == DistributionKind::kNormal) return spec.location;
  // r(y) = E_X p(X, y) by midpoint quadrature, maximized on a grid around 0.
  const double lo = -40.0 * spec.left_scale;
  const double hi = 40.0 * spec.right_scale;
  constexpr int kNodes = 40000;
  const double h = (hi - lo) / kNodes;
  std::vector<double> nodes(kNodes), weights(kNodes);
  for (int k = 0; k < kNodes; ++k) {
    nodes[k] = lo + (k + 0.5) * h;
    weights[k] = std::exp(LogDensity(spec, Eigen::RowVectorXd::Constant(1, nodes[k]))) * h;
  }
  auto r = [&](double y) {
    double acc = 0.0;
    for (int k = 0; k < kNodes; ++k) {
      const double f = Cdf1d(spec, 0.5 * (nodes[k] + y));
      acc += weights[k] * (nodes[k] < y ? 1.0 - f : f);
    }
    return acc;
  };
  double best_y = 0.0, best_r = -1.0;
  auto scan = [&](double from, double step, int count) {
    for (int k = 0; k <= count; ++k) {
      const double y = from + k * step;
      const double v = r(y);
      if (v > best_r) {
        best_r = v;
        best_y = y;
      }
    }
  };
  scan(-5.0, 1e-2, 1000);
  scan(best_y - 1e-2, 1e-4, 200);
  return best_y;
}

}  // namespace corerank
