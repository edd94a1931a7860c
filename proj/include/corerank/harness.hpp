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

#ifndef CORERANK_HARNESS_HPP_
#define CORERANK_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "corerank/baselines.hpp"
#include "corerank/btl_solver.hpp"
#include "corerank/spectral.hpp"
#include "corerank/synth.hpp"

namespace corerank {

enum class ExperimentKind {
  kFig1dMethods,
  kFig1dConvergence,
  kFigMeanCorrelation,
  kTableRankRecovery,
  kTableLogDensity,
};

enum class Scale { kDesk, kPaper };

ExperimentKind ParseExperimentKind(const std::string& name);
std::string ExperimentName(ExperimentKind kind);
std::vector<std::string> ExperimentNames();
Scale ParseScale(const std::string& name);

// Method labels used in result tables.
namespace methods {
inline constexpr const char* kPopulationGd = "Population-GD";
inline constexpr const char* kReferenceGd = "Reference-GD";
inline constexpr const char* kLeaveOutGd = "Leave-out-GD";
inline constexpr const char* kLeaveOutSpectral = "Leave-out-Spectral";
inline constexpr const char* kCoreGd = "CORE-GD";
inline constexpr const char* kCoreSpectral = "CORE-Spectral";
inline constexpr const char* kWinRate = "Win-Rate";
inline constexpr const char* kMahalanobis = "Mahalanobis";
inline constexpr const char* kSpatial = "Spatial";
inline constexpr const char* kNegL2 = "Neg-L2";
inline constexpr const char* kRpSpatial = "RP-Spatial";
}  // namespace methods

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kTableRankRecovery;
  // 1D experiments use these specs as-is; table experiments resize them to
  // each grid dimension.
  std::vector<DistributionSpec> distributions;
  std::vector<Index> sizes;                   // 1D sample sizes
  std::vector<std::pair<Index, Index>> grid;  // (n, d) for tables
  int replicates = 5;
  Index m1 = 500;
  Index m2 = 2000;
  // Empty selects the experiment's default method set.
  std::vector<std::string> methods;
  std::uint64_t seed = 1;
  GdConfig gd;
  // Every GD fit adds ridge_scale * n to gd.ridge. Win-rate order is
  // unchanged by a ridge; it keeps nearly dominated items finite.
  double ridge_scale = 1e-6;
  SpectralConfig spectral;
  RpSpatialSpec rp_spatial;

  static ExperimentConfig Defaults(ExperimentKind kind, Scale scale = Scale::kDesk);
  void Validate() const;
  bool IsOneDimensional() const;
};

ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const ExperimentConfig& cfg);

// One metric value for one method in one replicate of one setting.
struct ReplicateRecord {
  std::string method;
  std::string distribution;
  Index n = 0;
  Index d = 0;
  int replicate = 0;
  std::string metric;
  double value = 0.0;
};

struct ResultCell {
  std::string method;
  std::string distribution;
  Index n = 0;
  Index d = 0;
  std::string metric;
  double mean = 0.0;
  double sd = 0.0;  // sample SD over replicates; 0 for a single replicate
  int replicates = 0;
};

struct ReplicateFailure {
  std::string distribution;
  Index n = 0;
  Index d = 0;
  int replicate = 0;
  std::string method;
  std::string message;
};

struct ResultTable {
  std::vector<ResultCell> cells;
  std::vector<ReplicateRecord> records;
  std::vector<ReplicateFailure> failures;

  // First cell matching, or nullptr.
  const ResultCell* Find(const std::string& method,
                         const std::string& distribution, Index n, Index d,
                         const std::string& metric) const;
  std::string SummaryCsv() const;
};

// Groups records by (method, distribution, n, d, metric) in first-seen order.
std::vector<ResultCell> Aggregate(const std::vector<ReplicateRecord>& records);

std::string RecordsCsv(const std::vector<ReplicateRecord>& records);
std::vector<ReplicateRecord> ParseRecordsCsv(const std::string& path);

// Runs every replicate of every setting. With an output directory, writes
// <dir>/<experiment>/{summary.csv, replicates.csv, failures.csv, <cell>.csv,
// figure_data/*.csv}.
ResultTable RunExperiment(const ExperimentConfig& cfg,
                          const std::optional<std::string>& output_dir = {});

// Population maximizer annotations for the 1D figures.
double ReferenceCenter(const DistributionSpec& spec);

}  // namespace corerank

#endif  // CORERANK_HARNESS_HPP_
