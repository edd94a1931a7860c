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

#include "corerank/preference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "json.hpp"

#include "corerank/csv_io.hpp"
#include "corerank/parallel.hpp"

namespace corerank {
namespace {

// Tile sizes for the count accumulation; a tile of int32 counts stays in L2
// while every reference row streams past it once.
constexpr Index kRowTile = 64;
constexpr Index kColTile = 512;

using CountMatrix =
    Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Weighted indicator in units of 1/2 for half weight, 1 for strict.
template <TiePolicy kPolicy>
inline std::int32_t Score(double to_i, double to_j) {
  if constexpr (kPolicy == TiePolicy::kStrict) {
    return to_i > to_j;
  } else {
    return 2 * static_cast<std::int32_t>(to_i > to_j) +
           static_cast<std::int32_t>(to_i == to_j);
  }
}

// counts(i, j) = sum over reference rows l of Score(refs(l, i), refs(l, j)).
// Reference-major within each tile; each worker owns a band of output rows,
// so integer totals are independent of the worker count.
template <TiePolicy kPolicy>
CountMatrix AccumulateCounts(const Matrix& refs) {
  const Index m = refs.rows();
  const Index n = refs.cols();
  CountMatrix counts = CountMatrix::Zero(n, n);
  const Index row_tiles = (n + kRowTile - 1) / kRowTile;
  ParallelFor(0, row_tiles, [&](std::ptrdiff_t tlo, std::ptrdiff_t thi) {
    for (Index rt = tlo; rt < thi; ++rt) {
      const Index i0 = rt * kRowTile;
      const Index i1 = std::min(n, i0 + kRowTile);
      for (Index j0 = 0; j0 < n; j0 += kColTile) {
        const Index j1 = std::min(n, j0 + kColTile);
        for (Index l = 0; l < m; ++l) {
          const double* row = refs.row(l).data();
          for (Index i = i0; i < i1; ++i) {
            const double to_i = row[i];
            std::int32_t* out = counts.row(i).data();
            for (Index j = j0; j < j1; ++j) {
              out[j] += Score<kPolicy>(to_i, row[j]);
            }
          }
        }
      }
    }
  });
  return counts;
}

template <TiePolicy kPolicy>
Matrix LeaveTwoOut(const Matrix& d) {
  const Index n = d.rows();
  CountMatrix counts = AccumulateCounts<kPolicy>(d);
  // Remove the l = i and l = j terms that the full pass included.
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) {
        counts(i, j) = 0;
        continue;
      }
      counts(i, j) -= Score<kPolicy>(d(i, i), d(i, j));
      counts(i, j) -= Score<kPolicy>(d(j, i), d(j, j));
    }
  }
  const double denom = (kPolicy == TiePolicy::kStrict ? 1.0 : 2.0) *
                       static_cast<double>(n - 2);
  return counts.cast<double>() / denom;
}

template <TiePolicy kPolicy>
Matrix Reference(const Matrix& cross) {
  CountMatrix counts = AccumulateCounts<kPolicy>(cross);
  counts.diagonal().setZero();
  const double denom = (kPolicy == TiePolicy::kStrict ? 1.0 : 2.0) *
                       static_cast<double>(cross.rows());
  return counts.cast<double>() / denom;
}

}  // namespace

TiePolicy ParseTiePolicy(const std::string& name) {
  if (name == "strict") return TiePolicy::kStrict;
  if (name == "half" || name == "half_weight") return TiePolicy::kHalfWeight;
  throw ValidationError("unknown tie policy '" + name +
                        "' (expected strict or half)");
}

std::string TiePolicyName(TiePolicy policy) {
  return policy == TiePolicy::kStrict ? "strict" : "half_weight";
}

std::string ProvenanceName(Provenance provenance) {
  switch (provenance) {
    case Provenance::kLeaveTwoOut: return "leave_two_out";
    case Provenance::kReference: return "reference";
    case Provenance::kPopulation1d: return "population_1d";
    case Provenance::kExternal: return "external";
  }
  return "external";
}

Provenance ParseProvenance(const std::string& name) {
  if (name == "leave_two_out") return Provenance::kLeaveTwoOut;
  if (name == "reference") return Provenance::kReference;
  if (name == "population_1d") return Provenance::kPopulation1d;
  if (name == "external") return Provenance::kExternal;
  throw ValidationError("unknown provenance '" + name + "'");
}

PreferenceMatrix::PreferenceMatrix(Matrix values, TiePolicy policy,
                                   Provenance provenance, Index reference_count)
    : values_(std::move(values)),
      policy_(policy),
      provenance_(provenance),
      reference_count_(reference_count) {
  if (values_.rows() != values_.cols()) {
    throw ValidationError("preference matrix must be square");
  }
  for (Index i = 0; i < values_.rows(); ++i) {
    for (Index j = 0; j < values_.cols(); ++j) {
      const double v = values_(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("preference entry (" + std::to_string(i + 1) +
                              "," + std::to_string(j + 1) +
                              ") is outside [0, 1]");
      }
    }
    if (values_(i, i) != 0.0) {
      throw ValidationError("preference diagonal entry " +
                            std::to_string(i + 1) + " is nonzero");
    }
  }
}

PreferenceMatrix PreferenceMatrix::External(Matrix values, TiePolicy policy) {
  return PreferenceMatrix(std::move(values), policy, Provenance::kExternal);
}

PreferenceMatrix PreferenceLeaveTwoOut(const DistanceMatrix& distances,
                                       TiePolicy policy) {
  if (!distances.symmetric()) {
    throw ValidationError("leave-two-out preferences need a symmetric distance matrix");
  }
  const Index n = distances.rows();
  if (n < 3) {
    throw ValidationError("leave-two-out preferences need n >= 3, got " +
                          std::to_string(n));
  }
  Matrix values = policy == TiePolicy::kStrict
                      ? LeaveTwoOut<TiePolicy::kStrict>(distances.values())
                      : LeaveTwoOut<TiePolicy::kHalfWeight>(distances.values());
  return PreferenceMatrix(std::move(values), policy, Provenance::kLeaveTwoOut,
                          n - 2);
}

PreferenceMatrix PreferenceReference(const DistanceMatrix& cross,
                                     TiePolicy policy) {
  if (cross.rows() < 1) {
    throw ValidationError("reference preferences need at least one reference");
  }
  Matrix values = policy == TiePolicy::kStrict
                      ? Reference<TiePolicy::kStrict>(cross.values())
                      : Reference<TiePolicy::kHalfWeight>(cross.values());
  return PreferenceMatrix(std::move(values), policy, Provenance::kReference,
                          cross.rows());
}

PreferenceMatrix PreferencePopulation1d(std::span<const double> sample,
                                        const std::function<double(double)>& cdf) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("population preferences need distinct sample values");
  }
  const Index n = static_cast<Index>(sample.size());
  Matrix values = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double xi = sample[i];
      const double xj = sample[j];
      const double mid = cdf(0.5 * (xi + xj));
      if (!(mid >= 0.0 && mid <= 1.0)) {
        throw ValidationError("cdf returned a value outside [0, 1]");
      }
      // A reference below the midpoint is closer to the smaller point.
      values(i, j) = xi < xj ? 1.0 - mid : mid;
      values(j, i) = xi < xj ? mid : 1.0 - mid;
    }
  }
  return PreferenceMatrix(std::move(values), TiePolicy::kStrict,
                          Provenance::kPopulation1d);
}

Index CountComplementarityViolations(const PreferenceMatrix& p, double tol) {
  Index violations = 0;
  for (Index i = 0; i < p.size(); ++i) {
    for (Index j = i + 1; j < p.size(); ++j) {
      if (std::abs(p(i, j) + p(j, i) - 1.0) > tol) ++violations;
    }
  }
  return violations;
}

void SavePreferenceCsv(const std::string& path, const PreferenceMatrix& p) {
  WriteNumericCsv(path, p.values());
}

void SavePreferenceJson(const std::string& path, const PreferenceMatrix& p) {
  nlohmann::json j;
  j["n"] = p.size();
  j["tie_policy"] = TiePolicyName(p.tie_policy());
  j["provenance"] = ProvenanceName(p.provenance());
  j["reference_count"] = p.reference_count();
  auto& rows = j["values"] = nlohmann::json::array();
  for (Index i = 0; i < p.size(); ++i) {
    std::vector<double> row(p.values().row(i).begin(), p.values().row(i).end());
    rows.push_back(row);
  }
  WriteFile(path, j.dump(1) + "\n");
}

PreferenceMatrix LoadPreferenceMatrix(const std::string& path) {
  const bool is_json =
      path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (!is_json) {
    return PreferenceMatrix::External(ReadNumericCsv(path, false));
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  if (!j.contains("values") || !j["values"].is_array()) {
    throw ValidationError(path + ": missing 'values' array");
  }
  const auto& rows = j["values"];
  const Index n = static_cast<Index>(rows.size());
  Matrix values(n, n);
  for (Index i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<Index>(rows[i].size()) != n) {
      throw ValidationError(path + ": row " + std::to_string(i + 1) +
                            " has the wrong length");
    }
    for (Index k = 0; k < n; ++k) values(i, k) = rows[i][k].get<double>();
  }
  const TiePolicy policy =
      ParseTiePolicy(j.value("tie_policy", std::string("strict")));
  return PreferenceMatrix::External(std::move(values), policy);
}

}  // namespace corerank
