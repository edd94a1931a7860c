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

#ifndef CORERANK_PREFERENCE_HPP_
#define CORERANK_PREFERENCE_HPP_

#include <functional>
#include <span>
#include <string>

#include "corerank/geometry.hpp"
#include "corerank/types.hpp"

namespace corerank {

// How a reference that is equidistant from both candidates is counted.
enum class TiePolicy {
  kStrict,      // ignored: only delta(ref, x_i) > delta(ref, x_j) scores
  kHalfWeight,  // equality events score 1/2
};

enum class Provenance { kLeaveTwoOut, kReference, kPopulation1d, kExternal };

TiePolicy ParseTiePolicy(const std::string& name);
std::string TiePolicyName(TiePolicy policy);
std::string ProvenanceName(Provenance provenance);
Provenance ParseProvenance(const std::string& name);

// Entry (i, j) estimates the probability that j is preferred over i, i.e.
// that a reference lies strictly closer to x_j than to x_i. Diagonal is zero
// and every entry lies in [0, 1].
class PreferenceMatrix {
 public:
  PreferenceMatrix() = default;
  // Validates shape, range and zero diagonal.
  PreferenceMatrix(Matrix values, TiePolicy policy, Provenance provenance,
                   Index reference_count = 0);

  static PreferenceMatrix External(Matrix values,
                                   TiePolicy policy = TiePolicy::kStrict);

  Index size() const { return values_.rows(); }
  const Matrix& values() const { return values_; }
  double operator()(Index i, Index j) const { return values_(i, j); }
  TiePolicy tie_policy() const { return policy_; }
  Provenance provenance() const { return provenance_; }
  // m for reference estimators, 0 otherwise.
  Index reference_count() const { return reference_count_; }

 private:
  Matrix values_;
  TiePolicy policy_ = TiePolicy::kStrict;
  Provenance provenance_ = Provenance::kExternal;
  Index reference_count_ = 0;
};

// p_ij = (n-2)^{-1} sum_{l != i,j} score(D(l,i), D(l,j)). Requires n >= 3.
PreferenceMatrix PreferenceLeaveTwoOut(const DistanceMatrix& distances,
                                       TiePolicy policy = TiePolicy::kStrict);

// p_ij = m^{-1} sum_l score(D(l,i), D(l,j)) over an m x n cross matrix of
// reference-to-sample distances. Requires m >= 1.
PreferenceMatrix PreferenceReference(const DistanceMatrix& cross,
                                     TiePolicy policy = TiePolicy::kStrict);

// Exact population preferences in one dimension under |x - y|:
// p_ij = 1 - F((x_i + x_j) / 2) if x_i < x_j, F((x_i + x_j) / 2) otherwise.
// Sample values must be distinct.
PreferenceMatrix PreferencePopulation1d(std::span<const double> sample,
                                        const std::function<double(double)>& cdf);

// Number of unordered pairs with p_ij + p_ji != 1 (beyond tol).
Index CountComplementarityViolations(const PreferenceMatrix& p,
                                     double tol = 0.0);

// Grid CSV (no header) or JSON with metadata. Loaded matrices carry
// provenance `external`.
void SavePreferenceCsv(const std::string& path, const PreferenceMatrix& p);
void SavePreferenceJson(const std::string& path, const PreferenceMatrix& p);
PreferenceMatrix LoadPreferenceMatrix(const std::string& path);

}  // namespace corerank

#endif  // CORERANK_PREFERENCE_HPP_
