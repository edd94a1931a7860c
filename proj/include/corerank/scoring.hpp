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

#ifndef CORERANK_SCORING_HPP_
#define CORERANK_SCORING_HPP_

#include <optional>
#include <string>
#include <vector>

#include "corerank/btl_solver.hpp"
#include "corerank/geometry.hpp"
#include "corerank/preference.hpp"

namespace corerank {

// r_j = (n - 1)^{-1} sum_{i != j} p_ij: the average chance that j is preferred.
Vector WinRates(const PreferenceMatrix& p);

struct PreferenceCenter {
  Index index = 0;
  Eigen::RowVectorXd observation;
  bool tied = false;  // several indices share the maximum; lowest one returned
};

PreferenceCenter FindPreferenceCenter(const ScoreVector& scores,
                                      const DataMatrix& data);

// Gaussian kernel K(t) = exp(-t^2). An empty bandwidth selects the median rule.
struct KernelSpec {
  std::optional<double> bandwidth;

  static KernelSpec Parse(const std::string& text);  // "median" or a number
};

// Lower median of the n(n-1)/2 off-diagonal entries of a symmetric matrix.
double MedianBandwidth(const DistanceMatrix& distances);

struct KernelExtension {
  Vector theta;
  Vector strength;
  double bandwidth = 0.0;
  // Queries whose kernel weights all underflowed; they take the score of the
  // nearest sample point.
  std::vector<Index> nearest_neighbor_fallback;
};

// theta(x) = sum_i w_i(x) theta_i with w_i proportional to K(delta(x, x_i)/h).
KernelExtension KernelExtend(const ScoreVector& scores, const DataMatrix& data,
                             const DataMatrix& queries, const MetricSpec& metric,
                             const KernelSpec& kernel);

// Weights for a single row of query-to-sample distances (exposed for tests).
Vector KernelWeights(const Eigen::Ref<const Eigen::RowVectorXd>& distances,
                     double bandwidth);

// residual_k = (n - 1)^{-1} sum_{i != k} s(theta_k - theta_i) - r_k.
Vector MonotoneLinkResiduals(const ScoreVector& scores,
                             const PreferenceMatrix& p);

// 1-based ranks, 1 for the largest score; ties share the lowest index order.
std::vector<Index> DescendingRanks(const Vector& scores);

}  // namespace corerank

#endif  // CORERANK_SCORING_HPP_
