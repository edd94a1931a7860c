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

#include "corerank/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corerank/csv_io.hpp"
#include "corerank/parallel.hpp"

namespace corerank {

Vector WinRates(const PreferenceMatrix& p) {
  const Index n = p.size();
  if (n < 2) throw ValidationError("win rates need n >= 2");
  // Column sums; the diagonal is zero.
  Vector r = p.values().colwise().sum().transpose();
  return r / static_cast<double>(n - 1);
}

PreferenceCenter FindPreferenceCenter(const ScoreVector& scores,
                                      const DataMatrix& data) {
  if (scores.size() != data.rows() || scores.size() == 0) {
    throw ValidationError("scores and data disagree on the number of points");
  }
  PreferenceCenter c;
  const double best = scores.theta.maxCoeff(&c.index);
  c.tied = (scores.theta.array() == best).count() > 1;
  c.observation = data.row(c.index);
  return c;
}

KernelSpec KernelSpec::Parse(const std::string& text) {
  KernelSpec k;
  if (text == "median") return k;
  const double h = ParseDouble(text, "--bandwidth");
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ValidationError("bandwidth must be positive");
  }
  k.bandwidth = h;
  return k;
}

double MedianBandwidth(const DistanceMatrix& distances) {
  const Index n = distances.rows();
  if (!distances.symmetric() || n < 2) {
    throw ValidationError("median bandwidth needs a symmetric matrix with n >= 2");
  }
  std::vector<double> upper;
  upper.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) upper.push_back(distances(i, j));
  }
  const std::size_t mid = (upper.size() - 1) / 2;
  std::nth_element(upper.begin(), upper.begin() + mid, upper.end());
  return upper[mid];
}

Vector KernelWeights(const Eigen::Ref<const Eigen::RowVectorXd>& distances,
                     double bandwidth) {
  Vector w(distances.size());
  for (Index i = 0; i < distances.size(); ++i) {
    const double u = distances[i] / bandwidth;
    w[i] = std::exp(-u * u);
  }
  const double total = w.sum();
  if (total > 0.0) w /= total;
  return w;
}

KernelExtension KernelExtend(const ScoreVector& scores, const DataMatrix& data,
                             const DataMatrix& queries, const MetricSpec& metric,
                             const KernelSpec& kernel) {
  if (scores.size() != data.rows()) {
    throw ValidationError("scores and training data disagree on the number of points");
  }
  if (queries.rows() > 0 && queries.cols() != data.cols()) {
    throw ValidationError("query dimension " + std::to_string(queries.cols()) +
                          " does not match training dimension " +
                          std::to_string(data.cols()));
  }
  KernelExtension out;
  out.bandwidth = kernel.bandwidth
                      ? *kernel.bandwidth
                      : MedianBandwidth(PairwiseDistanceMatrix(data, metric));
  if (!(out.bandwidth > 0.0)) {
    throw ValidationError("resolved bandwidth is not positive");
  }
  const Index m = queries.rows();
  out.theta = Vector::Zero(m);
  if (m == 0) {
    out.strength = Vector::Zero(0);
    return out;
  }
  const DistanceMatrix cross = CrossDistanceMatrix(queries, data, metric);
  std::vector<char> fallback(static_cast<std::size_t>(m), 0);
  ParallelFor(0, m, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (Index q = lo; q < hi; ++q) {
      const auto row = cross.values().row(q);
      const Vector w = KernelWeights(row, out.bandwidth);
      if (w.sum() > 0.0) {
        out.theta[q] = w.dot(scores.theta);
      } else {
        Index nearest = 0;
        row.minCoeff(&nearest);
        out.theta[q] = scores.theta[nearest];
        fallback[q] = 1;
      }
    }
  });
  for (Index q = 0; q < m; ++q) {
    if (fallback[q]) out.nearest_neighbor_fallback.push_back(q);
  }
  out.strength = out.theta.array().exp();
  return out;
}

Vector MonotoneLinkResiduals(const ScoreVector& scores,
                             const PreferenceMatrix& p) {
  const Index n = p.size();
  if (scores.size() != n) {
    throw ValidationError("scores and preferences disagree on the number of items");
  }
  const Vector r = WinRates(p);
  Vector h(n);
  for (Index k = 0; k < n; ++k) {
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (i != k) acc += Sigmoid(scores.theta[k] - scores.theta[i]);
    }
    h[k] = acc / static_cast<double>(n - 1);
  }
  return h - r;
}

std::vector<Index> DescendingRanks(const Vector& scores) {
  std::vector<Index> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return scores[a] > scores[b]; });
  std::vector<Index> ranks(order.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    ranks[static_cast<std::size_t>(order[pos])] = static_cast<Index>(pos + 1);
  }
  return ranks;
}

}  // namespace corerank
