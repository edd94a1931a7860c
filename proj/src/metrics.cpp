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

#include "corerank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace corerank {

Vector MidRanks(const Vector& values) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values[a] < values[b]; });
  Vector ranks(n);
  Index pos = 0;
  while (pos < n) {
    Index end = pos + 1;
    while (end < n && values[order[end]] == values[order[pos]]) ++end;
    // Positions pos..end-1 share the average of ranks pos+1..end.
    const double avg = 0.5 * static_cast<double>(pos + 1 + end);
    for (Index k = pos; k < end; ++k) ranks[order[k]] = avg;
    pos = end;
  }
  return ranks;
}

std::optional<double> Pearson(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw ValidationError("correlation inputs differ in length");
  }
  if (a.size() < 2) throw ValidationError("correlation needs n >= 2");
  const Vector ca = a.array() - a.mean();
  const Vector cb = b.array() - b.mean();
  const double saa = ca.squaredNorm();
  const double sbb = cb.squaredNorm();
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  const double r = ca.dot(cb) / std::sqrt(saa * sbb);
  return std::clamp(r, -1.0, 1.0);
}

std::optional<double> Spearman(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw ValidationError("correlation inputs differ in length");
  }
  if (a.size() < 2) throw ValidationError("correlation needs n >= 2");
  return Pearson(MidRanks(a), MidRanks(b));
}

}  // namespace corerank
