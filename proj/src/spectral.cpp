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

#include "corerank/spectral.hpp"

#include <cmath>
#include <string>

namespace corerank {

TransitionMatrix BuildTransition(const PreferenceMatrix& p, double smoothing) {
  const Index n = p.size();
  if (n < 2) throw ValidationError("a comparison chain needs n >= 2");
  if (!(smoothing >= 0.0 && smoothing <= 1.0)) {
    throw ValidationError("smoothing must lie in [0, 1]");
  }
  TransitionMatrix t;
  t.values = p.values();
  if (smoothing > 0.0) {
    t.values = (1.0 - smoothing) * t.values;
    t.values.array() += 0.5 * smoothing;
  }
  const double inv = 1.0 / static_cast<double>(n - 1);
  for (Index i = 0; i < n; ++i) {
    t.values(i, i) = 0.0;
    double off = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (k == i) continue;
      t.values(i, k) *= inv;
      off += t.values(i, k);
    }
    t.values(i, i) = 1.0 - off;
  }
  return t;
}

StationaryResult StationaryDistribution(const TransitionMatrix& t,
                                        double tolerance, int max_iter) {
  const Index n = t.size();
  if (n < 1) throw ValidationError("empty transition matrix");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  if (max_iter == 0) max_iter = static_cast<int>(100 * n);
  if (max_iter < 1) throw ValidationError("max_iter must be at least 1");

  StationaryResult result;
  Vector s = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector next(n);
  for (int it = 0; it < max_iter; ++it) {
    next.noalias() = t.values.transpose() * s;
    // T^T preserves the simplex; renormalizing only removes rounding drift.
    next /= next.sum();
    result.last_change = (next - s).lpNorm<1>();
    s.swap(next);
    result.iterations = it + 1;
    if (result.last_change <= tolerance) {
      result.converged = true;
      break;
    }
  }
  result.fixed_point_residual = (t.values.transpose() * s - s).lpNorm<1>();
  result.strengths.s = std::move(s);
  return result;
}

LogScores CenteredLogScores(const StrengthVector& s, double floor) {
  LogScores out;
  Vector logs(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    double v = s.s[i];
    if (v < floor) {
      v = floor;
      out.floored.push_back(i);
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("strength " + std::to_string(i + 1) +
                            " is not positive after flooring");
    }
    logs[i] = std::log(v);
  }
  out.scores.theta = logs.array() - logs.mean();
  return out;
}

SpectralFit FitCoreSpectral(const PreferenceMatrix& p,
                            const SpectralConfig& config) {
  SpectralFit fit;
  fit.stationary = StationaryDistribution(BuildTransition(p, config.smoothing),
                                          config.tolerance, config.max_iter);
  LogScores logs = CenteredLogScores(fit.stationary.strengths, config.floor);
  fit.scores = std::move(logs.scores);
  fit.floored = std::move(logs.floored);
  return fit;
}

}  // namespace corerank
