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

#ifndef CORERANK_SPECTRAL_HPP_
#define CORERANK_SPECTRAL_HPP_

#include <vector>

#include "corerank/btl_solver.hpp"
#include "corerank/preference.hpp"
#include "corerank/types.hpp"

namespace corerank {

// Row-stochastic comparison chain: T_ij = p_ij / (n - 1) off the diagonal,
// T_ii = 1 - (n - 1)^{-1} sum_{k != i} p_ik.
struct TransitionMatrix {
  Matrix values;

  Index size() const { return values.rows(); }
};

// Positive strengths. Spectral output sums to one.
struct StrengthVector {
  Vector s;

  Index size() const { return s.size(); }
};

// smoothing = alpha replaces P by (1 - alpha) P + alpha/2 (11^T - I) first.
TransitionMatrix BuildTransition(const PreferenceMatrix& p,
                                 double smoothing = 0.0);

struct StationaryResult {
  StrengthVector strengths;
  int iterations = 0;
  double last_change = 0.0;          // ||s(t+1) - s(t)||_1 at exit
  double fixed_point_residual = 0.0; // ||T^T s - s||_1 for the returned s
  bool converged = false;
};

// Power iteration s <- T^T s from the uniform vector. max_iter = 0 means
// 100 n. Non-convergence is reported, not thrown.
StationaryResult StationaryDistribution(const TransitionMatrix& t,
                                        double tolerance = 1e-12,
                                        int max_iter = 0);

inline constexpr double kStrengthFloor = 1e-300;

struct LogScores {
  ScoreVector scores;
  std::vector<Index> floored;  // indices raised to the floor
};

// theta_i = log s_i - mean_k log s_k after raising entries below `floor` to
// it. Throws ValidationError naming the first index still <= 0.
LogScores CenteredLogScores(const StrengthVector& s,
                            double floor = kStrengthFloor);

struct SpectralConfig {
  double tolerance = 1e-12;
  int max_iter = 0;
  double smoothing = 0.0;
  double floor = kStrengthFloor;
};

struct SpectralFit {
  StationaryResult stationary;
  ScoreVector scores;
  std::vector<Index> floored;
};

// Transition, power iteration and centered log-scores in one call.
SpectralFit FitCoreSpectral(const PreferenceMatrix& p,
                            const SpectralConfig& config = {});

}  // namespace corerank

#endif  // CORERANK_SPECTRAL_HPP_
