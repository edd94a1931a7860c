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

#ifndef CORERANK_BASELINES_HPP_
#define CORERANK_BASELINES_HPP_

#include <cstdint>

#include "corerank/geometry.hpp"

namespace corerank {

// Randomized-projection spatial depth settings.
struct RpSpatialSpec {
  Index n_proj = 100;
  Index proj_dim = 5;
  std::uint64_t seed = 0;
};

// -||x_i - mean||_2.
Vector NegL2Scores(const DataMatrix& data);

// 1 / (1 + (x_i - mean)^T S^{-1} (x_i - mean)), S the covariance with divisor
// n - 1. Throws NumericalError (with the condition number) when S is singular.
Vector MahalanobisDepthScores(const DataMatrix& data);

// 1 - || (n-1)^{-1} sum_{j != i} (x_j - x_i) / ||x_j - x_i|| ||, coincident
// points skipped.
Vector SpatialDepthScores(const DataMatrix& data);

// Spatial depth averaged over n_proj random orthonormal proj_dim-dimensional
// projections (Gaussian draws orthonormalized by QR). Draw k uses its own
// stream derived from the seed.
Vector RpSpatialScores(const DataMatrix& data, const RpSpatialSpec& spec);

}  // namespace corerank

#endif  // CORERANK_BASELINES_HPP_
