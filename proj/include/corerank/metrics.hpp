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

#ifndef CORERANK_METRICS_HPP_
#define CORERANK_METRICS_HPP_

#include <optional>

#include "corerank/types.hpp"

namespace corerank {

// Average (mid) ranks, 1-based.
Vector MidRanks(const Vector& values);

// Pearson product-moment correlation; empty when either input is constant.
// Throws ValidationError on length mismatch or n < 2.
std::optional<double> Pearson(const Vector& a, const Vector& b);

// Pearson correlation of mid-ranks.
std::optional<double> Spearman(const Vector& a, const Vector& b);

}  // namespace corerank

#endif  // CORERANK_METRICS_HPP_
