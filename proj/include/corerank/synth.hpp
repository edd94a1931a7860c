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

#ifndef CORERANK_SYNTH_HPP_
#define CORERANK_SYNTH_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "corerank/geometry.hpp"
#include "corerank/types.hpp"

namespace corerank {

enum class DistributionKind {
  kNormal,         // N(location 1, scale^2 I_d); normal_1d is d = 1
  kSkewLaplace1d,  // density exp(x/b_L) on x<0, exp(-x/b_R) on x>=0, / (b_L+b_R)
  kStudentT,       // multivariate t, identity scatter, df degrees of freedom
  kGaussianMixture,  // 0.5 N(u, I) + 0.5 N(-u, I), u = shift on the first coords
  kSkewAld,        // iid asymmetric Laplace coordinates, first one rescaled
};

struct DistributionSpec {
  DistributionKind kind = DistributionKind::kNormal;
  Index dim = 1;
  double location = 0.0;
  double scale = 1.0;
  double left_scale = 2.0;    // b_L
  double right_scale = 1.0;   // b_R
  double df = 5.0;            // nu
  double shift = 4.0;
  Index shifted_coords = 10;
  double skew = 10.0;         // kappa
  double first_coord_multiplier = 100.0;

  static DistributionSpec Normal1d(double mean = 0.0, double sd = 1.0);
  static DistributionSpec Normal(Index dim, double mean = 0.0, double sd = 1.0);
  static DistributionSpec SkewLaplace1d(double left_scale = 2.0,
                                        double right_scale = 1.0);
  static DistributionSpec StudentT(Index dim, double df = 5.0);
  static DistributionSpec GaussianMixture(Index dim, double shift = 4.0,
                                          Index shifted_coords = 10);
  static DistributionSpec SkewAld(Index dim, double location = 0.0,
                                  double scale = 2.0, double skew = 10.0,
                                  double first_coord_multiplier = 100.0);

  // Throws ValidationError for non-positive scales, df <= 2 or dim < 1.
  void Validate() const;
  // Short label used in result tables ("t", "mixture", ...).
  std::string Label() const;
  // The same spec at another dimension (1D kinds reject dim != 1).
  DistributionSpec WithDim(Index d) const;
};

nlohmann::json ToJson(const DistributionSpec& spec);
DistributionSpec DistributionFromJson(const nlohmann::json& j);

// Independent, reproducible generator for (seed, stream).
std::mt19937_64 MakeStream(std::uint64_t seed, std::uint64_t stream);

DataMatrix Sample(const DistributionSpec& spec, Index n, std::uint64_t seed);
DataMatrix SampleFrom(const DistributionSpec& spec, Index n,
                      std::mt19937_64& rng);

double LogDensity(const DistributionSpec& spec,
                  const Eigen::Ref<const Eigen::RowVectorXd>& x);
Vector LogDensities(const DistributionSpec& spec, const DataMatrix& data);

// CDF of a one-dimensional spec.
double Cdf1d(const DistributionSpec& spec, double x);

struct OracleEstimate {
  double value = 0.0;
  Index m1 = 0;
  Index m2 = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of r_F(y) = P(delta(Z, X') > delta(Z, y)) with
// X'_1..M1 and Z_1..M2 drawn once from independent streams of `seed`. The
// M2 x M1 distances are sorted per Z row so each evaluation costs
// O(M2 (d + log M1)).
class MonteCarloOracle {
 public:
  MonteCarloOracle(const DistributionSpec& spec, const MetricSpec& metric,
                   Index m1, Index m2, std::uint64_t seed);

  double Evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& y) const;
  Vector EvaluateAll(const DataMatrix& points) const;

  Index m1() const { return m1_; }
  Index m2() const { return m2_; }
  std::uint64_t seed() const { return seed_; }

 private:
  MetricSpec metric_;
  Index m1_;
  Index m2_;
  std::uint64_t seed_;
  Matrix whitened_refs_;   // Z, M2 x d
  Matrix sorted_opponent_; // row j: sorted delta(Z_j, X'_k) over k
};

OracleEstimate MonteCarloR(const Eigen::Ref<const Eigen::RowVectorXd>& y,
                           const DistributionSpec& spec,
                           const MetricSpec& metric, Index m1, Index m2,
                           std::uint64_t seed);

}  // namespace corerank

#endif  // CORERANK_SYNTH_HPP_
