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

#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"

#include "corerank/baselines.hpp"
#include "corerank/metrics.hpp"
#include "corerank/synth.hpp"
#include "test_util.hpp"

namespace corerank {
namespace {

using testing::Column;

Matrix Affine(const Matrix& x, const Matrix& a, const Eigen::RowVectorXd& b) {
  Matrix y = x * a.transpose();
  y.rowwise() += b;
  return y;
}

TEST_CASE("negative l2 to the mean") {
  const Vector s = NegL2Scores(DataMatrix(Column({0, 2})));
  CHECK(s[0] == -1.0);
  CHECK(s[1] == -1.0);
  const Vector c = NegL2Scores(DataMatrix(Column({-1, 0, 1})));
  CHECK(c[1] == 0.0);
  CHECK(c.maxCoeff() == 0.0);

  const DataMatrix x = Sample(DistributionSpec::StudentT(4), 30, 1);
  Matrix shifted = x.values();
  shifted.rowwise() += Eigen::RowVectorXd::Constant(4, 3.5);
  CHECK((NegL2Scores(DataMatrix(shifted)) - NegL2Scores(x)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Mahalanobis depth") {
  const Vector s = MahalanobisDepthScores(DataMatrix(Column({-1, 0, 1})));
  CHECK(s[0] == doctest::Approx(0.5));
  CHECK(s[1] == doctest::Approx(1.0));
  CHECK(s[2] == doctest::Approx(0.5));

  const DataMatrix x = Sample(DistributionSpec::StudentT(3), 40, 2);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  Matrix a(3, 3);
  for (Index i = 0; i < 9; ++i) a.data()[i] = z(rng);
  a += 3.0 * Matrix::Identity(3, 3);
  Eigen::RowVectorXd b(3);
  b << 1, -2, 7;
  const Vector before = MahalanobisDepthScores(x);
  const Vector after = MahalanobisDepthScores(DataMatrix(Affine(x.values(), a, b)));
  CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-9);

  CHECK_THROWS_AS(MahalanobisDepthScores(Sample(DistributionSpec::StudentT(5), 5, 1)),
                  ValidationError);
  Matrix collinear(6, 2);
  collinear << 0, 0, 1, 2, 2, 4, 3, 6, 4, 8, 5, 10;
  CHECK_THROWS_AS(MahalanobisDepthScores(DataMatrix(collinear)), NumericalError);
}

TEST_CASE("spatial depth") {
  const Vector s = SpatialDepthScores(DataMatrix(Column({-1, 0, 1})));
  CHECK(s[0] == doctest::Approx(0.0));
  CHECK(s[1] == doctest::Approx(1.0));
  CHECK(s[2] == doctest::Approx(0.0));

  Matrix square(5, 2);
  square << 1, 0, -1, 0, 0, 1, 0, -1, 0, 0;
  CHECK(SpatialDepthScores(DataMatrix(square))[4] == doctest::Approx(1.0));

  const Vector r = SpatialDepthScores(Sample(DistributionSpec::GaussianMixture(12), 60, 4));
  CHECK(r.minCoeff() >= 0.0);
  CHECK(r.maxCoeff() <= 1.0);
}

TEST_CASE("random-projection spatial depth") {
  const DataMatrix x = Sample(DistributionSpec::StudentT(4), 25, 5);
  RpSpatialSpec full{1, 4, 9};
  // A single full-rank orthonormal projection is a rotation.
  CHECK((RpSpatialScores(x, full) - SpatialDepthScores(x)).cwiseAbs().maxCoeff() <= 1e-12);

  RpSpatialSpec spec{20, 2, 10};
  CHECK(RpSpatialScores(x, spec) == RpSpatialScores(x, spec));
  spec.seed = 11;
  CHECK(RpSpatialScores(x, spec) != RpSpatialScores(x, RpSpatialSpec{20, 2, 10}));

  CHECK_THROWS_AS(RpSpatialScores(x, RpSpatialSpec{1, 5, 1}), ValidationError);
  CHECK_THROWS_AS(RpSpatialScores(x, RpSpatialSpec{0, 2, 1}), ValidationError);
}

TEST_CASE("baselines are permutation equivariant") {
  const DataMatrix x = Sample(DistributionSpec::StudentT(3), 30, 6);
  std::vector<Index> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(7);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix px(30, 3);
  for (Index i = 0; i < 30; ++i) px.row(i) = x.row(perm[i]);
  const DataMatrix y(px);
  const RpSpatialSpec rp{10, 2, 3};
  for (int method = 0; method < 4; ++method) {
    auto score = [&](const DataMatrix& d) -> Vector {
      switch (method) {
        case 0: return NegL2Scores(d);
        case 1: return MahalanobisDepthScores(d);
        case 2: return SpatialDepthScores(d);
        default: return RpSpatialScores(d, rp);
      }
    };
    const Vector a = score(x);
    const Vector b = score(y);
    for (Index i = 0; i < 30; ++i) CHECK(b[i] == doctest::Approx(a[perm[i]]).epsilon(1e-10));
  }
}

TEST_CASE("RP-Spatial tracks centrality on high-dimensional mixtures") {
  const auto spec = DistributionSpec::GaussianMixture(200);
  const DataMatrix x = Sample(spec, 80, 8);
  const MonteCarloOracle oracle(spec, MetricSpec::Euclidean(), 300, 600, 9);
  const auto rho = Spearman(RpSpatialScores(x, RpSpatialSpec{100, 5, 10}), oracle.EvaluateAll(x));
  REQUIRE(rho.has_value());
  CHECK(*rho > 0.2);
}

}  // namespace
}  // namespace corerank
