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

#include <cmath>
#include <numbers>

#include "doctest.h"

#include "corerank/synth.hpp"

namespace corerank {
namespace {

double ColumnMean(const DataMatrix& x, Index k) { return x.values().col(k).mean(); }

double FractionBelow(const DataMatrix& x, Index k, double v) {
  return (x.values().col(k).array() < v).cast<double>().mean();
}

// Midpoint rule for the integral of exp(log density) over [lo, hi].
double IntegrateDensity1d(const DistributionSpec& spec, double lo, double hi, int nodes) {
  const double h = (hi - lo) / nodes;
  double acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    acc += std::exp(LogDensity(spec, Eigen::RowVectorXd::Constant(1, lo + (k + 0.5) * h)));
  }
  return acc * h;
}

TEST_CASE("sample moments") {
  const DataMatrix z = Sample(DistributionSpec::Normal1d(), 100000, 11);
  CHECK(std::abs(ColumnMean(z, 0)) <= 4.0 / std::sqrt(1e5));

  const DataMatrix sl = Sample(DistributionSpec::SkewLaplace1d(2, 1), 100000, 12);
  CHECK(FractionBelow(sl, 0, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(0.015));
  CHECK(std::abs(FractionBelow(sl, 0, 0.0) - 2.0 / 3.0) <= 0.01);

  const DataMatrix t = Sample(DistributionSpec::StudentT(5, 5.0), 100000, 13);
  for (Index k = 0; k < 5; ++k) {
    const Eigen::VectorXd c = t.values().col(k);
    const double var = (c.array() - c.mean()).square().sum() / (c.size() - 1);
    CHECK(std::abs(var / (5.0 / 3.0) - 1.0) <= 0.05);
  }

  const DataMatrix ald = Sample(DistributionSpec::SkewAld(3), 100000, 14);
  CHECK(std::abs(FractionBelow(ald, 1, 0.0) - 100.0 / 101.0) <= 0.005);
  // The first coordinate is the same law scaled by 100.
  CHECK(ColumnMean(ald, 0) / ColumnMean(ald, 1) == doctest::Approx(100.0).epsilon(0.1));

  const DataMatrix mix = Sample(DistributionSpec::GaussianMixture(12), 20000, 15);
  CHECK(std::abs(ColumnMean(mix, 0)) <= 0.15);
  CHECK(FractionBelow(mix, 0, 0.0) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(std::abs(ColumnMean(mix, 11)) <= 0.05);
}

TEST_CASE("seed determinism") {
  const auto spec = DistributionSpec::StudentT(4);
  CHECK(Sample(spec, 50, 3).values() == Sample(spec, 50, 3).values());
  CHECK(Sample(spec, 50, 3).values() != Sample(spec, 50, 4).values());
  auto a = MakeStream(3, 1);
  auto b = MakeStream(3, 2);
  CHECK(a() != b());
}

TEST_CASE("log densities") {
  const Eigen::RowVectorXd zero1 = Eigen::RowVectorXd::Zero(1);
  CHECK(LogDensity(DistributionSpec::Normal1d(), zero1) ==
        doctest::Approx(-0.5 * std::log(2 * std::numbers::pi)).epsilon(1e-14));
  CHECK(LogDensity(DistributionSpec::Normal1d(), zero1) == doctest::Approx(-0.9189385332046727));
  CHECK(LogDensity(DistributionSpec::SkewLaplace1d(2, 1), zero1) ==
        doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));

  const auto mix = DistributionSpec::GaussianMixture(20);
  const double component = -10.0 * std::log(2 * std::numbers::pi) - 0.5 * 160.0;
  CHECK(LogDensity(mix, Eigen::RowVectorXd::Zero(20)) == doctest::Approx(component).epsilon(1e-12));

  CHECK(IntegrateDensity1d(DistributionSpec::Normal1d(0.5, 2.0), -30, 30, 60000) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(IntegrateDensity1d(DistributionSpec::SkewLaplace1d(2, 1), -80, 40, 240000) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(IntegrateDensity1d(DistributionSpec::SkewAld(1), -40000, 400, 404000) ==
        doctest::Approx(1.0).epsilon(1e-4));
  CHECK(IntegrateDensity1d(DistributionSpec::StudentT(1, 5.0), -2000, 2000, 400000) ==
        doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(LogDensity(mix, Eigen::RowVectorXd::Zero(3)), ValidationError);
}

TEST_CASE("1D CDFs match their densities") {
  for (const auto& spec : {DistributionSpec::Normal1d(0.3, 1.5), DistributionSpec::SkewLaplace1d(2, 1)}) {
    for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
      const double h = 1e-5;
      const double deriv = (Cdf1d(spec, x + h) - Cdf1d(spec, x - h)) / (2 * h);
      CHECK(deriv == doctest::Approx(std::exp(LogDensity(spec, Eigen::RowVectorXd::Constant(1, x))))
                         .epsilon(1e-6));
    }
  }
  CHECK(Cdf1d(DistributionSpec::SkewLaplace1d(2, 1), 0.0) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(Cdf1d(DistributionSpec::StudentT(2), 0.0), ValidationError);
}

TEST_CASE("Monte Carlo oracle") {
  const auto spec = DistributionSpec::Normal1d();
  const auto metric = MetricSpec::Euclidean();
  SUBCASE("spot value at the center") {
    const auto est = MonteCarloR(Eigen::RowVectorXd::Zero(1), spec, metric, 2000, 2000, 1);
    CHECK(std::abs(est.value - 0.6476) <= 0.01);
    CHECK(est.m1 == 2000);
  }
  SUBCASE("vanishes far from the support") {
    const MonteCarloOracle oracle(spec, metric, 500, 500, 2);
    CHECK(oracle.Evaluate(Eigen::RowVectorXd::Constant(1, 1e3)) == 0.0);
  }
  SUBCASE("symmetric points agree and values stay in [0, 1]") {
    const MonteCarloOracle oracle(spec, metric, 2000, 2000, 3);
    const double band = 3.0 / std::sqrt(4.0 * 2000);
    for (double v : {0.3, 1.0, 2.0}) {
      const double a = oracle.Evaluate(Eigen::RowVectorXd::Constant(1, v));
      const double b = oracle.Evaluate(Eigen::RowVectorXd::Constant(1, -v));
      CHECK(std::abs(a - b) <= 2 * band);
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
    }
  }
  SUBCASE("doubling M2 moves the estimate by Monte Carlo noise only") {
    const double a = MonteCarloR(Eigen::RowVectorXd::Constant(1, 0.5), spec, metric, 1000, 1000, 4).value;
    const double b = MonteCarloR(Eigen::RowVectorXd::Constant(1, 0.5), spec, metric, 1000, 2000, 4).value;
    CHECK(std::abs(a - b) <= 3.0 / std::sqrt(4.0 * 1000));
  }
  SUBCASE("batch evaluation matches single evaluation") {
    const MonteCarloOracle oracle(DistributionSpec::StudentT(3), metric, 200, 300, 5);
    const DataMatrix pts = Sample(DistributionSpec::StudentT(3), 20, 6);
    const Vector all = oracle.EvaluateAll(pts);
    for (Index i = 0; i < 20; ++i) CHECK(all[i] == oracle.Evaluate(pts.row(i)));
  }
}

TEST_CASE("spec serialization and validation") {
  for (const auto& spec :
       {DistributionSpec::Normal1d(1, 2), DistributionSpec::Normal(4), DistributionSpec::SkewLaplace1d(3, 0.5),
        DistributionSpec::StudentT(7, 4.0), DistributionSpec::GaussianMixture(12, 3.0, 5),
        DistributionSpec::SkewAld(6, 0.0, 1.0, 4.0, 10.0)}) {
    const DistributionSpec back = DistributionFromJson(ToJson(spec));
    CHECK(back.Label() == spec.Label());
    CHECK(Sample(back, 5, 1).values() == Sample(spec, 5, 1).values());
  }
  CHECK(DistributionSpec::StudentT(1).WithDim(80).dim == 80);
  CHECK_THROWS_AS(DistributionSpec::SkewLaplace1d().WithDim(3), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::StudentT(3, 2.0).Validate(), ValidationError);
  CHECK_THROWS_AS(DistributionFromJson(nlohmann::json{{"kind", "cauchy"}}), ValidationError);
  CHECK_THROWS_AS(DistributionFromJson(nlohmann::json{{"kind", "student_t"}}), ValidationError);
}

}  // namespace
}  // namespace corerank
