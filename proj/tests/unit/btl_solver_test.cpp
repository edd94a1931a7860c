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
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

#include "corerank/btl_solver.hpp"
#include "corerank/metrics.hpp"
#include "corerank/scoring.hpp"
#include "test_util.hpp"

namespace corerank {
namespace {

using testing::RandomComplementary;

PreferenceMatrix TwoItem(double p12) {
  Matrix p(2, 2);
  p << 0, p12, 1 - p12, 0;
  return PreferenceMatrix::External(p);
}

PreferenceMatrix Uniform(Index n) {
  Matrix p = Matrix::Constant(n, n, 0.5);
  p.diagonal().setZero();
  return PreferenceMatrix::External(p);
}

TEST_CASE("loss values") {
  std::mt19937_64 rng(1);
  const auto p = RandomComplementary(7, rng);
  CHECK(Loss(p, Vector::Zero(7)) == doctest::Approx(21.0 * std::log(2.0)));

  Vector theta(2);
  theta << -0.5 * std::log(3.0), 0.5 * std::log(3.0);
  CHECK(Loss(TwoItem(0.75), theta) ==
        doctest::Approx(-0.75 * std::log(0.75) - 0.25 * std::log(0.25)).epsilon(1e-12));
  CHECK(Loss(TwoItem(0.75), theta) == doctest::Approx(0.5623351446188083).epsilon(1e-12));

  const Vector t = Vector::Random(7);
  CHECK(Loss(p, t, 0.3) - Loss(p, t) == doctest::Approx(0.3 * t.squaredNorm()).epsilon(1e-12));
  CHECK(Loss(p, t.array() + 4.2) == doctest::Approx(Loss(p, t)).epsilon(1e-12));
}

TEST_CASE("loss is stable for large score gaps") {
  Vector theta(2);
  theta << -400, 400;
  CHECK(std::isfinite(Loss(TwoItem(0.75), theta)));
  CHECK(Loss(TwoItem(1.0), theta) == doctest::Approx(0.0));
}

TEST_CASE("gradient values") {
  const Vector g0 = Gradient(Uniform(5), Vector::Zero(5));
  CHECK(g0.cwiseAbs().maxCoeff() == 0.0);
  const Vector g = Gradient(TwoItem(0.75), Vector::Zero(2));
  CHECK(g[0] == doctest::Approx(0.25));
  CHECK(g[1] == doctest::Approx(-0.25));
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> z;
  const double h = 1e-5;
  for (int rep = 0; rep < 100; ++rep) {
    const auto p = RandomComplementary(20, rng);
    Vector theta(20);
    for (Index i = 0; i < 20; ++i) theta[i] = z(rng);
    const double ridge = rep % 2 ? 0.1 : 0.0;
    const Vector g = Gradient(p, theta, ridge);
    Vector fd(20);
    for (Index k = 0; k < 20; ++k) {
      Vector a = theta, b = theta;
      a[k] += h;
      b[k] -= h;
      fd[k] = (Loss(p, a, ridge) - Loss(p, b, ridge)) / (2 * h);
    }
    CHECK((fd - g).norm() / g.norm() <= 1e-6);
  }
}

TEST_CASE("closed-form fits") {
  const auto two = FitCoreGd(TwoItem(0.75));
  CHECK(two.report.converged);
  CHECK(two.scores.theta[0] == doctest::Approx(-0.5493061443340549).epsilon(1e-6));
  CHECK(two.scores.theta[1] == doctest::Approx(0.5493061443340549).epsilon(1e-6));

  const auto flat = FitCoreGd(Uniform(6));
  CHECK(flat.scores.theta.cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(flat.report.iterations == 0);

  Matrix cycle = Matrix::Zero(3, 3);
  cycle(0, 1) = cycle(1, 2) = cycle(2, 0) = 1.0;
  GdConfig cfg;
  cfg.ridge = 1e-6;
  const auto c = FitCoreGd(PreferenceMatrix::External(cycle), cfg);
  CHECK(c.scores.theta.cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("centering, stationarity and rank agreement") {
  std::mt19937_64 rng(7);
  for (Index n : {10, 50, 200}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto p = RandomComplementary(n, rng);
      const auto fit = FitCoreGd(p);
      REQUIRE(fit.report.converged);
      const double eps = GdConfig{}.Resolved(n).tolerance;
      CHECK(std::abs(fit.scores.theta.sum()) <= 1e-8);
      CHECK(MonotoneLinkResiduals(fit.scores, p).cwiseAbs().maxCoeff() <= 10 * eps);
      const auto rho = Spearman(fit.scores.theta, WinRates(p));
      REQUIRE(rho.has_value());
      CHECK(*rho == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("loss never increases under backtracking") {
  std::mt19937_64 rng(3);
  const auto p = RandomComplementary(30, rng);
  double previous = Loss(p, Vector::Zero(30));
  for (int k = 1; k <= 40; ++k) {
    GdConfig cfg;
    cfg.max_iter = k;
    const double loss = FitCoreGd(p, cfg).report.final_loss;
    // Steps inside roundoff (1e-12 relative) may be accepted on gradient sign.
    CHECK(loss <= previous * (1.0 + 1e-12));
    previous = loss;
  }
}

TEST_CASE("fixed-step mode also converges on a well-conditioned problem") {
  std::mt19937_64 rng(4);
  const auto p = RandomComplementary(15, rng);
  GdConfig cfg;
  cfg.line_search = false;
  cfg.step = 0.1;
  cfg.max_iter = 100000;
  const auto fixed = FitCoreGd(p, cfg);
  CHECK(fixed.report.converged);
  const auto searched = FitCoreGd(p);
  CHECK((fixed.scores.theta - searched.scores.theta).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("permutation equivariance") {
  std::mt19937_64 rng(8);
  const Index n = 25;
  const auto p = RandomComplementary(n, rng);
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix q(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) q(i, j) = p(perm[i], perm[j]);
  }
  const auto a = FitCoreGd(p);
  const auto b = FitCoreGd(PreferenceMatrix::External(q));
  for (Index i = 0; i < n; ++i) {
    CHECK(b.scores.theta[i] == doctest::Approx(a.scores.theta[perm[i]]).epsilon(1e-9));
  }
}

TEST_CASE("separable preferences trip the divergence guard") {
  // Item order is total: every comparison goes to the larger index.
  Matrix p = Matrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = i + 1; j < 4; ++j) p(i, j) = 1.0;
  }
  GdConfig cfg;
  cfg.tolerance = 1e-40;
  const auto fit = FitCoreGd(PreferenceMatrix::External(p), cfg);
  CHECK(fit.report.diverged);
  CHECK_FALSE(fit.report.converged);
  cfg.ridge = 0.01;
  const auto ridge = FitCoreGd(PreferenceMatrix::External(p), cfg);
  CHECK_FALSE(ridge.report.diverged);
}

TEST_CASE("config validation") {
  GdConfig cfg;
  cfg.ridge = -1;
  CHECK_THROWS_AS(FitCoreGd(TwoItem(0.5), cfg), ValidationError);
  CHECK_THROWS_AS(Loss(TwoItem(0.5), Vector::Zero(3)), ValidationError);
  const GdConfig r = GdConfig{}.Resolved(100);
  CHECK(r.step == 0.01);
  CHECK(r.tolerance == doctest::Approx(1e-6));
  CHECK(r.max_iter == 5000);
}

}  // namespace
}  // namespace corerank
