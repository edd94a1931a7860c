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

#include "corerank/btl_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace corerank {
namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-30;
constexpr double kMaxStep = 1e30;
constexpr double kMaxMove = 10.0;

struct Evaluation {
  double loss = 0.0;
  Vector gradient;
};

// One pass over the upper triangle: loss and gradient share exp(-|t|).
Evaluation Evaluate(const Matrix& p, const Vector& theta, double ridge) {
  const Index n = p.rows();
  Evaluation ev;
  ev.gradient = Vector::Zero(n);
  double loss = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double* pi = p.row(i).data();
    const double ti = theta[i];
    double gi = 0.0;
    double row_loss = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double t = theta[j] - ti;
      const double e = std::exp(-std::abs(t));
      const double pij = pi[j];
      // p softplus(-t) + (1 - p) softplus(t)
      row_loss += (t >= 0.0 ? (1.0 - pij) * t : -pij * t) + std::log1p(e);
      // sigma(t) - p, written as (1 - p) - sigma(-t) for t >= 0 so the tail
      // keeps its precision instead of rounding sigma(t) to 1.
      const double tail = e / (1.0 + e);
      const double r = t >= 0.0 ? (1.0 - pij) - tail : tail - pij;
      ev.gradient[j] += r;
      gi -= r;
    }
    ev.gradient[i] += gi;
    loss += row_loss;
  }
  if (ridge > 0.0) {
    loss += ridge * theta.squaredNorm();
    ev.gradient += 2.0 * ridge * theta;
  }
  ev.loss = loss;
  return ev;
}

void CheckSize(const PreferenceMatrix& p, const Vector& theta) {
  if (p.size() != theta.size()) {
    throw ValidationError("score vector has " + std::to_string(theta.size()) +
                          " entries but the preference matrix is " +
                          std::to_string(p.size()) + "x" +
                          std::to_string(p.size()));
  }
}

Vector Project(const Vector& g) {
  return g.array() - g.mean();
}

}  // namespace

double Sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double Softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

GdConfig GdConfig::Resolved(Index n) const {
  GdConfig c = *this;
  const double dn = static_cast<double>(std::max<Index>(n, 1));
  if (c.step == 0.0) c.step = 1.0 / dn;
  if (c.tolerance == 0.0) c.tolerance = 1e-8 * dn;
  if (c.max_iter == 0) c.max_iter = static_cast<int>(50 * std::max<Index>(n, 1));
  if (!(c.step > 0.0)) throw ValidationError("step size must be positive");
  if (!(c.tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  if (c.max_iter < 1) throw ValidationError("max_iter must be at least 1");
  if (!(c.ridge >= 0.0)) throw ValidationError("ridge must be nonnegative");
  if (!(c.divergence_bound > 0.0)) {
    throw ValidationError("divergence bound must be positive");
  }
  return c;
}

double Loss(const PreferenceMatrix& p, const Vector& theta, double ridge) {
  CheckSize(p, theta);
  return Evaluate(p.values(), theta, ridge).loss;
}

Vector Gradient(const PreferenceMatrix& p, const Vector& theta, double ridge) {
  CheckSize(p, theta);
  return Evaluate(p.values(), theta, ridge).gradient;
}

GdFit FitCoreGd(const PreferenceMatrix& p, const GdConfig& config) {
  const Index n = p.size();
  if (n < 2) throw ValidationError("fitting needs at least two items");
  const GdConfig cfg = config.Resolved(n);
  const Matrix& pv = p.values();

  GdFit fit;
  Vector theta = Vector::Zero(n);
  Evaluation ev = Evaluate(pv, theta, cfg.ridge);
  Vector g = Project(ev.gradient);
  double step = cfg.step;
  FitReport& report = fit.report;

  // Short Barzilai-Borwein step s.y / y.y from the last accepted move. When
  // that is unavailable (s.y <= 0, or the move was lost in rounding) the
  // next trial doubles the last accepted step instead.
  std::optional<double> bb;
  double fallback = step;
  int t = 0;
  for (; t < cfg.max_iter; ++t) {
    if (g.lpNorm<Eigen::Infinity>() <= cfg.tolerance) {
      report.converged = true;
      break;
    }
    const double g_sq = g.squaredNorm();
    Vector trial;
    Evaluation trial_ev;
    if (cfg.line_search) {
      double eta = std::clamp(bb ? *bb : fallback, kMinStep, kMaxStep);
      // Flat directions (nearly dominated items) would otherwise get huge
      // trial steps.
      eta = std::min(eta, kMaxMove / g.lpNorm<Eigen::Infinity>());
      bool accepted = false;
      while (eta >= kMinStep) {
        trial = theta - eta * g;
        trial_ev = Evaluate(pv, trial, cfg.ridge);
        const double decrease = ev.loss - trial_ev.loss;
        if (decrease >= kArmijo * eta * g_sq) {
          accepted = true;
        } else if (std::abs(decrease) <=
                   1e-12 * std::max(1.0, std::abs(ev.loss))) {
          // The loss difference is lost in rounding; along a convex ray the
          // step still descends while the directional derivative at the
          // trial point stays negative.
          accepted = Project(trial_ev.gradient).dot(g) >= 0.0;
        }
        if (accepted) break;
        eta *= 0.5;
      }
      if (!accepted) break;  // no representable descent step remains
      fallback = 2.0 * eta;
    } else {
      trial = theta - step * g;
      trial_ev = Evaluate(pv, trial, cfg.ridge);
    }
    Vector next_g = Project(trial_ev.gradient);
    const Vector ds = trial - theta;
    const Vector dy = next_g - g;
    const double sy = ds.dot(dy);
    bb = sy > 0.0 ? std::optional<double>(sy / dy.squaredNorm()) : std::nullopt;
    theta = std::move(trial);
    ev = std::move(trial_ev);
    g = std::move(next_g);
    if (!theta.allFinite() ||
        theta.lpNorm<Eigen::Infinity>() > cfg.divergence_bound) {
      report.diverged = true;
      ++t;
      break;
    }
  }

  if (!report.converged && !report.diverged &&
      g.lpNorm<Eigen::Infinity>() <= cfg.tolerance) {
    report.converged = true;
  }
  theta.array() -= theta.mean();
  report.iterations = t;
  report.final_grad_norm = g.lpNorm<Eigen::Infinity>();
  report.final_loss = ev.loss;
  fit.scores.theta = std::move(theta);
  return fit;
}

}  // namespace corerank
