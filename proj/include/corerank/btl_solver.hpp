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

#ifndef CORERANK_BTL_SOLVER_HPP_
#define CORERANK_BTL_SOLVER_HPP_

#include "corerank/preference.hpp"
#include "corerank/types.hpp"

namespace corerank {

// Centered log-strength scores: sum(theta) == 0 up to rounding.
struct ScoreVector {
  Vector theta;

  Index size() const { return theta.size(); }
  Vector Strengths() const { return theta.array().exp(); }
};

// Zero for any field means "use the default for this n".
struct GdConfig {
  double step = 0.0;       // first trial step; default 1/n
  double tolerance = 0.0;  // sup-norm of the projected gradient; default 1e-8 n
  int max_iter = 0;        // default 50 n
  double ridge = 0.0;      // lambda in lambda * ||theta||^2
  bool line_search = true; // Armijo backtracking; false runs the fixed step
  double divergence_bound = 50.0;

  // Fills defaults and validates; throws ValidationError.
  GdConfig Resolved(Index n) const;
};

struct FitReport {
  int iterations = 0;
  double final_grad_norm = 0.0;
  double final_loss = 0.0;
  bool converged = false;
  bool diverged = false;
};

struct GdFit {
  ScoreVector scores;
  FitReport report;
};

// Logistic function and its log, stable for large |t|.
double Sigmoid(double t);
double Softplus(double t);

// sum_{i<j} [-p_ij log s(t_ij) - (1 - p_ij) log(1 - s(t_ij))] + ridge ||theta||^2
// with t_ij = theta_j - theta_i. Only the upper triangle of P enters.
double Loss(const PreferenceMatrix& p, const Vector& theta, double ridge = 0.0);

// sum_{i<j} (s(t_ij) - p_ij)(e_j - e_i) + 2 ridge theta.
Vector Gradient(const PreferenceMatrix& p, const Vector& theta,
                double ridge = 0.0);

// Projected gradient descent from theta = 0 with Armijo backtracking. Searches
// after the first open at the Barzilai-Borwein step s.y / y.y of the previous
// move, capped so no coordinate moves by more than 10. Stops when the centered
// gradient has sup-norm <= tolerance, or flags max-iter / divergence (max|theta|
// above the bound) and returns the last iterate.
GdFit FitCoreGd(const PreferenceMatrix& p, const GdConfig& config = {});

}  // namespace corerank

#endif  // CORERANK_BTL_SOLVER_HPP_
