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

#include "corerank/baselines.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "corerank/synth.hpp"

namespace corerank {

Vector NegL2Scores(const DataMatrix& data) {
  if (data.rows() < 1) throw ValidationError("Neg-L2 needs at least one point");
  const Eigen::RowVectorXd mean = data.values().colwise().mean();
  return -(data.values().rowwise() - mean).rowwise().norm();
}

Vector MahalanobisDepthScores(const DataMatrix& data) {
  const Index n = data.rows();
  const Index d = data.cols();
  if (n <= d) {
    throw ValidationError("Mahalanobis depth needs n > d (n = " +
                          std::to_string(n) + ", d = " + std::to_string(d) + ")");
  }
  const Eigen::MatrixXd cov = SampleCovariance(data);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cov);
  const auto& sv = svd.singularValues();
  const double cond = sv[sv.size() - 1] > 0.0
                          ? sv[0] / sv[sv.size() - 1]
                          : std::numeric_limits<double>::infinity();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success || !(cond < 1e14)) {
    std::ostringstream msg;
    msg << "sample covariance is singular (condition number " << cond << ")";
    throw NumericalError(msg.str());
  }
  const Eigen::RowVectorXd mean = data.values().colwise().mean();
  Eigen::MatrixXd centered_t = (data.values().rowwise() - mean).transpose();
  llt.matrixL().solveInPlace(centered_t);
  const Vector q = centered_t.colwise().squaredNorm().transpose();
  return (1.0 + q.array()).inverse();
}

Vector SpatialDepthScores(const DataMatrix& data) {
  const Index n = data.rows();
  if (n < 2) throw ValidationError("spatial depth needs n >= 2");
  const Matrix& x = data.values();
  Vector out(n);
  Eigen::RowVectorXd acc(x.cols());
  for (Index i = 0; i < n; ++i) {
    acc.setZero();
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const Eigen::RowVectorXd diff = x.row(j) - x.row(i);
      const double len = diff.norm();
      if (len > 0.0) acc += diff / len;
    }
    out[i] = 1.0 - acc.norm() / static_cast<double>(n - 1);
  }
  return out;
}

Vector RpSpatialScores(const DataMatrix& data, const RpSpatialSpec& spec) {
  const Index d = data.cols();
  if (spec.n_proj < 1) throw ValidationError("n_proj must be >= 1");
  if (spec.proj_dim < 1 || spec.proj_dim > d) {
    throw ValidationError("proj_dim must lie in [1, d] (d = " +
                          std::to_string(d) + ")");
  }
  Vector total = Vector::Zero(data.rows());
  for (Index k = 0; k < spec.n_proj; ++k) {
    auto rng = MakeStream(spec.seed, static_cast<std::uint64_t>(k));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(d, spec.proj_dim);
    for (Index c = 0; c < spec.proj_dim; ++c) {
      for (Index r = 0; r < d; ++r) g(r, c) = normal(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(d, spec.proj_dim);
    total += SpatialDepthScores(DataMatrix(Matrix(data.values() * q)));
  }
  return total / static_cast<double>(spec.n_proj);
}

}  // namespace corerank
