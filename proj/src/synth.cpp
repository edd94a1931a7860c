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

#include "corerank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "corerank/parallel.hpp"

namespace corerank {
namespace {

constexpr std::uint64_t kOpponentStream = 1;
constexpr std::uint64_t kReferenceStream = 2;

const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

double LogSumExp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Asymmetric Laplace with P(x < loc) = kappa^2 / (1 + kappa^2): exponential
// tails with mean scale/kappa above loc and scale*kappa below.
double DrawAld(std::mt19937_64& rng, double loc, double scale, double kappa) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const double left_mass = kappa * kappa / (1.0 + kappa * kappa);
  if (unif(rng) < left_mass) return loc - scale * kappa * expo(rng);
  return loc + (scale / kappa) * expo(rng);
}

double AldLogDensity(double x, double loc, double scale, double kappa) {
  const double z = (x - loc) / scale;
  const double norm = std::log(kappa / (scale * (1.0 + kappa * kappa)));
  return norm + (z >= 0.0 ? -z * kappa : z / kappa);
}

}  // namespace

DistributionSpec DistributionSpec::Normal1d(double mean, double sd) {
  return Normal(1, mean, sd);
}

DistributionSpec DistributionSpec::Normal(Index dim, double mean, double sd) {
  DistributionSpec s;
  s.kind = DistributionKind::kNormal;
  s.dim = dim;
  s.location = mean;
  s.scale = sd;
  return s;
}

DistributionSpec DistributionSpec::SkewLaplace1d(double left_scale,
                                                 double right_scale) {
  DistributionSpec s;
  s.kind = DistributionKind::kSkewLaplace1d;
  s.left_scale = left_scale;
  s.right_scale = right_scale;
  return s;
}

DistributionSpec DistributionSpec::StudentT(Index dim, double df) {
  DistributionSpec s;
  s.kind = DistributionKind::kStudentT;
  s.dim = dim;
  s.df = df;
  return s;
}

DistributionSpec DistributionSpec::GaussianMixture(Index dim, double shift,
                                                   Index shifted_coords) {
  DistributionSpec s;
  s.kind = DistributionKind::kGaussianMixture;
  s.dim = dim;
  s.shift = shift;
  s.shifted_coords = shifted_coords;
  return s;
}

DistributionSpec DistributionSpec::SkewAld(Index dim, double location,
                                           double scale, double skew,
                                           double first_coord_multiplier) {
  DistributionSpec s;
  s.kind = DistributionKind::kSkewAld;
  s.dim = dim;
  s.location = location;
  s.scale = scale;
  s.skew = skew;
  s.first_coord_multiplier = first_coord_multiplier;
  return s;
}

void DistributionSpec::Validate() const {
  if (dim < 1) throw ValidationError("distribution dimension must be >= 1");
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(what) + " must be positive");
    }
  };
  switch (kind) {
    case DistributionKind::kNormal:
      positive(scale, "normal scale");
      break;
    case DistributionKind::kSkewLaplace1d:
      if (dim != 1) throw ValidationError("skew_laplace_1d is one-dimensional");
      positive(left_scale, "left scale b_L");
      positive(right_scale, "right scale b_R");
      break;
    case DistributionKind::kStudentT:
      if (!(df > 2.0)) throw ValidationError("student_t needs df > 2");
      break;
    case DistributionKind::kGaussianMixture:
      if (shifted_coords < 0) {
        throw ValidationError("shifted_coords must be nonnegative");
      }
      break;
    case DistributionKind::kSkewAld:
      positive(scale, "ALD scale");
      positive(skew, "ALD skew");
      positive(first_coord_multiplier, "first-coordinate multiplier");
      break;
  }
}

std::string DistributionSpec::Label() const {
  switch (kind) {
    case DistributionKind::kNormal: return "normal";
    case DistributionKind::kSkewLaplace1d: return "skew_laplace";
    case DistributionKind::kStudentT: return "t";
    case DistributionKind::kGaussianMixture: return "mixture";
    case DistributionKind::kSkewAld: return "skew_ald";
  }
  return "unknown";
}

DistributionSpec DistributionSpec::WithDim(Index d) const {
  DistributionSpec s = *this;
  s.dim = d;
  s.Validate();
  return s;
}

nlohmann::json ToJson(const DistributionSpec& s) {
  nlohmann::json j;
  switch (s.kind) {
    case DistributionKind::kNormal:
      j = {{"kind", s.dim == 1 ? "normal_1d" : "normal"},
           {"dim", s.dim}, {"mean", s.location}, {"sd", s.scale}};
      break;
    case DistributionKind::kSkewLaplace1d:
      j = {{"kind", "skew_laplace_1d"},
           {"left_scale", s.left_scale}, {"right_scale", s.right_scale}};
      break;
    case DistributionKind::kStudentT:
      j = {{"kind", "student_t"}, {"dim", s.dim}, {"df", s.df}};
      break;
    case DistributionKind::kGaussianMixture:
      j = {{"kind", "gaussian_mixture"}, {"dim", s.dim},
           {"shift", s.shift}, {"shifted_coords", s.shifted_coords}};
      break;
    case DistributionKind::kSkewAld:
      j = {{"kind", "skew_ald"}, {"dim", s.dim},
           {"location", s.location}, {"scale", s.scale}, {"skew", s.skew},
           {"first_coord_multiplier", s.first_coord_multiplier}};
      break;
  }
  return j;
}

DistributionSpec DistributionFromJson(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    DistributionSpec s;
    if (kind == "normal_1d" || kind == "normal") {
      s = DistributionSpec::Normal(j.value("dim", Index{1}),
                                   j.value("mean", 0.0), j.value("sd", 1.0));
      if (kind == "normal_1d" && s.dim != 1) {
        throw ValidationError("normal_1d must have dim 1");
      }
    } else if (kind == "skew_laplace_1d") {
      s = DistributionSpec::SkewLaplace1d(j.value("left_scale", 2.0),
                                          j.value("right_scale", 1.0));
    } else if (kind == "student_t") {
      s = DistributionSpec::StudentT(j.at("dim").get<Index>(),
                                     j.value("df", 5.0));
    } else if (kind == "gaussian_mixture") {
      s = DistributionSpec::GaussianMixture(j.at("dim").get<Index>(),
                                            j.value("shift", 4.0),
                                            j.value("shifted_coords", Index{10}));
    } else if (kind == "skew_ald") {
      s = DistributionSpec::SkewAld(
          j.at("dim").get<Index>(), j.value("location", 0.0),
          j.value("scale", 2.0), j.value("skew", 10.0),
          j.value("first_coord_multiplier", 100.0));
    } else {
      throw ValidationError("unknown distribution kind '" + kind + "'");
    }
    s.Validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad distribution spec: ") + e.what());
  }
}

std::mt19937_64 MakeStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

DataMatrix SampleFrom(const DistributionSpec& spec, Index n,
                      std::mt19937_64& rng) {
  spec.Validate();
  if (n < 0) throw ValidationError("sample size must be nonnegative");
  const Index d = spec.dim;
  Matrix x(n, d);
  std::normal_distribution<double> normal(0.0, 1.0);
  switch (spec.kind) {
    case DistributionKind::kNormal:
      for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < d; ++k) {
          x(i, k) = spec.location + spec.scale * normal(rng);
        }
      }
      break;
    case DistributionKind::kSkewLaplace1d: {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::exponential_distribution<double> expo(1.0);
      const double left_mass =
          spec.left_scale / (spec.left_scale + spec.right_scale);
      for (Index i = 0; i < n; ++i) {
        x(i, 0) = unif(rng) < left_mass ? -spec.left_scale * expo(rng)
                                        : spec.right_scale * expo(rng);
      }
      break;
    }
    case DistributionKind::kStudentT: {
      std::chi_squared_distribution<double> chi2(spec.df);
      for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < d; ++k) x(i, k) = normal(rng);
        const double w = chi2(rng);
        x.row(i) /= std::sqrt(w / spec.df);
      }
      break;
    }
    case DistributionKind::kGaussianMixture: {
      std::bernoulli_distribution coin(0.5);
      const Index shifted = std::min(spec.shifted_coords, d);
      for (Index i = 0; i < n; ++i) {
        const double sign = coin(rng) ? 1.0 : -1.0;
        for (Index k = 0; k < d; ++k) {
          x(i, k) = normal(rng) + (k < shifted ? sign * spec.shift : 0.0);
        }
      }
      break;
    }
    case DistributionKind::kSkewAld:
      for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < d; ++k) {
          x(i, k) = DrawAld(rng, spec.location, spec.scale, spec.skew);
        }
        x(i, 0) *= spec.first_coord_multiplier;
      }
      break;
  }
  return DataMatrix(std::move(x));
}

DataMatrix Sample(const DistributionSpec& spec, Index n, std::uint64_t seed) {
  auto rng = MakeStream(seed, 0);
  return SampleFrom(spec, n, rng);
}

double LogDensity(const DistributionSpec& spec,
                  const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  spec.Validate();
  if (x.size() != spec.dim) {
    throw ValidationError("point dimension " + std::to_string(x.size()) +
                          " does not match distribution dimension " +
                          std::to_string(spec.dim));
  }
  const double d = static_cast<double>(spec.dim);
  switch (spec.kind) {
    case DistributionKind::kNormal: {
      const double r2 =
          (x.array() - spec.location).square().sum() / (spec.scale * spec.scale);
      return -0.5 * d * kLogTwoPi - d * std::log(spec.scale) - 0.5 * r2;
    }
    case DistributionKind::kSkewLaplace1d: {
      const double v = x[0];
      return -std::log(spec.left_scale + spec.right_scale) +
             (v < 0.0 ? v / spec.left_scale : -v / spec.right_scale);
    }
    case DistributionKind::kStudentT: {
      const double nu = spec.df;
      return std::lgamma(0.5 * (nu + d)) - std::lgamma(0.5 * nu) -
             0.5 * d * std::log(nu * std::numbers::pi) -
             0.5 * (nu + d) * std::log1p(x.squaredNorm() / nu);
    }
    case DistributionKind::kGaussianMixture: {
      Eigen::RowVectorXd u = Eigen::RowVectorXd::Zero(spec.dim);
      u.head(std::min(spec.shifted_coords, spec.dim)).setConstant(spec.shift);
      const double a = -0.5 * (x - u).squaredNorm();
      const double b = -0.5 * (x + u).squaredNorm();
      return std::log(0.5) + LogSumExp(a, b) - 0.5 * d * kLogTwoPi;
    }
    case DistributionKind::kSkewAld: {
      double total = AldLogDensity(x[0] / spec.first_coord_multiplier,
                                   spec.location, spec.scale, spec.skew) -
                     std::log(spec.first_coord_multiplier);
      for (Index k = 1; k < spec.dim; ++k) {
        total += AldLogDensity(x[k], spec.location, spec.scale, spec.skew);
      }
      return total;
    }
  }
  return 0.0;
}

Vector LogDensities(const DistributionSpec& spec, const DataMatrix& data) {
  Vector out(data.rows());
  for (Index i = 0; i < data.rows(); ++i) out[i] = LogDensity(spec, data.row(i));
  return out;
}

double Cdf1d(const DistributionSpec& spec, double x) {
  spec.Validate();
  switch (spec.kind) {
    case DistributionKind::kNormal:
      if (spec.dim != 1) break;
      return 0.5 * std::erfc(-(x - spec.location) / (spec.scale * std::sqrt(2.0)));
    case DistributionKind::kSkewLaplace1d: {
      const double total = spec.left_scale + spec.right_scale;
      if (x < 0.0) return spec.left_scale / total * std::exp(x / spec.left_scale);
      return 1.0 - spec.right_scale / total * std::exp(-x / spec.right_scale);
    }
    default:
      break;
  }
  throw ValidationError("a closed-form CDF exists only for one-dimensional specs");
}

MonteCarloOracle::MonteCarloOracle(const DistributionSpec& spec,
                                   const MetricSpec& metric, Index m1, Index m2,
                                   std::uint64_t seed)
    : metric_(metric), m1_(m1), m2_(m2), seed_(seed) {
  if (m1 < 1 || m2 < 1) throw ValidationError("M1 and M2 must be >= 1");
  auto opponent_rng = MakeStream(seed, kOpponentStream);
  auto reference_rng = MakeStream(seed, kReferenceStream);
  const DataMatrix opponents = SampleFrom(spec, m1, opponent_rng);
  const DataMatrix refs = SampleFrom(spec, m2, reference_rng);
  whitened_refs_ = metric_.Whiten(refs.values());
  const Matrix whitened_opp = metric_.Whiten(opponents.values());
  sorted_opponent_.resize(m2, m1);
  ParallelFor(0, m2, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (Index j = lo; j < hi; ++j) {
      const auto z = whitened_refs_.row(j);
      double* out = sorted_opponent_.row(j).data();
      for (Index k = 0; k < m1; ++k) out[k] = (whitened_opp.row(k) - z).norm();
      std::sort(out, out + m1);
    }
  });
}

double MonteCarloOracle::Evaluate(
    const Eigen::Ref<const Eigen::RowVectorXd>& y) const {
  if (y.size() != whitened_refs_.cols()) {
    throw ValidationError("oracle point has the wrong dimension");
  }
  const Eigen::RowVectorXd wy = metric_.Whiten(Matrix(y));
  std::int64_t wins = 0;
  for (Index j = 0; j < m2_; ++j) {
    const double to_y = (whitened_refs_.row(j) - wy).norm();
    const double* row = sorted_opponent_.row(j).data();
    // Opponents strictly farther from Z_j than y is.
    wins += (row + m1_) - std::upper_bound(row, row + m1_, to_y);
  }
  return static_cast<double>(wins) /
         (static_cast<double>(m1_) * static_cast<double>(m2_));
}

Vector MonteCarloOracle::EvaluateAll(const DataMatrix& points) const {
  Vector out(points.rows());
  ParallelFor(0, points.rows(), [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (Index i = lo; i < hi; ++i) out[i] = Evaluate(points.row(i));
  });
  return out;
}

OracleEstimate MonteCarloR(const Eigen::Ref<const Eigen::RowVectorXd>& y,
                           const DistributionSpec& spec,
                           const MetricSpec& metric, Index m1, Index m2,
                           std::uint64_t seed) {
  const MonteCarloOracle oracle(spec, metric, m1, m2, seed);
  OracleEstimate est;
  est.value = oracle.Evaluate(y);
  est.m1 = m1;
  est.m2 = m2;
  est.seed = seed;
  return est;
}

}  // namespace corerank
