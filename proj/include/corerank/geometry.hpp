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

#ifndef CORERANK_GEOMETRY_HPP_
#define CORERANK_GEOMETRY_HPP_

#include <string>

#include "corerank/types.hpp"

namespace corerank {

// Observations as rows. Every entry is finite.
class DataMatrix {
 public:
  DataMatrix() = default;
  // Throws ValidationError naming the first row (1-based) with a non-finite
  // entry.
  explicit DataMatrix(Matrix values);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  auto row(Index i) const { return values_.row(i); }

 private:
  Matrix values_;
};

enum class MetricKind { kEuclidean, kMahalanobis, kPrecomputed };

// A dissimilarity on R^d. Mahalanobis keeps the lower Cholesky factor of its
// scatter so points can be whitened once and then compared in l2.
class MetricSpec {
 public:
  static MetricSpec Euclidean();
  // Throws ValidationError unless scatter is square, symmetric and positive
  // definite.
  static MetricSpec Mahalanobis(const Matrix& scatter);
  static MetricSpec Precomputed();

  MetricKind kind() const { return kind_; }
  Index dimension() const { return factor_.rows(); }
  const Matrix& scatter() const { return scatter_; }

  // Maps rows into the coordinates in which this metric is Euclidean:
  // identity for euclidean, rows * L^{-T} for mahalanobis (scatter = L L^T).
  Matrix Whiten(const Matrix& points) const;

 private:
  MetricKind kind_ = MetricKind::kEuclidean;
  Matrix scatter_;
  Matrix factor_;
};

MetricKind ParseMetricKind(const std::string& name);
std::string MetricKindName(MetricKind kind);

// Nonnegative, finite dissimilarities. A symmetric matrix is square with an
// exactly zero diagonal and D(i,j) == D(j,i).
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  // Validates and (when symmetric) checks the structure exactly.
  DistanceMatrix(Matrix values, bool symmetric);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  bool symmetric() const { return symmetric_; }
  const Matrix& values() const { return values_; }
  double operator()(Index r, Index c) const { return values_(r, c); }

 private:
  Matrix values_;
  bool symmetric_ = false;
};

DistanceMatrix PairwiseDistanceMatrix(const DataMatrix& data,
                                      const MetricSpec& metric);

// Entry (l, i) is the dissimilarity between refs row l and data row i.
DistanceMatrix CrossDistanceMatrix(const DataMatrix& refs,
                                   const DataMatrix& data,
                                   const MetricSpec& metric);

struct LoadedDistances {
  DistanceMatrix matrix;
  // Largest |D(i,j) - D(j,i)| seen before symmetrizing; 0 when not expected.
  double max_asymmetry = 0.0;
};

// Tolerance for the diagonal and for symmetry of loaded matrices.
inline constexpr double kLoadTolerance = 1e-9;

// Reads a headerless distance grid. When expect_symmetric is set, the matrix
// must be square, have |diagonal| <= 1e-9 and asymmetry <= 1e-9; it is then
// symmetrized by averaging and its diagonal zeroed.
LoadedDistances LoadDistanceMatrix(const std::string& path,
                                   bool expect_symmetric);
LoadedDistances ParseDistanceMatrix(Matrix raw, bool expect_symmetric,
                                    const std::string& source);
void SaveDistanceMatrix(const std::string& path, const DistanceMatrix& d);

DataMatrix LoadDataMatrix(const std::string& path, bool has_header);

// Sample covariance with divisor n-1.
Matrix SampleCovariance(const DataMatrix& data);

}  // namespace corerank

#endif  // CORERANK_GEOMETRY_HPP_
