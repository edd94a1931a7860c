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

#include "corerank/geometry.hpp"

#include <cmath>
#include <sstream>

#include "corerank/csv_io.hpp"
#include "corerank/parallel.hpp"

namespace corerank {
namespace {

std::string Entry(Index r, Index c) {
  return "(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")";
}

// Each entry is an independent l2 norm over whitened rows, so the result does
// not depend on how rows are split across workers.
Matrix EuclideanCross(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.rows());
  ParallelFor(0, a.rows(), [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (Index i = lo; i < hi; ++i) {
      const auto ai = a.row(i);
      for (Index j = 0; j < b.rows(); ++j) {
        out(i, j) = (ai - b.row(j)).norm();
      }
    }
  });
  return out;
}

}  // namespace

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  for (Index r = 0; r < values_.rows(); ++r) {
    if (!values_.row(r).allFinite()) {
      throw ValidationError("non-finite value in data row " +
                            std::to_string(r + 1));
    }
  }
}

MetricSpec MetricSpec::Euclidean() { return MetricSpec(); }

MetricSpec MetricSpec::Precomputed() {
  MetricSpec m;
  m.kind_ = MetricKind::kPrecomputed;
  return m;
}

MetricSpec MetricSpec::Mahalanobis(const Matrix& scatter) {
  if (scatter.rows() != scatter.cols() || scatter.rows() == 0) {
    throw ValidationError("mahalanobis scatter must be a non-empty square matrix");
  }
  if (!scatter.allFinite()) {
    throw ValidationError("mahalanobis scatter has non-finite entries");
  }
  const double scale = scatter.cwiseAbs().maxCoeff();
  if ((scatter - scatter.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ValidationError("mahalanobis scatter is not symmetric");
  }
  const Eigen::MatrixXd dense = scatter;
  Eigen::LLT<Eigen::MatrixXd> llt(dense);
  if (llt.info() != Eigen::Success ||
      (llt.matrixL().toDenseMatrix().diagonal().array() <= 0.0).any()) {
    throw ValidationError("mahalanobis scatter is not positive definite");
  }
  MetricSpec m;
  m.kind_ = MetricKind::kMahalanobis;
  m.scatter_ = scatter;
  m.factor_ = llt.matrixL().toDenseMatrix();
  return m;
}

Matrix MetricSpec::Whiten(const Matrix& points) const {
  switch (kind_) {
    case MetricKind::kEuclidean:
      return points;
    case MetricKind::kMahalanobis: {
      if (points.cols() != factor_.rows()) {
        throw ValidationError(
            "mahalanobis scatter is " + std::to_string(factor_.rows()) + "x" +
            std::to_string(factor_.rows()) + " but data has dimension " +
            std::to_string(points.cols()));
      }
      Eigen::MatrixXd rhs = points.transpose();
      factor_.triangularView<Eigen::Lower>().solveInPlace(rhs);
      return rhs.transpose();
    }
    case MetricKind::kPrecomputed:
      break;
  }
  throw ValidationError("a precomputed metric cannot be applied to raw data");
}

MetricKind ParseMetricKind(const std::string& name) {
  if (name == "euclidean") return MetricKind::kEuclidean;
  if (name == "mahalanobis") return MetricKind::kMahalanobis;
  if (name == "precomputed") return MetricKind::kPrecomputed;
  throw ValidationError("unknown metric '" + name +
                        "' (expected euclidean, mahalanobis or precomputed)");
}

std::string MetricKindName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kEuclidean: return "euclidean";
    case MetricKind::kMahalanobis: return "mahalanobis";
    case MetricKind::kPrecomputed: return "precomputed";
  }
  return "unknown";
}

DistanceMatrix::DistanceMatrix(Matrix values, bool symmetric)
    : values_(std::move(values)), symmetric_(symmetric) {
  for (Index r = 0; r < values_.rows(); ++r) {
    for (Index c = 0; c < values_.cols(); ++c) {
      const double v = values_(r, c);
      if (!std::isfinite(v)) {
        throw ValidationError("non-finite distance at entry " + Entry(r, c));
      }
      if (v < 0.0) {
        throw ValidationError("negative distance at entry " + Entry(r, c));
      }
    }
  }
  if (!symmetric_) return;
  if (values_.rows() != values_.cols()) {
    throw ValidationError("symmetric distance matrix must be square");
  }
  for (Index r = 0; r < values_.rows(); ++r) {
    if (values_(r, r) != 0.0) {
      throw ValidationError("nonzero diagonal at entry " + Entry(r, r));
    }
    for (Index c = r + 1; c < values_.cols(); ++c) {
      if (values_(r, c) != values_(c, r)) {
        throw ValidationError("asymmetric distances at entry " + Entry(r, c));
      }
    }
  }
}

DistanceMatrix PairwiseDistanceMatrix(const DataMatrix& data,
                                      const MetricSpec& metric) {
  const Matrix w = metric.Whiten(data.values());
  return DistanceMatrix(EuclideanCross(w, w), /*symmetric=*/true);
}

DistanceMatrix CrossDistanceMatrix(const DataMatrix& refs,
                                   const DataMatrix& data,
                                   const MetricSpec& metric) {
  if (refs.rows() > 0 && data.rows() > 0 && refs.cols() != data.cols()) {
    throw ValidationError("dimension mismatch: references have " +
                          std::to_string(refs.cols()) + " columns, data has " +
                          std::to_string(data.cols()));
  }
  const Matrix wr = metric.Whiten(refs.values());
  const Matrix wd = metric.Whiten(data.values());
  return DistanceMatrix(EuclideanCross(wr, wd), /*symmetric=*/false);
}

LoadedDistances ParseDistanceMatrix(Matrix raw, bool expect_symmetric,
                                    const std::string& source) {
  for (Index r = 0; r < raw.rows(); ++r) {
    for (Index c = 0; c < raw.cols(); ++c) {
      if (!std::isfinite(raw(r, c))) {
        throw ValidationError(source + ": non-finite distance at entry " +
                              Entry(r, c));
      }
      if (raw(r, c) < 0.0) {
        throw ValidationError(source + ": negative distance at entry " +
                              Entry(r, c));
      }
    }
  }
  LoadedDistances out;
  if (expect_symmetric) {
    if (raw.rows() != raw.cols()) {
      throw ValidationError(source + ": expected a square matrix, got " +
                            std::to_string(raw.rows()) + "x" +
                            std::to_string(raw.cols()));
    }
    for (Index r = 0; r < raw.rows(); ++r) {
      if (std::abs(raw(r, r)) > kLoadTolerance) {
        throw ValidationError(source + ": nonzero diagonal at entry " +
                              Entry(r, r));
      }
      raw(r, r) = 0.0;
      for (Index c = r + 1; c < raw.cols(); ++c) {
        const double dev = std::abs(raw(r, c) - raw(c, r));
        if (dev > kLoadTolerance) {
          throw ValidationError(source + ": asymmetric distances at entry " +
                                Entry(r, c));
        }
        out.max_asymmetry = std::max(out.max_asymmetry, dev);
        const double avg = 0.5 * (raw(r, c) + raw(c, r));
        raw(r, c) = avg;
        raw(c, r) = avg;
      }
    }
  }
  out.matrix = DistanceMatrix(std::move(raw), expect_symmetric);
  return out;
}

LoadedDistances LoadDistanceMatrix(const std::string& path,
                                   bool expect_symmetric) {
  return ParseDistanceMatrix(ReadNumericCsv(path, false), expect_symmetric,
                             path);
}

void SaveDistanceMatrix(const std::string& path, const DistanceMatrix& d) {
  WriteNumericCsv(path, d.values());
}

DataMatrix LoadDataMatrix(const std::string& path, bool has_header) {
  try {
    return DataMatrix(ReadNumericCsv(path, has_header));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

Matrix SampleCovariance(const DataMatrix& data) {
  const Index n = data.rows();
  if (n < 2) throw ValidationError("covariance needs at least two rows");
  const Eigen::RowVectorXd mean = data.values().colwise().mean();
  const Matrix centered = data.values().rowwise() - mean;
  return (centered.transpose() * centered) / static_cast<double>(n - 1);
}

}  // namespace corerank
