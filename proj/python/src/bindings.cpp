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

#include <optional>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "corerank/baselines.hpp"
#include "corerank/btl_solver.hpp"
#include "corerank/geometry.hpp"
#include "corerank/harness.hpp"
#include "corerank/metrics.hpp"
#include "corerank/preference.hpp"
#include "corerank/scoring.hpp"
#include "corerank/spectral.hpp"
#include "corerank/synth.hpp"

namespace py = pybind11;
using namespace corerank;

namespace {

MetricSpec MakeMetric(const std::string& name, const std::optional<Matrix>& scatter,
                      const DataMatrix& data) {
  switch (ParseMetricKind(name)) {
    case MetricKind::kEuclidean: return MetricSpec::Euclidean();
    case MetricKind::kMahalanobis:
      return MetricSpec::Mahalanobis(scatter ? *scatter : SampleCovariance(data));
    case MetricKind::kPrecomputed: break;
  }
  throw ValidationError("metric must be euclidean or mahalanobis here");
}

PreferenceMatrix AsPreferences(const Matrix& p) {
  if (p.rows() != p.cols()) throw ValidationError("preference matrix must be square");
  return PreferenceMatrix::External(p);
}

py::dict GdResult(const GdFit& fit) {
  py::dict d;
  d["theta"] = fit.scores.theta;
  d["iterations"] = fit.report.iterations;
  d["grad_norm"] = fit.report.final_grad_norm;
  d["loss"] = fit.report.final_loss;
  d["converged"] = fit.report.converged;
  d["diverged"] = fit.report.diverged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_corerank, m) {
  m.doc() = "Preference-based centrality scores (C++ core).";

  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical, e.what());
    }
  });

  m.def("pairwise_distances",
        [](const Matrix& x, const std::string& metric, const std::optional<Matrix>& scatter) {
          const DataMatrix data(x);
          return PairwiseDistanceMatrix(data, MakeMetric(metric, scatter, data)).values();
        },
        py::arg("x"), py::arg("metric") = "euclidean", py::arg("scatter") = py::none());

  m.def("cross_distances",
        [](const Matrix& refs, const Matrix& x, const std::string& metric,
           const std::optional<Matrix>& scatter) {
          const DataMatrix data(x);
          return CrossDistanceMatrix(DataMatrix(refs), data, MakeMetric(metric, scatter, data))
              .values();
        },
        py::arg("refs"), py::arg("x"), py::arg("metric") = "euclidean",
        py::arg("scatter") = py::none());

  m.def("preferences_leave_two_out",
        [](const Matrix& d, const std::string& tie_policy) {
          const auto loaded = ParseDistanceMatrix(d, true, "distances");
          return PreferenceLeaveTwoOut(loaded.matrix, ParseTiePolicy(tie_policy)).values();
        },
        py::arg("distances"), py::arg("tie_policy") = "strict");

  m.def("preferences_reference",
        [](const Matrix& cross, const std::string& tie_policy) {
          const auto loaded = ParseDistanceMatrix(cross, false, "cross distances");
          return PreferenceReference(loaded.matrix, ParseTiePolicy(tie_policy)).values();
        },
        py::arg("cross"), py::arg("tie_policy") = "strict");

  m.def("loss", [](const Matrix& p, const Vector& theta, double ridge) {
          return Loss(AsPreferences(p), theta, ridge);
        },
        py::arg("p"), py::arg("theta"), py::arg("ridge") = 0.0);
  m.def("gradient", [](const Matrix& p, const Vector& theta, double ridge) {
          return Gradient(AsPreferences(p), theta, ridge);
        },
        py::arg("p"), py::arg("theta"), py::arg("ridge") = 0.0);

  m.def("fit_gd",
        [](const Matrix& p, double ridge, double tolerance, int max_iter) {
          GdConfig cfg;
          cfg.ridge = ridge;
          cfg.tolerance = tolerance;
          cfg.max_iter = max_iter;
          return GdResult(FitCoreGd(AsPreferences(p), cfg));
        },
        py::arg("p"), py::arg("ridge") = 0.0, py::arg("tolerance") = 0.0,
        py::arg("max_iter") = 0, "tolerance 0 and max_iter 0 select 1e-8 n and 50 n.");

  m.def("fit_spectral",
        [](const Matrix& p, double smoothing) {
          SpectralConfig cfg;
          cfg.smoothing = smoothing;
          const SpectralFit fit = FitCoreSpectral(AsPreferences(p), cfg);
          py::dict d;
          d["theta"] = fit.scores.theta;
          d["strengths"] = fit.stationary.strengths.s;
          d["iterations"] = fit.stationary.iterations;
          d["fixed_point_residual"] = fit.stationary.fixed_point_residual;
          d["converged"] = fit.stationary.converged;
          d["floored"] = fit.floored;
          return d;
        },
        py::arg("p"), py::arg("smoothing") = 0.0);

  m.def("win_rates", [](const Matrix& p) { return WinRates(AsPreferences(p)); }, py::arg("p"));

  m.def("stationarity_residuals",
        [](const Vector& theta, const Matrix& p) {
          return MonotoneLinkResiduals(ScoreVector{theta}, AsPreferences(p));
        },
        py::arg("theta"), py::arg("p"));

  m.def("kernel_extend",
        [](const Vector& theta, const Matrix& data, const Matrix& queries,
           std::optional<double> bandwidth) {
          KernelSpec kernel;
          kernel.bandwidth = bandwidth;
          const auto ext = KernelExtend(ScoreVector{theta}, DataMatrix(data), DataMatrix(queries),
                                        MetricSpec::Euclidean(), kernel);
          py::dict d;
          d["theta"] = ext.theta;
          d["strength"] = ext.strength;
          d["bandwidth"] = ext.bandwidth;
          d["nearest_neighbor_fallback"] = ext.nearest_neighbor_fallback;
          return d;
        },
        py::arg("theta"), py::arg("data"), py::arg("queries"),
        py::arg("bandwidth") = py::none());

  m.def("neg_l2_scores", [](const Matrix& x) { return NegL2Scores(DataMatrix(x)); });
  m.def("spatial_depth_scores", [](const Matrix& x) { return SpatialDepthScores(DataMatrix(x)); });
  m.def("mahalanobis_depth_scores",
        [](const Matrix& x) { return MahalanobisDepthScores(DataMatrix(x)); });

  m.def("spearman", [](const Vector& a, const Vector& b) { return Spearman(a, b); });
  m.def("pearson", [](const Vector& a, const Vector& b) { return Pearson(a, b); });

  // Distribution specs and experiment configs cross as JSON text.
  m.def("sample",
        [](const std::string& spec, Index n, std::uint64_t seed) {
          return Sample(DistributionFromJson(nlohmann::json::parse(spec)), n, seed).values();
        },
        py::arg("spec_json"), py::arg("n"), py::arg("seed"));
  m.def("monte_carlo_r",
        [](const Eigen::RowVectorXd& y, const std::string& spec, Index m1, Index m2,
           std::uint64_t seed) {
          return MonteCarloR(y, DistributionFromJson(nlohmann::json::parse(spec)),
                             MetricSpec::Euclidean(), m1, m2, seed)
              .value;
        },
        py::arg("y"), py::arg("spec_json"), py::arg("m1") = 2000, py::arg("m2") = 2000,
        py::arg("seed") = 0);
  m.def("run_experiment",
        [](const std::string& config, std::optional<std::string> output_dir) {
          const auto cfg = ExperimentConfigFromJson(nlohmann::json::parse(config));
          ResultTable table;
          {
            py::gil_scoped_release release;
            table = RunExperiment(cfg, output_dir);
          }
          return table.SummaryCsv();
        },
        py::arg("config_json"), py::arg("output_dir") = py::none(),
        "Runs an experiment and returns summary.csv text.");
}
