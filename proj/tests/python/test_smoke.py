# Copyright 2026 The corerank Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import corerank


def test_three_point_example():
    x = np.array([[0.0], [1.0], [4.0]])
    p = corerank.preferences_leave_two_out(corerank.pairwise_distances(x))
    np.testing.assert_array_equal(p, [[0, 1, 0], [0, 0, 0], [1, 1, 0]])
    np.testing.assert_array_equal(corerank.win_rates(p), [0.5, 1.0, 0.0])
    fit = corerank.fit_gd(p, ridge=0.01)
    assert fit["converged"]
    assert np.argmax(fit["theta"]) == 1


def test_two_item_closed_form():
    p = np.array([[0.0, 0.75], [0.25, 0.0]])
    half_log3 = 0.5 * math.log(3.0)
    np.testing.assert_allclose(corerank.fit_gd(p)["theta"], [-half_log3, half_log3], atol=1e-6)
    np.testing.assert_allclose(corerank.fit_spectral(p)["theta"], [-half_log3, half_log3],
                               atol=1e-6)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    upper = np.triu(rng.uniform(size=(8, 8)), 1)
    p = upper + np.tril(1.0 - upper.T, -1)
    np.fill_diagonal(p, 0.0)
    theta = rng.normal(size=8)
    g = corerank.gradient(p, theta)
    h = 1e-6
    fd = [(corerank.loss(p, theta + h * e) - corerank.loss(p, theta - h * e)) / (2 * h)
          for e in np.eye(8)]
    np.testing.assert_allclose(g, fd, rtol=1e-5, atol=1e-8)


def test_score_is_center_outward():
    x = corerank.sample({"kind": "normal", "dim": 3}, 200, 5)
    theta = corerank.score(x)
    assert abs(theta.sum()) < 1e-8
    assert corerank.spearman(theta, -np.linalg.norm(x, axis=1)) > 0.9
    r = corerank.stationarity_residuals(theta, corerank.preferences_leave_two_out(
        corerank.pairwise_distances(x)))
    assert np.abs(r).max() < 1e-6


def test_kernel_extension_interpolates():
    x = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [3.0, 1.0]])
    theta = np.array([0.3, 0.1, -0.2, -0.2])
    ext = corerank.kernel_extend(theta, x, x, bandwidth=1e-3)
    np.testing.assert_allclose(ext["theta"], theta, atol=1e-9)
    assert corerank.kernel_extend(theta, x, x)["bandwidth"] > 0


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        corerank.preferences_leave_two_out(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    with pytest.raises(corerank.ValidationError):
        corerank.score(np.zeros((4, 1)), estimator="magic")
    with pytest.raises(corerank.ValidationError):
        corerank.sample({"kind": "cauchy", "dim": 1}, 10, 0)


def test_oracle_spot_value():
    r = corerank.monte_carlo_r(np.zeros(1), {"kind": "normal_1d"}, 2000, 2000, 7)
    assert abs(r - 0.6476) < 0.01


def test_run_experiment(tmp_path):
    config = {"experiment": "table_rank_recovery", "grid": [[40, 5]], "replicates": 2,
              "m1": 100, "m2": 200, "distributions": [{"kind": "student_t", "dim": 1}],
              "methods": ["CORE-GD", "Neg-L2"]}
    rows = corerank.run_experiment(config, str(tmp_path))
    assert {r["method"] for r in rows} == {"CORE-GD", "Neg-L2"}
    assert all(r["replicates"] == 2 for r in rows)
    assert (tmp_path / "table_rank_recovery" / "summary.csv").exists()
    again = corerank.run_experiment(config)
    assert rows == again
