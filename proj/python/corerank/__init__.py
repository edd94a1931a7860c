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

"""Preference-based centrality scores.

Thin Python layer over the C++ core. Arrays go in and out as numpy arrays;
distribution specs and experiment configs are plain dicts.
"""

import csv
import io
import json

from ._corerank import (
    NumericalError,
    ValidationError,
    cross_distances,
    fit_gd,
    fit_spectral,
    gradient,
    kernel_extend,
    loss,
    mahalanobis_depth_scores,
    neg_l2_scores,
    pairwise_distances,
    pearson,
    preferences_leave_two_out,
    preferences_reference,
    spatial_depth_scores,
    spearman,
    stationarity_residuals,
    win_rates,
)
from . import _corerank

__all__ = [
    "NumericalError",
    "ValidationError",
    "cross_distances",
    "fit_gd",
    "fit_spectral",
    "gradient",
    "kernel_extend",
    "loss",
    "mahalanobis_depth_scores",
    "monte_carlo_r",
    "neg_l2_scores",
    "pairwise_distances",
    "pearson",
    "preferences_leave_two_out",
    "preferences_reference",
    "run_experiment",
    "sample",
    "score",
    "spatial_depth_scores",
    "spearman",
    "stationarity_residuals",
    "win_rates",
]


def score(x, estimator="gd", metric="euclidean", tie_policy="strict", ridge=0.0):
    """Leave-two-out scores for the rows of x; larger is more central."""
    p = preferences_leave_two_out(pairwise_distances(x, metric), tie_policy)
    if estimator == "gd":
        fit = fit_gd(p, ridge=ridge)
        if fit["diverged"]:
            raise NumericalError("divergence guard tripped; try a positive ridge")
        return fit["theta"]
    if estimator == "spectral":
        return fit_spectral(p)["theta"]
    if estimator == "winrate":
        return win_rates(p)
    raise ValidationError(f"unknown estimator '{estimator}' (gd, spectral, winrate)")


def sample(spec, n, seed):
    """Draws n points; spec is a dict such as {"kind": "student_t", "dim": 3}."""
    return _corerank.sample(json.dumps(spec), n, seed)


def monte_carlo_r(y, spec, m1=2000, m2=2000, seed=0):
    return _corerank.monte_carlo_r(y, json.dumps(spec), m1, m2, seed)


def run_experiment(config, output_dir=None):
    """Runs a simulation experiment and returns the summary rows as dicts."""
    text = _corerank.run_experiment(json.dumps(config), output_dir)
    rows = list(csv.DictReader(io.StringIO(text)))
    for row in rows:
        for key in ("n", "d", "replicates"):
            row[key] = int(row[key])
        for key in ("mean", "sd"):
            row[key] = float(row[key])
    return rows
