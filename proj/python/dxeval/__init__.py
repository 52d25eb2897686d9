"""Evaluate and compare binary diagnostic classifiers.

Structured results come back from the core as JSON and are decoded here.
"""

import json

from . import _core
from ._core import (
    DxevalError,
    average_precision,
    compute_siri,
    confusion_at,
    generate_binormal,
    metrics_from,
    net_benefit,
    parse_grid,
    read_sample,
    render_tables,
    roc_auc,
    treat_all_net_benefit,
    write_demo,
)

__version__ = _core.__version__


def threshold_sweep(scores, labels, grid):
    return json.loads(_core.threshold_sweep_json(list(scores), list(labels), list(grid)))


def roc_curve(scores, labels):
    return json.loads(_core.roc_curve_json(list(scores), list(labels)))


def pr_curve(scores, labels):
    return json.loads(_core.pr_curve_json(list(scores), list(labels)))


def bootstrap_auc_ci(scores, labels, replicates=1000, seed=42, method="bca", workers=1):
    return json.loads(
        _core.bootstrap_auc_ci_json(list(scores), list(labels), replicates, seed, method, workers)
    )


def delong_interval(scores, labels):
    return json.loads(_core.delong_interval_json(list(scores), list(labels)))


def delong_compare(scores_a, scores_b, labels=None, labels_a=None, labels_b=None):
    """Paired when one label vector is shared, unpaired when each model has its own."""
    if labels is not None:
        return json.loads(_core.delong_paired_json(list(scores_a), list(scores_b), list(labels)))
    return json.loads(
        _core.delong_unpaired_json(list(scores_a), list(labels_a), list(scores_b), list(labels_b))
    )


def reliability(scores, labels, binning="equal", bins=10):
    return json.loads(_core.reliability_json(list(scores), list(labels), binning, bins))


def dca_curve(scores, labels, grid):
    return json.loads(_core.dca_json(list(scores), list(labels), list(grid)))


def fit_baseline(train_path, predictors=("pct_normal", "siri"), ridge=0.0):
    return json.loads(_core.fit_baseline_json(str(train_path), list(predictors), ridge))


def run_report(config_path):
    return json.loads(_core.run_report_json(str(config_path)))
