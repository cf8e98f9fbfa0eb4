"""Bayesian binning calibration for binary classifiers.

Selection (SBB) and averaging (ABB) over all binnings of the sorted
calibration scores, with histogram, Platt and isotonic baselines and the
usual discrimination/calibration measures.
"""

from .baselines import IsotonicModel, PlattModel, fit_isotonic, fit_platt
from .base import CalibrationMap
from .binning import (
    AbbModel,
    CachedAbbModel,
    HistogramModel,
    SbbModel,
    abb_calibrate,
    fit_abb,
    fit_abb_cached,
    fit_histogram,
    fit_sbb,
    sbb_calibrate,
)
from .core import (
    Bin,
    Binning,
    BinningPriorConfig,
    ScoredInstance,
    SortedCalibrationSet,
    bin_edges,
    bin_estimate,
    calibration_set,
    sort_and_validate,
)
from .metrics import EvalReport, accuracy, auc, ece_mce, evaluate, rmse
from .scoring import log_bin_prior, log_bin_score, log_binning_score, log_marginal_likelihood_bin

__version__ = "0.1.0"

__all__ = [
    "AbbModel",
    "Bin",
    "Binning",
    "BinningPriorConfig",
    "CachedAbbModel",
    "CalibrationMap",
    "EvalReport",
    "HistogramModel",
    "IsotonicModel",
    "PlattModel",
    "SbbModel",
    "ScoredInstance",
    "SortedCalibrationSet",
    "abb_calibrate",
    "accuracy",
    "auc",
    "bin_edges",
    "bin_estimate",
    "calibration_set",
    "ece_mce",
    "evaluate",
    "fit_abb",
    "fit_abb_cached",
    "fit_histogram",
    "fit_isotonic",
    "fit_platt",
    "fit_sbb",
    "log_bin_prior",
    "log_bin_score",
    "log_binning_score",
    "log_marginal_likelihood_bin",
    "rmse",
    "sbb_calibrate",
    "sort_and_validate",
]
