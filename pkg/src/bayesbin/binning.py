"""Binning calibrators: Bayes-optimal selection, Bayesian averaging, histogram.

``fit_sbb`` picks the single binning with the highest Bayesian score.
``fit_abb`` averages the per-bin smoothed estimates over *all* binnings,
weighted by score. Both reduce to O(N^2) dynamic programs because the log
score is a sum of independent per-bin terms. ``fit_abb_cached`` tabulates
the averaged map on R equal-width cells for O(1) recall.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import _dp
from .base import CalibrationMap
from .core import (
    Bin,
    Binning,
    BinningPriorConfig,
    SortedCalibrationSet,
    bin_estimate,
    calibration_set,
    position_edges,
)
from .errors import EmptyData, InvalidBinCount, InvalidSpec
from .scoring import RangeScorer

# tolerance on |log fwd[N] - log bwd[1]|
MASS_CONSISTENCY_TOL = 1e-9


def _kernel_args(scorer: RangeScorer) -> tuple:
    return scorer.cum_pos, scorer.log_fact, scorer.log_gap, scorer.cum_log_stay


class _StepModel(CalibrationMap):
    """Piecewise-constant map over ``[0, 1]`` given by inner edges and bin values."""

    edges: np.ndarray
    estimates: np.ndarray

    def _transform(self, x: np.ndarray) -> np.ndarray:
        return self.estimates[np.searchsorted(self.edges, x, side="right")]


@dataclass(frozen=True, eq=False)
class SbbModel(_StepModel):
    kind = "sbb"

    binning: Binning
    log_score: float
    cfg: BinningPriorConfig
    n: int
    edges: np.ndarray = field(init=False, repr=False)
    estimates: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", self.binning.inner_edges())
        object.__setattr__(self, "estimates", np.array([bin_estimate(b) for b in self.binning.bins]))

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "log_score": self.log_score,
            "config": self.cfg.to_dict(),
            "bins": [
                [b.lo_index, b.hi_index, b.n0, b.n1, b.left_edge, b.right_edge] for b in self.binning.bins
            ],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SbbModel:
        bins = tuple(Bin(int(a), int(b), int(c), int(d), float(e), float(f)) for a, b, c, d, e, f in data["bins"])
        return cls(Binning(bins), float(data["log_score"]), BinningPriorConfig(**data["config"]), int(data["n"]))


def fit_sbb(cset: SortedCalibrationSet, cfg: BinningPriorConfig | None = None) -> SbbModel:
    """Select the maximum-score binning by forward dynamic programming."""
    if cset.n < 1:
        raise EmptyData("calibration data")
    cfg = cfg or BinningPriorConfig()
    scorer = RangeScorer.build(cset, cfg)
    best, start = _dp.best_prefix_binnings(cset.n, *_kernel_args(scorer))
    uppers = []
    hi = cset.n
    while hi > 0:
        uppers.append(hi)
        hi = int(start[hi]) - 1
    binning = Binning.from_upper_indices(cset, uppers[::-1])
    return SbbModel(binning, float(best[cset.n]), cfg, cset.n)


def sbb_calibrate(model: SbbModel, x: float) -> float:
    return model.calibrate(x)


@dataclass(frozen=True, eq=False)
class AbbModel(CalibrationMap):
    """Exact Bayesian average over all binnings of the calibration set.

    ``forward[u]`` is the log total score of all binnings of positions
    ``1..u``; ``backward[l]`` the same for ``l..N``.
    """

    kind = "abb"

    cset: SortedCalibrationSet
    gap_priors: np.ndarray
    forward: np.ndarray
    backward: np.ndarray
    cfg: BinningPriorConfig = field(default_factory=BinningPriorConfig)
    scorer: RangeScorer = field(init=False, repr=False)
    left_edges: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "scorer", RangeScorer.from_arrays(self.cset.labels, self.gap_priors))
        object.__setattr__(self, "left_edges", position_edges(self.cset.scores))

    @property
    def n(self) -> int:
        return self.cset.n

    @property
    def log_total(self) -> float:
        return float(self.forward[self.n])

    def position_of(self, x: float) -> int:
        """1-based training position whose midpoint cell holds ``x``."""
        return int(np.searchsorted(self.left_edges, x, side="right"))

    def estimate_at_position(self, k: int) -> float:
        return float(
            _dp.averaged_estimate(k, self.n, self.forward, self.backward, self.log_total, *_kernel_args(self.scorer))
        )

    def _transform(self, x: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self.left_edges, x, side="right")
        uniq, inverse = np.unique(pos, return_inverse=True)
        values = np.array([self.estimate_at_position(int(k)) for k in uniq])
        return values[inverse]

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.cfg.to_dict(),
            "scores": self.cset.scores.tolist(),
            "labels": self.cset.labels.tolist(),
            "gap_priors": self.gap_priors.tolist(),
            "forward": self.forward.tolist(),
            "backward": self.backward.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AbbModel:
        cset = calibration_set(data["scores"], data["labels"])
        return cls(
            cset,
            np.asarray(data["gap_priors"], dtype=float),
            np.asarray(data["forward"], dtype=float),
            np.asarray(data["backward"], dtype=float),
            BinningPriorConfig(**data["config"]),
        )


def fit_abb(cset: SortedCalibrationSet, cfg: BinningPriorConfig | None = None) -> AbbModel:
    """Run the forward and backward sum recurrences over all binnings."""
    if cset.n < 1:
        raise EmptyData("calibration data")
    cfg = cfg or BinningPriorConfig()
    gap = cfg.gap_priors(cset.n)
    scorer = RangeScorer.from_arrays(cset.labels, gap)
    fwd, bwd = _dp.total_mass_tables(cset.n, *_kernel_args(scorer))
    gap_mismatch = abs(fwd[cset.n] - bwd[1])
    if not gap_mismatch <= MASS_CONSISTENCY_TOL:
        raise ArithmeticError(f"forward/backward total mass disagree by {gap_mismatch:.3g}")
    return AbbModel(cset, gap, fwd, bwd, cfg)


def abb_calibrate(model: AbbModel, x: float) -> float:
    return model.calibrate(x)


@dataclass(frozen=True, eq=False)
class CachedAbbModel(CalibrationMap):
    """Averaged calibration tabulated on ``R`` equal-width cells of ``[0, 1]``."""

    kind = "abb-cached"

    values: np.ndarray
    cfg: BinningPriorConfig = field(default_factory=BinningPriorConfig)

    def __post_init__(self) -> None:
        if self.values.shape[0] < 2:
            raise InvalidSpec(f"cache needs R >= 2 cells, got {self.values.shape[0]}")

    @property
    def R(self) -> int:
        return int(self.values.shape[0])

    def _transform(self, x: np.ndarray) -> np.ndarray:
        cell = np.minimum((x * self.R).astype(np.int64), self.R - 1)
        return self.values[cell]

    def to_dict(self) -> dict[str, Any]:
        return {"config": self.cfg.to_dict(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CachedAbbModel:
        return cls(np.asarray(data["values"], dtype=float), BinningPriorConfig(**data["config"]))


def cell_centers(R: int) -> np.ndarray:
    return (np.arange(R) + 0.5) / R


def fit_abb_cached(cset: SortedCalibrationSet, cfg: BinningPriorConfig | None = None, R: int = 100) -> CachedAbbModel:
    if R < 2:
        raise InvalidSpec(f"R must be at least 2, got {R}")
    model = fit_abb(cset, cfg)
    values = np.array([model.estimate_at_position(model.position_of(c)) for c in cell_centers(R)])
    return CachedAbbModel(values, model.cfg)


@dataclass(frozen=True, eq=False)
class HistogramModel(_StepModel):
    """Equal-frequency histogram binning with smoothed bin rates."""

    kind = "hist"

    edges: np.ndarray
    estimates: np.ndarray

    @property
    def k(self) -> int:
        return int(self.estimates.shape[0])

    def to_dict(self) -> dict[str, Any]:
        return {"edges": self.edges.tolist(), "estimates": self.estimates.tolist()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> HistogramModel:
        return cls(np.asarray(data["edges"], dtype=float), np.asarray(data["estimates"], dtype=float))


def fit_histogram(cset: SortedCalibrationSet, k: int = 10) -> HistogramModel:
    """Split the sorted set into ``k`` rank bins of near-equal size."""
    if not 1 <= k <= cset.n:
        raise InvalidBinCount(f"bin count must be in 1..{cset.n}, got {k}")
    sizes = np.full(k, cset.n // k)
    sizes[: cset.n % k] += 1
    uppers = np.cumsum(sizes)
    binning = Binning.from_upper_indices(cset, uppers.tolist())
    return HistogramModel(binning.inner_edges(), np.array([bin_estimate(b) for b in binning.bins]))


__all__ = [
    "AbbModel",
    "CachedAbbModel",
    "HistogramModel",
    "SbbModel",
    "abb_calibrate",
    "cell_centers",
    "fit_abb",
    "fit_abb_cached",
    "fit_histogram",
    "fit_sbb",
    "sbb_calibrate",
]
