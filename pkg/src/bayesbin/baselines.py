"""Non-binning baseline calibrators: Platt sigmoid scaling and isotonic (PAV) fits."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.special import expit, log_expit

from .base import CalibrationMap
from .core import SortedCalibrationSet
from .errors import EmptyData, NonConvergenceWarning, SingleClassData


@dataclass(frozen=True, eq=False)
class PlattModel(CalibrationMap):
    """``sigmoid(a * score + b)``."""

    kind = "platt"

    a: float
    b: float
    converged: bool = True
    grad_norm: float = 0.0

    def _transform(self, x: np.ndarray) -> np.ndarray:
        return expit(self.a * x + self.b)

    def to_dict(self) -> dict[str, Any]:
        return {"a": self.a, "b": self.b, "converged": self.converged, "grad_norm": self.grad_norm}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> PlattModel:
        return cls(float(data["a"]), float(data["b"]), bool(data["converged"]), float(data["grad_norm"]))


def platt_targets(labels: np.ndarray, smooth: bool = True) -> np.ndarray:
    """Platt's out-of-sample target values; raw labels when ``smooth`` is off."""
    labels = np.asarray(labels)
    if not smooth:
        return labels.astype(float)
    n_pos = int(labels.sum())
    n_neg = labels.shape[0] - n_pos
    return np.where(labels == 1, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))


def platt_nll(a: float, b: float, s: np.ndarray, t: np.ndarray) -> float:
    f = a * s + b
    return float(-np.sum(t * log_expit(f) + (1.0 - t) * log_expit(-f)))


def fit_platt(
    cset: SortedCalibrationSet,
    smooth_targets: bool = True,
    max_iter: int = 200,
    tol: float = 1e-10,
) -> PlattModel:
    """Maximum-likelihood sigmoid fit by damped Newton iterations.

    Stops when the gradient norm drops to ``tol``. If ``max_iter`` is hit first
    a :class:`NonConvergenceWarning` is issued and the last iterate returned.
    """
    s = cset.scores
    z = cset.labels
    if z.sum() == 0 or z.sum() == z.shape[0]:
        raise SingleClassData("Platt calibration data")
    t = platt_targets(z, smooth_targets)
    a, b = 0.0, math.log((t.sum() + 1e-12) / (t.shape[0] - t.sum() + 1e-12))
    loss = platt_nll(a, b, s, t)
    gnorm = math.inf
    for _ in range(max_iter):
        p = expit(a * s + b)
        r = p - t
        g = np.array([np.dot(r, s), r.sum()])
        gnorm = float(np.hypot(*g))
        if gnorm <= tol:
            break
        w = p * (1.0 - p)
        h = np.array([[np.dot(w, s * s), np.dot(w, s)], [np.dot(w, s), w.sum()]])
        h[0, 0] += 1e-12
        h[1, 1] += 1e-12
        step = np.linalg.solve(h, g)
        scale = 1.0
        while scale > 1e-10:
            na, nb = a - scale * step[0], b - scale * step[1]
            new_loss = platt_nll(na, nb, s, t)
            if new_loss <= loss:
                break
            scale *= 0.5
        else:
            # no decrease possible in floating point: we are at the optimum
            break
        a, b, loss = na, nb, new_loss
    else:
        p = expit(a * s + b)
        r = p - t
        gnorm = float(np.hypot(np.dot(r, s), r.sum()))
    converged = gnorm <= tol
    if not converged and gnorm > 1e-6:
        warnings.warn(f"Platt fit stopped with gradient norm {gnorm:.3g}", NonConvergenceWarning, stacklevel=2)
    return PlattModel(float(a), float(b), converged, gnorm)


@dataclass(frozen=True, eq=False)
class IsotonicModel(CalibrationMap):
    """Non-decreasing step function: ``values[j]`` applies from ``breakpoints[j]`` on."""

    kind = "isotonic"

    breakpoints: np.ndarray
    values: np.ndarray

    def _transform(self, x: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        return self.values[np.clip(idx, 0, self.values.shape[0] - 1)]

    def to_dict(self) -> dict[str, Any]:
        return {"breakpoints": self.breakpoints.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> IsotonicModel:
        return cls(np.asarray(data["breakpoints"], dtype=float), np.asarray(data["values"], dtype=float))


def pav(y: np.ndarray, w: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pool adjacent violators on an ordered sequence.

    Returns ``(block_start, block_mean, fitted)`` where ``block_start`` holds
    the index of each block's first element and ``fitted`` the per-element fit.
    """
    y = np.asarray(y, dtype=float)
    w = np.ones_like(y) if w is None else np.asarray(w, dtype=float)
    sums: list[float] = []
    weights: list[float] = []
    starts: list[int] = []
    for i in range(y.shape[0]):
        cur_s, cur_w, cur_start = y[i] * w[i], w[i], i
        while sums and sums[-1] / weights[-1] >= cur_s / cur_w:
            cur_s += sums.pop()
            cur_w += weights.pop()
            cur_start = starts.pop()
        sums.append(cur_s)
        weights.append(cur_w)
        starts.append(cur_start)
    means = np.array(sums) / np.array(weights)
    start_arr = np.array(starts, dtype=np.int64)
    lengths = np.diff(np.append(start_arr, y.shape[0]))
    return start_arr, means, np.repeat(means, lengths)


def fit_isotonic(cset: SortedCalibrationSet) -> IsotonicModel:
    """Least-squares monotone fit of labels on scores (tied scores pooled first)."""
    if cset.n < 1:
        raise EmptyData("calibration data")
    uniq, first, counts = np.unique(cset.scores, return_index=True, return_counts=True)
    pos = np.add.reduceat(cset.labels.astype(float), first)
    starts, means, _ = pav(pos / counts, counts.astype(float))
    return IsotonicModel(uniq[starts], means)
