"""Base classifiers that produce the uncalibrated scores.

Logistic regression is plain batch gradient descent on L2-regularised mean
log-loss. Naive Bayes combines Laplace-smoothed categorical tables with
per-class Gaussians for continuous features.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, ClassVar

import numpy as np
from scipy.special import expit, log_expit, logsumexp

from .dataset import Dataset
from .errors import ArityMismatch, DivergenceDetected, EmptyData, SingleClassData

VARIANCE_FLOOR = 1e-6


def _check_two_classes(labels: np.ndarray, what: str) -> None:
    pos = int(np.sum(labels))
    if pos == 0 or pos == labels.shape[0]:
        raise SingleClassData(what)


@dataclass(frozen=True)
class LrHyper:
    learning_rate: float = 0.1
    epochs: int = 2000
    l2: float = 1e-4
    seed: int = 0  # weights start at zero; kept so configs round-trip unchanged


@dataclass(frozen=True, eq=False)
class LrModel:
    kind: ClassVar[str] = "lr"

    weights: np.ndarray
    bias: float
    hyper: LrHyper = LrHyper()

    def to_dict(self) -> dict[str, Any]:
        return {"weights": self.weights.tolist(), "bias": self.bias, "hyper": asdict(self.hyper)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> LrModel:
        return cls(np.asarray(data["weights"], dtype=float), float(data["bias"]), LrHyper(**data["hyper"]))


def lr_loss_and_grad(w: np.ndarray, b: float, x: np.ndarray, y: np.ndarray, l2: float) -> tuple[float, np.ndarray, float]:
    """Mean log-loss plus ``l2/2 * |w|^2``, with gradients in ``w`` and ``b``."""
    f = x @ w + b
    loss = -np.mean(y * log_expit(f) + (1.0 - y) * log_expit(-f)) + 0.5 * l2 * np.dot(w, w)
    r = expit(f) - y
    return float(loss), x.T @ r / y.shape[0] + l2 * w, float(r.mean())


def train_lr(x: np.ndarray, y: np.ndarray, hyper: LrHyper = LrHyper()) -> LrModel:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    y = np.asarray(y, dtype=float)
    if y.shape[0] == 0:
        raise EmptyData("LR training data")
    _check_two_classes(y, "LR training data")
    w = np.zeros(x.shape[1])
    b = 0.0
    prev = np.inf
    rising = 0
    for _ in range(hyper.epochs):
        loss, gw, gb = lr_loss_and_grad(w, b, x, y, hyper.l2)
        if not np.isfinite(loss):
            raise DivergenceDetected("LR loss became non-finite")
        rising = rising + 1 if loss > prev else 0
        if rising >= 10:
            raise DivergenceDetected(f"LR loss increased for 10 consecutive epochs (now {loss:.4g})")
        prev = loss
        w = w - hyper.learning_rate * gw
        b = b - hyper.learning_rate * gb
    return LrModel(w, float(b), hyper)


def predict_lr(model: LrModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.shape[1] != model.weights.shape[0]:
        raise ArityMismatch(model.weights.shape[0], x.shape[1])
    p = expit(x @ model.weights + model.bias)
    return p[0] if single else p


@dataclass(frozen=True, eq=False)
class NbModel:
    kind: ClassVar[str] = "nb"

    log_prior: np.ndarray  # (2,)
    cat_log_prob: tuple[np.ndarray, ...]  # per categorical feature, (2, levels)
    means: np.ndarray  # (2, p)
    variances: np.ndarray  # (2, p)

    @property
    def priors(self) -> np.ndarray:
        return np.exp(self.log_prior)

    def to_dict(self) -> dict[str, Any]:
        return {
            "log_prior": self.log_prior.tolist(),
            "cat_log_prob": [t.tolist() for t in self.cat_log_prob],
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> NbModel:
        return cls(
            np.asarray(data["log_prior"], dtype=float),
            tuple(np.asarray(t, dtype=float) for t in data["cat_log_prob"]),
            np.asarray(data["means"], dtype=float).reshape(2, -1),
            np.asarray(data["variances"], dtype=float).reshape(2, -1),
        )


def train_nb(data: Dataset) -> NbModel:
    y = data.labels
    _check_two_classes(y, "naive Bayes training data")
    counts = np.array([np.sum(y == 0), np.sum(y == 1)], dtype=float)
    log_prior = np.log(counts / counts.sum())
    tables = []
    for j, k in enumerate(data.cardinalities):
        col = data.categorical[:, j]
        table = np.empty((2, k))
        for c in (0, 1):
            hits = np.bincount(col[y == c], minlength=k)[:k].astype(float)
            table[c] = np.log((hits + 1.0) / (counts[c] + k))
        tables.append(table)
    p = data.continuous.shape[1]
    means = np.zeros((2, p))
    variances = np.ones((2, p))
    for c in (0, 1):
        xc = data.continuous[y == c]
        if p:
            means[c] = xc.mean(axis=0)
            variances[c] = np.maximum(xc.var(axis=0), VARIANCE_FLOOR)
    return NbModel(log_prior, tuple(tables), means, variances)


def nb_log_joint(model: NbModel, continuous: np.ndarray, categorical: np.ndarray) -> np.ndarray:
    """Unnormalised ``log P(z, x)`` for z = 0, 1; shape (n, 2)."""
    if continuous.shape[1] != model.means.shape[1]:
        raise ArityMismatch(model.means.shape[1], continuous.shape[1])
    if categorical.shape[1] != len(model.cat_log_prob):
        raise ArityMismatch(len(model.cat_log_prob), categorical.shape[1])
    out = np.tile(model.log_prior, (continuous.shape[0], 1))
    for c in (0, 1):
        var = model.variances[c]
        out[:, c] += np.sum(-0.5 * np.log(2 * np.pi * var) - (continuous - model.means[c]) ** 2 / (2 * var), axis=1)
    for j, table in enumerate(model.cat_log_prob):
        k = table.shape[1]
        codes = categorical[:, j]
        known = (codes >= 0) & (codes < k)
        # levels never seen in training carry no evidence either way
        for c in (0, 1):
            out[:, c] += np.where(known, table[c, np.clip(codes, 0, k - 1)], 0.0)
    return out


def predict_nb(model: NbModel, data: Dataset) -> np.ndarray:
    """Posterior ``P(z = 1 | x)`` per row."""
    joint = nb_log_joint(model, data.continuous, data.categorical)
    return np.exp(joint[:, 1] - logsumexp(joint, axis=1))
