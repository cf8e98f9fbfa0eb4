"""Discrimination and calibration measures on (probability, label) pairs.

ECE and MCE use ten fixed reliability bins ``[0, .1), [.1, .2), ..., [.9, 1]``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from .errors import EmptyData, SingleClassData

N_RELIABILITY_BINS = 10


def _as_arrays(probs, labels) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(probs, dtype=float).ravel()
    z = np.asarray(labels, dtype=float).ravel()
    if p.shape[0] == 0:
        raise EmptyData("predictions")
    if p.shape != z.shape:
        raise ValueError(f"{p.shape[0]} predictions but {z.shape[0]} labels")
    return p, z


def accuracy(probs, labels, threshold: float = 0.5) -> float:
    """Fraction of predictions where ``p >= threshold`` agrees with the label."""
    p, z = _as_arrays(probs, labels)
    return float(np.mean((p >= threshold) == (z == 1)))


def auc(probs, labels) -> float:
    """Mann-Whitney AUC with midranks, so tied pairs count one half."""
    p, z = _as_arrays(probs, labels)
    pos = z == 1
    n_pos = int(pos.sum())
    n_neg = p.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassData("AUC input")
    ranks = rankdata(p)
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def rmse(probs, labels) -> float:
    p, z = _as_arrays(probs, labels)
    return float(math.sqrt(np.mean((p - z) ** 2)))


@dataclass(frozen=True)
class ReliabilityRow:
    bin_lo: float
    bin_hi: float
    count: int
    P_i: float
    o_i: float
    e_i: float


def reliability_bin(p: np.ndarray) -> np.ndarray:
    return np.minimum(np.floor(p * N_RELIABILITY_BINS).astype(np.int64), N_RELIABILITY_BINS - 1)


def ece_mce(probs, labels) -> tuple[float, float, list[ReliabilityRow]]:
    """Expected and maximum calibration error plus the non-empty reliability rows."""
    p, z = _as_arrays(probs, labels)
    idx = reliability_bin(p)
    n = p.shape[0]
    rows = []
    ece = 0.0
    mce = 0.0
    for i in range(N_RELIABILITY_BINS):
        mask = idx == i
        count = int(mask.sum())
        if count == 0:
            continue
        o = float(z[mask].mean())
        e = float(p[mask].mean())
        w = count / n
        gap = abs(o - e)
        ece += w * gap
        mce = max(mce, gap)
        rows.append(ReliabilityRow(i / N_RELIABILITY_BINS, (i + 1) / N_RELIABILITY_BINS, count, w, o, e))
    return ece, mce, rows


@dataclass(frozen=True)
class EvalReport:
    acc: float
    auc: float
    rmse: float
    ece: float
    mce: float
    n_test: int
    reliability: tuple[ReliabilityRow, ...]

    def measures(self) -> dict[str, float]:
        return {"AUC": self.auc, "Acc": self.acc, "RMSE": self.rmse, "MCE": self.mce, "ECE": self.ece}


def evaluate(probs, labels, threshold: float = 0.5) -> EvalReport:
    p, z = _as_arrays(probs, labels)
    ece, mce, rows = ece_mce(p, z)
    return EvalReport(
        acc=accuracy(p, z, threshold),
        auc=auc(p, z),
        rmse=rmse(p, z),
        ece=ece,
        mce=mce,
        n_test=p.shape[0],
        reliability=tuple(rows),
    )


RELIABILITY_COLUMNS = ("bin_lo", "bin_hi", "count", "P_i", "o_i", "e_i")


def write_reliability_csv(rows, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=RELIABILITY_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in asdict(row).items()})
