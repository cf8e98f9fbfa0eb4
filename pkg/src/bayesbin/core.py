"""Domain types shared by every calibrator.

Training data for calibration is a set of ``(score, label)`` pairs. All
binning methods work on the pairs sorted by score; a bin is a contiguous
1-based inclusive index range into that sorted sequence. Query scores are
mapped to bins through midpoint edges between neighbouring training scores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyData, IndexOutOfRange, InvalidSpec, NonBinaryLabel, ScoreOutOfRange


@dataclass(frozen=True)
class ScoredInstance:
    score: float
    label: int


@dataclass(frozen=True, eq=False)
class SortedCalibrationSet:
    """Scores sorted ascending (stable for ties) with their labels.

    Build one with :func:`sort_and_validate` or :func:`calibration_set`.
    """

    scores: np.ndarray
    labels: np.ndarray
    # cum_pos[i] = number of label-1 instances among positions 1..i
    cum_pos: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.scores.shape[0])

    def __len__(self) -> int:
        return self.n

    @property
    def instances(self) -> tuple[ScoredInstance, ...]:
        return tuple(ScoredInstance(float(s), int(z)) for s, z in zip(self.scores, self.labels))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SortedCalibrationSet):
            return NotImplemented
        return np.array_equal(self.scores, other.scores) and np.array_equal(self.labels, other.labels)

    def __hash__(self) -> int:
        return hash((self.scores.tobytes(), self.labels.tobytes()))

    def counts(self, lo: int, hi: int) -> tuple[int, int]:
        """Return ``(n0, n1)`` for positions ``lo..hi`` (1-based, inclusive)."""
        if not 1 <= lo <= hi <= self.n:
            raise IndexOutOfRange(f"range ({lo}, {hi}) not within 1..{self.n}")
        n1 = int(self.cum_pos[hi] - self.cum_pos[lo - 1])
        return hi - lo + 1 - n1, n1


def _as_float(v: object) -> float:
    try:
        return float(v)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        return math.nan


def calibration_set(scores: Sequence[float] | np.ndarray, labels: Sequence[int] | np.ndarray) -> SortedCalibrationSet:
    """Validate parallel score/label arrays and return them stable-sorted by score."""
    s = np.asarray(scores, dtype=float).ravel()
    raw_labels = np.asarray(labels).ravel()
    if s.shape[0] == 0:
        raise EmptyData("calibration data")
    if raw_labels.shape[0] != s.shape[0]:
        raise ValueError(f"{s.shape[0]} scores but {raw_labels.shape[0]} labels")
    bad = np.flatnonzero(~((s >= 0.0) & (s <= 1.0)))  # NaN fails both comparisons
    if bad.size:
        raise ScoreOutOfRange(int(bad[0]), float(s[bad[0]]))
    try:
        z = raw_labels.astype(float)
    except (TypeError, ValueError):
        z = np.array([_as_float(v) for v in raw_labels])
    bad = np.flatnonzero(~((z == 0.0) | (z == 1.0)))
    if bad.size:
        value = raw_labels[bad[0]]
        raise NonBinaryLabel(int(bad[0]), value.item() if isinstance(value, np.generic) else value)
    order = np.argsort(s, kind="stable")
    s = s[order]
    z = z[order].astype(np.int64)
    cum = np.zeros(s.shape[0] + 1, dtype=np.int64)
    np.cumsum(z, out=cum[1:])
    for a in (s, z, cum):
        a.setflags(write=False)
    return SortedCalibrationSet(s, z, cum)


def sort_and_validate(data: Iterable[ScoredInstance | tuple[float, int]] | SortedCalibrationSet) -> SortedCalibrationSet:
    """Stable-sort ``(score, label)`` pairs, rejecting empty input and invalid rows."""
    if isinstance(data, SortedCalibrationSet):
        return calibration_set(data.scores, data.labels)
    rows = list(data)
    if not rows:
        raise EmptyData("calibration data")
    scores = np.empty(len(rows))
    labels: list[object] = []
    for i, row in enumerate(rows):
        score, label = (row.score, row.label) if isinstance(row, ScoredInstance) else row
        try:
            scores[i] = float(score)
        except (TypeError, ValueError):
            raise ScoreOutOfRange(i, score) from None
        labels.append(label)
    return calibration_set(scores, np.array(labels, dtype=object))


@dataclass(frozen=True)
class Bin:
    lo_index: int
    hi_index: int
    n0: int
    n1: int
    left_edge: float = math.nan
    right_edge: float = math.nan

    @property
    def size(self) -> int:
        return self.n0 + self.n1


@dataclass(frozen=True)
class Binning:
    bins: tuple[Bin, ...]

    @property
    def B(self) -> int:
        return len(self.bins)

    @property
    def upper_indices(self) -> tuple[int, ...]:
        return tuple(b.hi_index for b in self.bins)

    def inner_edges(self) -> np.ndarray:
        return np.array([b.left_edge for b in self.bins[1:]])

    def locate(self, x: float) -> int:
        """0-based index of the bin whose ``[left, right)`` interval holds ``x``."""
        return int(np.searchsorted(self.inner_edges(), x, side="right"))

    @classmethod
    def from_upper_indices(cls, cset: SortedCalibrationSet, uppers: Sequence[int]) -> Binning:
        """Build a binning whose bins end at the given 1-based indices (last must be N)."""
        uppers = [int(u) for u in uppers]
        if not uppers or uppers[-1] != cset.n or any(b <= a for a, b in zip(uppers, uppers[1:])) or uppers[0] < 1:
            raise IndexOutOfRange(f"invalid bin upper indices {uppers} for N={cset.n}")
        bins = []
        lo = 1
        for hi in uppers:
            n0, n1 = cset.counts(lo, hi)
            bins.append(Bin(lo, hi, n0, n1))
            lo = hi + 1
        return bin_edges(cset, cls(tuple(bins)))


def position_edges(scores: np.ndarray) -> np.ndarray:
    """Left edges of every single-position cell: 0, then midpoints of neighbours."""
    left = np.empty(scores.shape[0])
    left[0] = 0.0
    left[1:] = 0.5 * (scores[:-1] + scores[1:])
    return left


def bin_edges(cset: SortedCalibrationSet, binning: Binning) -> Binning:
    """Populate midpoint query edges; outer bins extend to 0 and 1."""
    s = cset.scores
    out = []
    last = len(binning.bins) - 1
    for j, b in enumerate(binning.bins):
        left = 0.0 if j == 0 else 0.5 * (s[b.lo_index - 2] + s[b.lo_index - 1])
        right = 1.0 if j == last else 0.5 * (s[b.hi_index - 1] + s[b.hi_index])
        out.append(replace(b, left_edge=float(left), right_edge=float(right)))
    return Binning(tuple(out))


def smoothed_rate(n0: int | np.ndarray, n1: int | np.ndarray) -> float | np.ndarray:
    """Beta(1, 1) posterior mean of the positive rate."""
    return (n1 + 1.0) / (n0 + n1 + 2.0)


def bin_estimate(b: Bin) -> float:
    return float(smoothed_rate(b.n0, b.n1))


@dataclass(frozen=True)
class BinningPriorConfig:
    """Structure-prior settings.

    The per-gap boundary probability is ``min(cap, lam / (N - 1))`` with
    ``lam`` defaulting to ``sqrt(N)``. ``gamma`` overrides it with a fixed
    value. The final position always closes a bin.
    """

    lam: float | None = None
    cap: float = 0.99
    gamma: float | None = None

    def __post_init__(self) -> None:
        if self.lam is not None and not self.lam > 0:
            raise InvalidSpec(f"lambda must be positive, got {self.lam}")
        if not 0 < self.cap < 1:
            raise InvalidSpec(f"cap must be in (0, 1), got {self.cap}")
        if self.gamma is not None and not 0 < self.gamma < 1:
            raise InvalidSpec(f"gamma must be in (0, 1), got {self.gamma}")

    def expected_boundaries(self, n: int) -> float:
        return math.sqrt(n) if self.lam is None else float(self.lam)

    def gap_probability(self, n: int) -> float:
        if self.gamma is not None:
            return float(self.gamma)
        if n <= 1:
            return self.cap
        return min(self.cap, self.expected_boundaries(n) / (n - 1))

    def gap_priors(self, n: int) -> np.ndarray:
        """Boundary probabilities for positions 1..N; entry N is 1."""
        g = np.full(n, self.gap_probability(n))
        g[-1] = 1.0
        return g

    def to_dict(self) -> dict:
        return {"lam": self.lam, "cap": self.cap, "gamma": self.gamma}
