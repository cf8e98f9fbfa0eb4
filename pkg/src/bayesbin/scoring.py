"""Bayesian score of a binning, in natural-log space.

A binning's score is the product over its bins of a structure-prior factor
and a Beta(1, 1)-Binomial marginal likelihood. Both factors depend only on
the bin's own index range, so the log score is a sum of per-bin terms.
Log scores are plain floats; ``-inf`` stands for probability zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Binning, BinningPriorConfig, SortedCalibrationSet
from .errors import IndexOutOfRange


def log_marginal_likelihood_bin(n0: int, n1: int) -> float:
    """``ln(n0! n1! / (n0 + n1 + 1)!)``."""
    if n0 < 0 or n1 < 0:
        raise ValueError(f"counts must be non-negative, got ({n0}, {n1})")
    return math.lgamma(n0 + 1) + math.lgamma(n1 + 1) - math.lgamma(n0 + n1 + 2)


def _log(p: float) -> float:
    return math.log(p) if p > 0 else -math.inf


def log_bin_prior(lo: int, hi: int, cfg: BinningPriorConfig, n: int) -> float:
    """Log prior that positions ``lo..hi`` form exactly one bin."""
    if not 1 <= lo <= hi <= n:
        raise IndexOutOfRange(f"range ({lo}, {hi}) not within 1..{n}")
    gamma = cfg.gap_priors(n)
    out = _log(gamma[hi - 1])
    for k in range(lo, hi):
        out += _log(1.0 - gamma[k - 1])
    return out


def log_bin_score(lo: int, hi: int, cset: SortedCalibrationSet, cfg: BinningPriorConfig) -> float:
    n0, n1 = cset.counts(lo, hi)
    return log_bin_prior(lo, hi, cfg, cset.n) + log_marginal_likelihood_bin(n0, n1)


def log_binning_score(binning: Binning, cset: SortedCalibrationSet, cfg: BinningPriorConfig) -> float:
    return math.fsum(log_bin_score(b.lo_index, b.hi_index, cset, cfg) for b in binning.bins)


@dataclass(frozen=True)
class RangeScorer:
    """Precomputed tables giving the score of any range ``lo..hi`` in O(1).

    Arrays are indexed so that 1-based positions can be used directly.
    """

    n: int
    cum_pos: np.ndarray  # cum_pos[i]: positives among 1..i
    log_fact: np.ndarray  # log_fact[i] = ln(i!)
    log_gap: np.ndarray  # log_gap[k] = ln Prior(k), k = 1..N; log_gap[N] = 0
    cum_log_stay: np.ndarray  # cum_log_stay[k] = sum_{j<=k} ln(1 - Prior(j)), k = 0..N-1

    @classmethod
    def build(cls, cset: SortedCalibrationSet, cfg: BinningPriorConfig) -> RangeScorer:
        return cls.from_arrays(cset.labels, cfg.gap_priors(cset.n))

    @classmethod
    def from_arrays(cls, labels: np.ndarray, gap_priors: np.ndarray) -> RangeScorer:
        n = int(labels.shape[0])
        cum = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(labels, out=cum[1:])
        log_fact = np.array([math.lgamma(i + 1) for i in range(n + 2)])
        g = np.asarray(gap_priors, dtype=float)
        with np.errstate(divide="ignore"):
            log_gap = np.concatenate(([0.0], np.log(g)))
            stay = np.log1p(-g[:-1])
        cum_stay = np.zeros(n)
        np.cumsum(stay, out=cum_stay[1:])
        return cls(n, cum, log_fact, log_gap, cum_stay)

    def score(self, lo: int, hi: int) -> float:
        n1 = self.cum_pos[hi] - self.cum_pos[lo - 1]
        n0 = hi - lo + 1 - n1
        return float(
            self.log_gap[hi]
            + (self.cum_log_stay[hi - 1] - self.cum_log_stay[lo - 1])
            + self.log_fact[n0]
            + self.log_fact[n1]
            - self.log_fact[n0 + n1 + 1]
        )
