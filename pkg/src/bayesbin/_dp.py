"""Compiled dynamic-programming kernels over range scores.

All arrays follow the :class:`bayesbin.scoring.RangeScorer` layout.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _range_score(lo, hi, cum_pos, log_fact, log_gap, cum_log_stay):
    n1 = cum_pos[hi] - cum_pos[lo - 1]
    n0 = hi - lo + 1 - n1
    return (
        log_gap[hi]
        + (cum_log_stay[hi - 1] - cum_log_stay[lo - 1])
        + log_fact[n0]
        + log_fact[n1]
        - log_fact[n0 + n1 + 1]
    )


@njit(cache=True)
def best_prefix_binnings(n, cum_pos, log_fact, log_gap, cum_log_stay):
    """Max-score binning of every prefix; returns (best log score, bin start)."""
    best = np.empty(n + 1)
    start = np.zeros(n + 1, dtype=np.int64)
    best[0] = 0.0
    for hi in range(1, n + 1):
        incumbent = -np.inf
        arg = hi
        for lo in range(hi, 0, -1):
            c = best[lo - 1] + _range_score(lo, hi, cum_pos, log_fact, log_gap, cum_log_stay)
            if c > incumbent:
                incumbent = c
                arg = lo
        best[hi] = incumbent
        start[hi] = arg
    return best, start


@njit(cache=True)
def total_mass_tables(n, cum_pos, log_fact, log_gap, cum_log_stay):
    """Log of summed scores over all binnings of each prefix and each suffix.

    fwd[u] covers positions 1..u (fwd[0] = 0); bwd[l] covers l..N (bwd[N+1] = 0).
    """
    fwd = np.empty(n + 1)
    bwd = np.empty(n + 2)
    terms = np.empty(n)
    fwd[0] = 0.0
    for hi in range(1, n + 1):
        m = -np.inf
        for lo in range(1, hi + 1):
            t = fwd[lo - 1] + _range_score(lo, hi, cum_pos, log_fact, log_gap, cum_log_stay)
            terms[lo - 1] = t
            if t > m:
                m = t
        acc = 0.0
        for i in range(hi):
            acc += math.exp(terms[i] - m)
        fwd[hi] = m + math.log(acc)
    bwd[n + 1] = 0.0
    for lo in range(n, 0, -1):
        m = -np.inf
        for hi in range(lo, n + 1):
            t = _range_score(lo, hi, cum_pos, log_fact, log_gap, cum_log_stay) + bwd[hi + 1]
            terms[hi - lo] = t
            if t > m:
                m = t
        acc = 0.0
        for i in range(n - lo + 1):
            acc += math.exp(terms[i] - m)
        bwd[lo] = m + math.log(acc)
    return fwd, bwd


@njit(cache=True)
def averaged_estimate(k, n, fwd, bwd, log_total, cum_pos, log_fact, log_gap, cum_log_stay):
    """Posterior-weighted smoothed rate over every bin (lo, hi) with lo <= k <= hi."""
    num = 0.0
    den = 0.0
    for lo in range(1, k + 1):
        head = fwd[lo - 1] - log_total
        for hi in range(k, n + 1):
            w = math.exp(head + _range_score(lo, hi, cum_pos, log_fact, log_gap, cum_log_stay) + bwd[hi + 1])
            n1 = cum_pos[hi] - cum_pos[lo - 1]
            num += w * (n1 + 1.0) / (hi - lo + 3.0)
            den += w
    return num / den
