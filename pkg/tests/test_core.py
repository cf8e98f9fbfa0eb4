import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bayesbin import Bin, Binning, BinningPriorConfig, bin_edges, bin_estimate, calibration_set, sort_and_validate
from bayesbin.core import ScoredInstance
from bayesbin.errors import EmptyData, IndexOutOfRange, InvalidSpec, NonBinaryLabel, ScoreOutOfRange

pairs = st.lists(
    st.tuples(st.floats(0, 1, allow_nan=False), st.integers(0, 1)),
    min_size=1,
    max_size=40,
)


def test_sorts_ascending():
    s = sort_and_validate([(0.7, 1), (0.2, 0)])
    assert s.instances == (ScoredInstance(0.2, 0), ScoredInstance(0.7, 1))


def test_singleton():
    s = sort_and_validate([(0.5, 0)])
    assert s.n == 1


def test_ties_keep_input_order():
    s = sort_and_validate([(0.3, 0), (0.3, 1), (0.3, 0)])
    assert s.labels.tolist() == [0, 1, 0]


def test_accepts_scored_instances():
    s = sort_and_validate([ScoredInstance(0.9, 1), ScoredInstance(0.1, 0)])
    assert s.scores.tolist() == [0.1, 0.9]


def test_empty_rejected():
    with pytest.raises(EmptyData):
        sort_and_validate([])


@pytest.mark.parametrize("bad", [-0.01, 1.5, math.nan, math.inf])
def test_score_out_of_range_reports_index(bad):
    with pytest.raises(ScoreOutOfRange) as err:
        sort_and_validate([(0.5, 0), (bad, 1)])
    assert err.value.index == 1


@pytest.mark.parametrize("bad", [2, -1, 0.5, "yes"])
def test_non_binary_label(bad):
    with pytest.raises(NonBinaryLabel) as err:
        sort_and_validate([(0.5, 0), (0.6, 1), (0.1, bad)])
    assert err.value.index == 2


@given(pairs)
def test_idempotent(data):
    once = sort_and_validate(data)
    assert sort_and_validate(once) == once
    assert sort_and_validate(once.instances) == once


@given(pairs)
def test_sorted_and_counts_consistent(data):
    s = sort_and_validate(data)
    assert np.all(np.diff(s.scores) >= 0)
    n0, n1 = s.counts(1, s.n)
    assert n1 == sum(z for _, z in data) and n0 + n1 == s.n


def test_counts_range_checked():
    s = calibration_set([0.1, 0.2], [0, 1])
    with pytest.raises(IndexOutOfRange):
        s.counts(0, 2)
    with pytest.raises(IndexOutOfRange):
        s.counts(2, 3)


def test_edges_two_singletons():
    s = calibration_set([0.2, 0.6], [0, 1])
    b = Binning.from_upper_indices(s, [1, 2])
    assert [(x.left_edge, x.right_edge) for x in b.bins] == [(0.0, 0.4), (0.4, 1.0)]


def test_edges_single_bin():
    s = calibration_set([0.3, 0.5, 0.9], [0, 1, 1])
    b = Binning.from_upper_indices(s, [3])
    assert (b.bins[0].left_edge, b.bins[0].right_edge) == (0.0, 1.0)


def test_edges_uneven_split():
    s = calibration_set([0.2, 0.4, 0.8], [0, 0, 1])
    b = bin_edges(s, Binning((Bin(1, 2, 2, 0), Bin(3, 3, 0, 1))))
    assert b.bins[0].right_edge == pytest.approx(0.6, abs=1e-15)
    assert b.bins[1].left_edge == b.bins[0].right_edge
    assert b.bins[1].right_edge == 1.0


def test_locate_half_open():
    s = calibration_set([0.2, 0.6], [0, 1])
    b = Binning.from_upper_indices(s, [1, 2])
    assert b.locate(0.4) == 1
    assert b.locate(np.nextafter(0.4, 0)) == 0
    assert b.locate(1.0) == 1 and b.locate(0.0) == 0


@pytest.mark.parametrize("uppers", [[], [1], [2, 1, 3], [0, 3], [1, 4]])
def test_invalid_uppers(uppers):
    s = calibration_set([0.1, 0.2, 0.3], [0, 1, 0])
    with pytest.raises(IndexOutOfRange):
        Binning.from_upper_indices(s, uppers)


@settings(max_examples=60)
@given(pairs, st.data())
def test_edges_tile_unit_interval(data, draw):
    s = sort_and_validate(data)
    cuts = draw.draw(st.sets(st.integers(1, max(1, s.n - 1)), max_size=s.n - 1)) if s.n > 1 else set()
    b = Binning.from_upper_indices(s, sorted(cuts | {s.n}))
    assert b.bins[0].left_edge == 0.0 and b.bins[-1].right_edge == 1.0
    for a, c in zip(b.bins, b.bins[1:]):
        assert a.right_edge == c.left_edge
        assert a.hi_index + 1 == c.lo_index
    for x in draw.draw(st.lists(st.floats(0, 1), min_size=1, max_size=10)):
        j = b.locate(x)
        hit = b.bins[j]
        assert hit.left_edge <= x
        assert x < hit.right_edge or j == b.B - 1


@pytest.mark.parametrize("n0,n1,expected", [(0, 0, 0.5), (1, 1, 0.5), (0, 3, 0.8)])
def test_bin_estimate(n0, n1, expected):
    assert bin_estimate(Bin(1, max(1, n0 + n1), n0, n1)) == pytest.approx(expected, abs=1e-15)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_bin_estimate_strictly_inside(n0, n1):
    p = bin_estimate(Bin(1, max(1, n0 + n1), n0, n1))
    assert 0 < p < 1


def test_prior_defaults():
    cfg = BinningPriorConfig()
    assert cfg.gap_probability(101) == pytest.approx(math.sqrt(101) / 100)
    assert cfg.gap_probability(2) == 0.99
    g = cfg.gap_priors(5)
    assert g[-1] == 1.0 and np.all(g[:-1] == g[0])


def test_prior_overrides():
    assert BinningPriorConfig(lam=3).gap_probability(31) == pytest.approx(0.1)
    assert BinningPriorConfig(gamma=0.25).gap_probability(600) == 0.25


@pytest.mark.parametrize("kw", [{"lam": 0}, {"cap": 1.0}, {"gamma": 0.0}, {"gamma": 1.0}])
def test_prior_validation(kw):
    with pytest.raises(InvalidSpec):
        BinningPriorConfig(**kw)
