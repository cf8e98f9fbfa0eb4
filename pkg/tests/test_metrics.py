import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bayesbin import accuracy, auc, ece_mce, evaluate, rmse
from bayesbin.errors import EmptyData, SingleClassData
from bayesbin.metrics import write_reliability_csv

preds = st.integers(1, 60).flatmap(
    lambda n: st.tuples(
        st.lists(st.floats(0, 1), min_size=n, max_size=n),
        st.lists(st.integers(0, 1), min_size=n, max_size=n),
    )
)


def test_accuracy_examples():
    assert accuracy([0.9, 0.1], [1, 0]) == 1.0
    assert accuracy([0.9, 0.1], [0, 1]) == 0.0
    assert accuracy([0.5, 0.4, 0.6], [1, 0, 0]) == pytest.approx(2 / 3)


def test_auc_examples():
    assert auc([0.1, 0.9], [0, 1]) == 1.0
    assert auc([0.3] * 6, [0, 1, 0, 1, 1, 0]) == 0.5
    assert auc([0.2, 0.8], [1, 0]) == 0.0


def test_auc_counts_ties_half():
    # pairs: (0.4+,0.4-) tie, (0.4+,0.1-) win, (0.9+,0.4-) win, (0.9+,0.1-) win
    assert auc([0.1, 0.4, 0.4, 0.9], [0, 0, 1, 1]) == pytest.approx(3.5 / 4)


def test_auc_single_class():
    with pytest.raises(SingleClassData):
        auc([0.1, 0.2], [1, 1])


def test_rmse_examples():
    assert rmse([1, 0], [1, 0]) == 0.0
    assert rmse([0.5], [1]) == 0.5
    assert rmse([0.8, 0.4], [1, 0]) == pytest.approx(math.sqrt(0.1), abs=1e-15)


@pytest.mark.parametrize("fn", [accuracy, rmse, auc, ece_mce, evaluate])
def test_empty_rejected(fn):
    with pytest.raises(EmptyData):
        fn([], [])


def test_ece_fixture():
    ece, mce, rows = ece_mce([0.25, 0.25, 0.85, 0.85], [0, 1, 1, 1])
    assert ece == pytest.approx(0.2, abs=1e-12)
    assert mce == pytest.approx(0.25, abs=1e-12)
    assert [r.bin_lo for r in rows] == [0.2, 0.8]


def test_ece_single_prediction():
    ece, mce, _ = ece_mce([0.95], [1])
    assert ece == pytest.approx(0.05, abs=1e-12) and mce == pytest.approx(0.05, abs=1e-12)


def test_ece_zero_when_bin_means_match():
    ece, mce, _ = ece_mce([0.05] * 20, [0] * 19 + [1])
    assert ece == pytest.approx(0.0, abs=1e-15) and mce == pytest.approx(0.0, abs=1e-15)


def test_reliability_bin_boundaries():
    _, _, rows = ece_mce([0.0, 0.1, 0.9, 1.0], [0, 0, 1, 1])
    assert [(r.bin_lo, r.count) for r in rows] == [(0.0, 1), (0.1, 1), (0.9, 2)]


@settings(max_examples=200)
@given(preds)
def test_ece_not_above_mce(case):
    p, z = case
    ece, mce, rows = ece_mce(p, z)
    assert ece <= mce + 1e-12
    assert math.fsum(r.P_i for r in rows) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100)
@given(preds, st.randoms(use_true_random=False))
def test_permutation_invariance(case, rnd):
    p, z = case
    if len(set(z)) < 2:
        z = [0, 1] + z[2:] if len(z) >= 2 else z
    if len(set(z)) < 2:
        return
    order = list(range(len(p)))
    rnd.shuffle(order)
    a = evaluate(p, z).measures()
    b = evaluate([p[i] for i in order], [z[i] for i in order]).measures()
    for k in a:
        assert a[k] == pytest.approx(b[k], abs=1e-12)


@settings(max_examples=100)
@given(preds)
def test_auc_invariant_under_increasing_transform(case):
    p, z = case
    if len(set(z)) < 2:
        return
    q = np.asarray(p) ** 3 * 0.5 + 0.1
    if len(np.unique(q)) != len(np.unique(p)):
        return
    assert auc(q, z) == auc(p, z)


@settings(max_examples=100)
@given(preds)
def test_measures_within_unit_interval(case):
    p, z = case
    if len(set(z)) < 2:
        return
    for v in evaluate(p, z).measures().values():
        assert 0.0 <= v <= 1.0


def test_reliability_csv(tmp_path):
    report = evaluate([0.25, 0.25, 0.85, 0.85], [0, 1, 1, 1])
    out = tmp_path / "rel.csv"
    write_reliability_csv(report.reliability, out)
    rows = list(csv.DictReader(out.open()))
    assert [r["count"] for r in rows] == ["2", "2"]
    assert float(rows[0]["o_i"]) == 0.5
