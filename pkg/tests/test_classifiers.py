import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import expit

from bayesbin.classifiers import LrHyper, LrModel, lr_loss_and_grad, nb_log_joint, predict_lr, predict_nb, train_lr, train_nb
from bayesbin.dataset import Dataset
from bayesbin.errors import ArityMismatch, DivergenceDetected, SingleClassData
from bayesbin.metrics import auc


@settings(max_examples=50)
@given(st.integers(1, 5), st.integers(2, 30), st.integers(0, 2**31))
def test_gradient_matches_finite_differences(p, n, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, p))
    y = rng.integers(0, 2, n).astype(float)
    w = rng.normal(size=p)
    b = float(rng.normal())
    _, gw, gb = lr_loss_and_grad(w, b, x, y, 1e-2)
    h = 1e-6
    for j in range(p):
        e = np.zeros(p)
        e[j] = h
        fd = (lr_loss_and_grad(w + e, b, x, y, 1e-2)[0] - lr_loss_and_grad(w - e, b, x, y, 1e-2)[0]) / (2 * h)
        assert fd == pytest.approx(gw[j], rel=1e-5, abs=1e-8)
    fd = (lr_loss_and_grad(w, b + h, x, y, 1e-2)[0] - lr_loss_and_grad(w, b - h, x, y, 1e-2)[0]) / (2 * h)
    assert fd == pytest.approx(gb, rel=1e-5, abs=1e-8)


def test_zero_epochs_predict_half():
    x = np.array([[0.1], [0.9]])
    model = train_lr(x, np.array([0, 1]), LrHyper(epochs=0))
    assert np.all(predict_lr(model, x) == 0.5)


def test_threshold_data_separates():
    x = np.linspace(-1, 1, 40)[:, None]
    y = (x[:, 0] > 0.1).astype(int)
    model = train_lr(x, y, LrHyper(epochs=5000))
    assert auc(predict_lr(model, x), y) >= 0.99


def test_predict_by_hand():
    model = LrModel(np.array([1.0]), 0.0)
    assert predict_lr(model, np.array([0.2])) == pytest.approx(expit(0.2))


def test_predict_monotone_in_positive_weight():
    model = LrModel(np.array([2.0, -1.0]), 0.3)
    x = np.column_stack([np.linspace(-1, 1, 11), np.zeros(11)])
    assert np.all(np.diff(predict_lr(model, x)) > 0)


def test_predict_arity():
    with pytest.raises(ArityMismatch):
        predict_lr(LrModel(np.zeros(2), 0.0), np.zeros((3, 3)))


def test_lr_single_class():
    with pytest.raises(SingleClassData):
        train_lr(np.zeros((3, 1)), np.ones(3))


def test_lr_divergence():
    # lr * l2 > 2 makes the decay step overshoot and grow geometrically
    x = np.array([[1.0], [-1.0], [0.5], [-0.2]])
    with pytest.raises(DivergenceDetected):
        train_lr(x, np.array([1, 0, 0, 1]), LrHyper(learning_rate=3.0, l2=1.0, epochs=200))


def test_lr_deterministic():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(50, 2))
    y = (x[:, 0] > 0).astype(int)
    a, b = train_lr(x, y), train_lr(x, y)
    assert np.array_equal(a.weights, b.weights) and a.bias == b.bias


def _cat(codes, labels, cont=None):
    codes = np.asarray(codes, dtype=np.int64)
    n = codes.shape[0]
    cont = np.zeros((n, 0)) if cont is None else cont
    return Dataset(cont, codes.reshape(n, -1), np.asarray(labels))


def test_nb_hand_bayes_rule():
    data = _cat([1, 1, 0, 0], [1, 1, 0, 0])
    model = train_nb(data)
    # Laplace: P(f=1|z=1) = 3/4, P(f=1|z=0) = 1/4, priors 1/2
    expected = 0.5 * 0.75 / (0.5 * 0.75 + 0.5 * 0.25)
    assert predict_nb(model, _cat([1], [0]))[0] == pytest.approx(expected, abs=1e-12)


def test_nb_uninformative_feature_gives_prior():
    data = _cat([0, 1, 0, 1, 0, 1], [1, 1, 0, 0, 0, 0])
    model = train_nb(data)
    assert predict_nb(model, _cat([0], [0]))[0] == pytest.approx(1 / 3, abs=1e-12)


def test_nb_duplicated_features_push_to_extremes():
    base = [1, 1, 0, 0, 1, 0]
    labels = [1, 1, 0, 0, 0, 1]
    prev = None
    for k in range(1, 6):
        data = _cat(np.tile(np.array(base)[:, None], (1, k)), labels)
        p = predict_nb(train_nb(data), _cat(np.ones((1, k), dtype=int), [0]))[0]
        if prev is not None:
            assert p > prev
        prev = p


def test_nb_gaussian_by_hand():
    cont = np.array([[0.0], [2.0], [4.0], [6.0]])
    model = train_nb(_cat(np.zeros((4, 0)), [0, 0, 1, 1], cont))
    assert model.means[:, 0].tolist() == [1.0, 5.0]
    assert model.variances[:, 0].tolist() == [1.0, 1.0]
    x = 3.0
    like0, like1 = np.exp(-0.5 * (x - 1) ** 2), np.exp(-0.5 * (x - 5) ** 2)
    got = predict_nb(model, _cat(np.zeros((1, 0)), [0], np.array([[x]])))[0]
    assert got == pytest.approx(like1 / (like0 + like1), rel=1e-12)


def test_nb_variance_floor():
    cont = np.array([[1.0], [1.0], [2.0], [3.0]])
    model = train_nb(_cat(np.zeros((4, 0)), [0, 0, 1, 1], cont))
    assert model.variances[0, 0] == 1e-6


def test_nb_unseen_level_carries_no_evidence():
    model = train_nb(_cat([0, 0, 1, 1], [1, 1, 0, 0]))
    joint = nb_log_joint(model, np.zeros((1, 0)), np.array([[7]]))
    assert joint[0].tolist() == model.log_prior.tolist()


@settings(max_examples=50)
@given(st.integers(0, 2**31))
def test_nb_posteriors_complementary(seed):
    rng = np.random.default_rng(seed)
    n = 40
    y = rng.integers(0, 2, n)
    y[:2] = [0, 1]
    data = Dataset(rng.normal(size=(n, 2)), rng.integers(0, 3, (n, 2)), y)
    model = train_nb(data)
    joint = nb_log_joint(model, data.continuous, data.categorical)
    p1 = predict_nb(model, data)
    p0 = np.exp(joint[:, 0] - np.logaddexp(joint[:, 0], joint[:, 1]))
    assert np.all(np.abs(p0 + p1 - 1) <= 1e-12)
    assert model.priors.sum() == pytest.approx(1.0, abs=1e-15)


def test_nb_single_class():
    with pytest.raises(SingleClassData):
        train_nb(_cat([0, 1], [0, 0]))


def test_nb_arity():
    model = train_nb(_cat([0, 1, 0, 1], [0, 1, 0, 1]))
    with pytest.raises(ArityMismatch):
        predict_nb(model, _cat(np.zeros((1, 2), dtype=int), [0]))
