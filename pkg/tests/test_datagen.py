import numpy as np
import pytest

from bayesbin.datagen import CONFIGS, SimSpec, generate, true_labels
from bayesbin.errors import InvalidSpec
from bayesbin.harness.pipeline import train_classifier
from bayesbin.metrics import auc


@pytest.mark.parametrize(
    "config,point,label",
    [
        ("xor", (0.5, 0.5), 1),
        ("xor", (-0.5, 0.5), 0),
        ("circular", (0.0, 0.0), 1),
        ("circular", (1.0, 1.0), 0),
        ("linear", (0.3, -0.1), 1),
        ("linear", (-0.3, 0.1), 0),
    ],
)
def test_label_rules(config, point, label):
    assert true_labels(config, np.array([point]))[0] == label


@pytest.mark.parametrize("config", CONFIGS)
def test_regeneration_is_byte_identical(config):
    a = generate(SimSpec(config, seed=42))
    b = generate(SimSpec(config, seed=42))
    for x, y in zip(a, b):
        assert x.continuous.tobytes() == y.continuous.tobytes()
        assert x.labels.tobytes() == y.labels.tobytes()


def test_seeds_and_splits_differ():
    tr, ca, te = generate(SimSpec(seed=1))
    other, _, _ = generate(SimSpec(seed=2))
    assert not np.array_equal(tr.continuous, ca.continuous)
    assert not np.array_equal(tr.continuous, other.continuous)


def test_splits_are_disjoint():
    tr, ca, te = generate(SimSpec(seed=5))
    rows = [tuple(r) for d in (tr, ca, te) for r in d.continuous]
    assert len(set(rows)) == len(rows)


def test_split_sizes():
    tr, ca, te = generate(SimSpec(n_train=10, n_calib=20, n_test=30))
    assert (len(tr), len(ca), len(te)) == (10, 20, 30)
    assert np.all(np.abs(tr.continuous) <= 1)


@pytest.mark.parametrize("config", CONFIGS)
def test_class_balance(config):
    for seed in range(10):
        for d in generate(SimSpec(config, seed=seed)):
            assert 0.44 <= d.labels.mean() <= 0.56


@pytest.mark.parametrize("config", ["xor", "circular"])
def test_linear_model_cannot_separate(config):
    for seed in range(10):
        tr, _, te = generate(SimSpec(config, seed=seed))
        clf = train_classifier("lr", tr)
        assert 0.42 <= auc(clf.predict(te), te.labels) <= 0.58


def test_noise_flips_labels():
    clean = generate(SimSpec("linear", seed=3))[0]
    noisy = generate(SimSpec("linear", seed=3, noise=0.2))[0]
    assert np.array_equal(clean.continuous, noisy.continuous)
    frac = np.mean(clean.labels != noisy.labels)
    assert 0.12 <= frac <= 0.28


@pytest.mark.parametrize(
    "kw", [{"config": "spiral"}, {"n_train": 0}, {"noise": 0.5}, {"noise": -0.1}]
)
def test_invalid_spec(kw):
    with pytest.raises(InvalidSpec):
        SimSpec(**kw)
