"""Seeded generators for the simulated linear, XOR and circular configurations.

Features are uniform on ``[-1, 1]^2``. Each split (train, calib, test) draws
from its own Philox stream keyed by ``(seed, split)``, so any split can be
regenerated on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import InvalidSpec

CONFIGS = ("linear", "xor", "circular")
SPLITS = ("train", "calib", "test")
# positive disc covers half the square's area
CIRCLE_RADIUS_SQ = 2.0 / math.pi


@dataclass(frozen=True)
class SimSpec:
    config: str = "xor"
    n_train: int = 600
    n_calib: int = 600
    n_test: int = 600
    seed: int = 0
    noise: float = 0.0

    def __post_init__(self) -> None:
        if self.config not in CONFIGS:
            raise InvalidSpec(f"unknown configuration {self.config!r}; expected one of {CONFIGS}")
        for name in ("n_train", "n_calib", "n_test"):
            if getattr(self, name) < 1:
                raise InvalidSpec(f"{name} must be at least 1")
        if not 0.0 <= self.noise < 0.5:
            raise InvalidSpec(f"noise must be in [0, 0.5), got {self.noise}")


def true_labels(config: str, x: np.ndarray) -> np.ndarray:
    if config == "linear":
        z = x[:, 0] + x[:, 1] > 0
    elif config == "xor":
        z = x[:, 0] * x[:, 1] > 0
    elif config == "circular":
        z = x[:, 0] ** 2 + x[:, 1] ** 2 < CIRCLE_RADIUS_SQ
    else:
        raise InvalidSpec(f"unknown configuration {config!r}")
    return z.astype(np.int64)


def _stream(seed: int, split: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, split]))


def generate_split(spec: SimSpec, split: str) -> Dataset:
    idx = SPLITS.index(split)
    n = (spec.n_train, spec.n_calib, spec.n_test)[idx]
    rng = _stream(spec.seed, idx)
    x = rng.uniform(-1.0, 1.0, size=(n, 2))
    z = true_labels(spec.config, x)
    if spec.noise > 0:
        flips = rng.random(n) < spec.noise
        z = np.where(flips, 1 - z, z)
    return Dataset.from_continuous(x, z, ("x1", "x2"))


def generate(spec: SimSpec) -> tuple[Dataset, Dataset, Dataset]:
    """Return ``(train, calib, test)``."""
    return tuple(generate_split(spec, s) for s in SPLITS)  # type: ignore[return-value]
