"""Fitting classifiers and calibrators from harness-level descriptions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..base import CalibrationMap
from ..baselines import fit_isotonic, fit_platt
from ..binning import fit_abb, fit_abb_cached, fit_histogram, fit_sbb
from ..classifiers import LrHyper, LrModel, NbModel, predict_lr, predict_nb, train_lr, train_nb
from ..core import BinningPriorConfig, SortedCalibrationSet
from ..dataset import Dataset
from ..errors import ArityMismatch, InvalidSpec

CLASSIFIERS = {"lr": "LR", "nb": "NB"}
CALIBRATORS = {"platt": "Platt", "hist": "Hist", "isotonic": "IsoReg", "sbb": "SBB", "abb": "ABB"}


def _encode(data: Dataset, cardinalities: tuple[int, ...]) -> np.ndarray:
    blocks = [data.continuous]
    for j, k in enumerate(cardinalities):
        blocks.append((data.categorical[:, j : j + 1] == np.arange(k)).astype(float))
    return np.hstack(blocks)


@dataclass(frozen=True, eq=False)
class FittedClassifier:
    """A trained base classifier plus the feature preprocessing it expects.

    LR sees standardised continuous features followed by one-hot categoricals.
    """

    kind = "classifier"

    name: str
    model: LrModel | NbModel
    mean: np.ndarray
    scale: np.ndarray
    cardinalities: tuple[int, ...] = ()
    # categorical string -> code tables from the training file, when read from CSV
    vocab: dict[str, dict[str, int]] = field(default_factory=dict)

    def _check(self, data: Dataset) -> None:
        if data.continuous.shape[1] != self.mean.shape[0]:
            raise ArityMismatch(self.mean.shape[0], data.continuous.shape[1])
        if data.categorical.shape[1] != len(self.cardinalities):
            raise ArityMismatch(len(self.cardinalities), data.categorical.shape[1])

    def predict(self, data: Dataset) -> np.ndarray:
        self._check(data)
        if self.name == "nb":
            return predict_nb(self.model, data)
        std = Dataset((data.continuous - self.mean) / self.scale, data.categorical, data.labels)
        return predict_lr(self.model, _encode(std, self.cardinalities))

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "model": self.model.to_dict(),
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
            "cardinalities": list(self.cardinalities),
            "vocab": self.vocab,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FittedClassifier:
        model_cls = NbModel if data["name"] == "nb" else LrModel
        return cls(
            data["name"],
            model_cls.from_dict(data["model"]),
            np.asarray(data["mean"], dtype=float),
            np.asarray(data["scale"], dtype=float),
            tuple(int(k) for k in data["cardinalities"]),
            {col: {str(k): int(v) for k, v in table.items()} for col, table in data.get("vocab", {}).items()},
        )


def train_classifier(
    name: str, data: Dataset, hyper: LrHyper = LrHyper(), vocab: dict[str, dict[str, int]] | None = None
) -> FittedClassifier:
    if name not in CLASSIFIERS:
        raise InvalidSpec(f"unknown classifier {name!r}; expected one of {sorted(CLASSIFIERS)}")
    mean = data.continuous.mean(axis=0)
    scale = data.continuous.std(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    if name == "nb":
        return FittedClassifier(name, train_nb(data), mean, scale, data.cardinalities, dict(vocab or {}))
    std = Dataset((data.continuous - mean) / scale, data.categorical, data.labels)
    model = train_lr(_encode(std, data.cardinalities), data.labels, hyper)
    return FittedClassifier(name, model, mean, scale, data.cardinalities, dict(vocab or {}))


@dataclass(frozen=True)
class CalibratorSpec:
    """Method name plus its parameters.

    ``abb`` uses the R-cell cache (``R``, default 100); ``R: null`` selects
    exact per-query averaging.
    """

    method: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.method not in CALIBRATORS:
            raise InvalidSpec(f"unknown calibrator {self.method!r}; expected one of {sorted(CALIBRATORS)}")

    @property
    def display_name(self) -> str:
        return self.params.get("label") or CALIBRATORS[self.method]

    def prior(self) -> BinningPriorConfig:
        return BinningPriorConfig(
            lam=self.params.get("lam"),
            cap=self.params.get("cap", 0.99),
            gamma=self.params.get("gamma"),
        )

    def to_dict(self) -> dict[str, Any]:
        return {"method": self.method, "params": dict(self.params)}

    @classmethod
    def parse(cls, item: str | dict[str, Any]) -> CalibratorSpec:
        if isinstance(item, str):
            return cls(item)
        return cls(item["method"], dict(item.get("params", {})))


def fit_calibrator(spec: CalibratorSpec, cset: SortedCalibrationSet) -> CalibrationMap:
    p = spec.params
    if spec.method == "platt":
        return fit_platt(cset, smooth_targets=p.get("smooth_targets", True))
    if spec.method == "hist":
        return fit_histogram(cset, int(p.get("k", 10)))
    if spec.method == "isotonic":
        return fit_isotonic(cset)
    if spec.method == "sbb":
        return fit_sbb(cset, spec.prior())
    R = p.get("R", 100)
    if R is None:
        return fit_abb(cset, spec.prior())
    return fit_abb_cached(cset, spec.prior(), int(R))
