"""Three-split experiment runner: train a classifier, calibrate, evaluate.

Output files (when ``out_dir`` is set):

* ``results.csv``: long format ``dataset, classifier, method, measure, value, rank``
* ``results.json``: the same cells plus the configuration that produced them
* ``reliability_<method>.csv``: ten-bin reliability rows per method
"""

from __future__ import annotations

import csv
import json
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Iterator

import numpy as np
from scipy.stats import rankdata

from ..classifiers import LrHyper
from ..core import calibration_set
from ..datagen import SimSpec, generate
from ..dataset import Dataset
from ..errors import InvalidSpec, StageError
from ..metrics import EvalReport, evaluate, write_reliability_csv
from .io import Vocabulary, ingest_csv, load_schema
from .pipeline import CLASSIFIERS, CalibratorSpec, FittedClassifier, fit_calibrator, train_classifier

MEASURES = ("AUC", "Acc", "RMSE", "MCE", "ECE")
HIGHER_IS_BETTER = {"AUC": True, "Acc": True, "RMSE": False, "MCE": False, "ECE": False}
DEFAULT_CALIBRATORS = ("platt", "hist", "isotonic", "sbb", "abb")
RESULT_COLUMNS = ("dataset", "classifier", "method", "measure", "value", "rank")


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str = "xor"
    sim: SimSpec | None = field(default_factory=SimSpec)
    train_csv: str | None = None
    calib_csv: str | None = None
    test_csv: str | None = None
    schema: str | None = None
    # calibrate on the classifier's own training split instead of a separate one
    shared_split: bool = False
    classifier: str = "lr"
    lr: LrHyper = LrHyper()
    calibrators: tuple[CalibratorSpec, ...] = tuple(CalibratorSpec(m) for m in DEFAULT_CALIBRATORS)
    threshold: float = 0.5
    out_dir: str | None = None

    def __post_init__(self) -> None:
        if self.classifier not in CLASSIFIERS:
            raise InvalidSpec(f"unknown classifier {self.classifier!r}")
        if self.sim is None:
            missing = [n for n in ("train_csv", "test_csv", "schema") if getattr(self, n) is None]
            if self.calib_csv is None and not self.shared_split:
                missing.append("calib_csv")
            if missing:
                raise InvalidSpec(f"CSV experiment is missing {', '.join(missing)}")
        names = [c.display_name for c in self.calibrators]
        if len(set(names)) != len(names):
            raise InvalidSpec(f"duplicate calibrator labels {names}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "dataset": self.dataset,
            "sim": None if self.sim is None else asdict(self.sim),
            "train_csv": self.train_csv,
            "calib_csv": self.calib_csv,
            "test_csv": self.test_csv,
            "schema": self.schema,
            "shared_split": self.shared_split,
            "classifier": self.classifier,
            "lr": asdict(self.lr),
            "calibrators": [c.to_dict() for c in self.calibrators],
            "threshold": self.threshold,
            "out_dir": self.out_dir,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentConfig:
        data = dict(data)
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known - {"seed"}
        if unknown:
            raise InvalidSpec(f"unknown config keys {sorted(unknown)}")
        if "sim" in data and data["sim"] is not None:
            data["sim"] = SimSpec(**data["sim"])
        if "seed" in data:
            seed = int(data.pop("seed"))
            data["sim"] = replace(data.get("sim") or SimSpec(), seed=seed)
        if "lr" in data:
            data["lr"] = LrHyper(**data["lr"])
        if "calibrators" in data:
            data["calibrators"] = tuple(CalibratorSpec.parse(c) for c in data["calibrators"])
        return cls(**data)


@dataclass(frozen=True)
class ResultsTable:
    """Measures x methods for one (dataset, classifier) cell group.

    ``rank`` is competition ranking within a measure (1 = best); the top two
    correspond to the bold entries of a printed table.
    """

    dataset: str
    classifier: str
    methods: tuple[str, ...]
    values: dict[tuple[str, str], float]
    reports: dict[str, EvalReport] = field(repr=False, default_factory=dict)

    def value(self, measure: str, method: str) -> float:
        return self.values[(measure, method)]

    def ranks(self, measure: str) -> dict[str, int]:
        vals = np.array([self.values[(measure, m)] for m in self.methods])
        key = -vals if HIGHER_IS_BETTER[measure] else vals
        return dict(zip(self.methods, rankdata(key, method="min").astype(int).tolist()))

    def rows(self) -> Iterator[dict[str, Any]]:
        for measure in MEASURES:
            ranks = self.ranks(measure)
            for method in self.methods:
                yield {
                    "dataset": self.dataset,
                    "classifier": self.classifier,
                    "method": method,
                    "measure": measure,
                    "value": self.values[(measure, method)],
                    "rank": ranks[method],
                }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS)
            writer.writeheader()
            for row in self.rows():
                writer.writerow({**row, "value": repr(row["value"])})

    def to_text(self) -> str:
        width = max(8, *(len(m) + 1 for m in self.methods))
        lines = [f"{'':6}" + "".join(f"{m:>{width}}" for m in self.methods)]
        for measure in MEASURES:
            ranks = self.ranks(measure)
            cells = "".join(
                f"{self.values[(measure, m)]:>{width - 1}.3f}{'*' if ranks[m] <= 2 else ' '}" for m in self.methods
            )
            lines.append(f"{measure:6}{cells}")
        return "\n".join(lines)


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Re-raise any failure inside the block as a StageError tagged ``name``."""
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def load_splits(cfg: ExperimentConfig) -> tuple[Dataset, Dataset, Dataset, Vocabulary]:
    vocab = Vocabulary()
    if cfg.sim is not None:
        train, calib, test = generate(cfg.sim)
        return train, (train if cfg.shared_split else calib), test, vocab
    schema = load_schema(cfg.schema)
    train = ingest_csv(cfg.train_csv, schema, vocab).dataset
    calib = train if cfg.shared_split else ingest_csv(cfg.calib_csv, schema, vocab).dataset
    test = ingest_csv(cfg.test_csv, schema, vocab).dataset
    return train, calib, test, vocab


def run_experiment(cfg: ExperimentConfig) -> ResultsTable:
    with stage("data"):
        train, calib, test, vocab = load_splits(cfg)
    with stage("classifier"):
        clf: FittedClassifier = train_classifier(cfg.classifier, train, cfg.lr, vocab.codes)
        calib_scores = clf.predict(calib)
        test_scores = clf.predict(test)
        cset = calibration_set(calib_scores, calib.labels)
    outputs = {CLASSIFIERS[cfg.classifier]: test_scores}
    for spec in cfg.calibrators:
        with stage(f"calibrate:{spec.method}"):
            outputs[spec.display_name] = fit_calibrator(spec, cset).calibrate(test_scores)
    with stage("evaluate"):
        reports = {m: evaluate(p, test.labels, cfg.threshold) for m, p in outputs.items()}
        values = {(meas, m): r.measures()[meas] for m, r in reports.items() for meas in MEASURES}
        table = ResultsTable(cfg.dataset, CLASSIFIERS[cfg.classifier], tuple(outputs), values, reports)
    if cfg.out_dir is not None:
        with stage("output"):
            write_outputs(table, cfg)
    return table


def write_outputs(table: ResultsTable, cfg: ExperimentConfig) -> None:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table.write_csv(out / "results.csv")
    config = cfg.to_dict()
    config.pop("out_dir")
    doc = {"config": config, "results": list(table.rows())}
    (out / "results.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for method, report in table.reports.items():
        write_reliability_csv(report.reliability, out / f"reliability_{method}.csv")
