"""Command-line entry point: ``bayesbin <subcommand> ...``.

Subcommands: gen, train, calibrate, eval, run, inspect-model. For ``run``,
values in ``--config`` take precedence over flags, which take precedence over
built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Sequence

from ..base import CalibrationMap
from ..classifiers import LrHyper
from ..core import calibration_set
from ..datagen import CONFIGS, SPLITS, SimSpec, generate
from ..errors import CalibrationError, CorruptModel, StageError
from ..metrics import evaluate, write_reliability_csv
from .io import Vocabulary, ingest_csv, write_dataset_csv
from .persistence import load_model, model_document, save_model
from .pipeline import CALIBRATORS, CLASSIFIERS, CalibratorSpec, FittedClassifier, fit_calibrator, train_classifier
from .runner import DEFAULT_CALIBRATORS, ExperimentConfig, run_experiment, stage


def _add_lr_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--learning-rate", type=float, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--l2", type=float, default=None)


def _lr_hyper(args: argparse.Namespace) -> LrHyper:
    given = {
        "learning_rate": args.learning_rate,
        "epochs": args.epochs,
        "l2": args.l2,
    }
    return LrHyper(**{k: v for k, v in given.items() if v is not None})


def _add_calibrator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lam", type=float, default=None, help="expected number of bin boundaries (default sqrt(N))")
    p.add_argument("--gamma", type=float, default=None, help="fixed per-gap boundary probability")
    p.add_argument("--R", type=int, default=None, help="ABB cache cells (default 100; 0 = exact ABB)")
    p.add_argument("--k", type=int, default=None, help="histogram bin count (default 10)")
    p.add_argument("--no-platt-smoothing", action="store_true", default=None)


def _calibrator_params(args: argparse.Namespace, method: str) -> dict[str, Any]:
    params: dict[str, Any] = {}
    if method in ("sbb", "abb"):
        if args.lam is not None:
            params["lam"] = args.lam
        if args.gamma is not None:
            params["gamma"] = args.gamma
    if method == "abb" and args.R is not None:
        params["R"] = None if args.R == 0 else args.R
    if method == "hist" and args.k is not None:
        params["k"] = args.k
    if method == "platt" and args.no_platt_smoothing:
        params["smooth_targets"] = False
    return params


def _read(path: str, schema: str, vocab: Vocabulary):
    result = ingest_csv(path, schema, vocab)
    if result.dropped:
        print(f"{path}: dropped {result.dropped} row(s) with missing values", file=sys.stderr)
    return result.dataset


def _load_classifier(path: str) -> FittedClassifier:
    model = load_model(path)
    if not isinstance(model, FittedClassifier):
        raise CorruptModel(f"{path} holds a {model.kind} model, not a classifier")
    return model


def cmd_gen(args: argparse.Namespace) -> None:
    spec = SimSpec(args.config, args.n_train, args.n_calib, args.n_test, args.seed, args.noise)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    schema = None
    for name, data in zip(SPLITS, generate(spec)):
        schema = write_dataset_csv(data, out / f"{name}.csv")
    (out / "schema.txt").write_text(schema.to_line() + "\n", encoding="utf-8")
    print(f"wrote {', '.join(f'{s}.csv' for s in SPLITS)} and schema.txt to {out}")


def cmd_train(args: argparse.Namespace) -> None:
    vocab = Vocabulary()
    with stage("data"):
        data = _read(args.data, args.schema, vocab)
    with stage("classifier"):
        clf = train_classifier(args.classifier, data, _lr_hyper(args), vocab.codes)
    save_model(clf, args.out)
    print(f"saved {args.classifier} classifier to {args.out}")


def cmd_calibrate(args: argparse.Namespace) -> None:
    clf = _load_classifier(args.classifier)
    with stage("data"):
        data = _read(args.data, args.schema, Vocabulary(dict(clf.vocab)))
    with stage(f"calibrate:{args.method}"):
        cset = calibration_set(clf.predict(data), data.labels)
        model = fit_calibrator(CalibratorSpec(args.method, _calibrator_params(args, args.method)), cset)
    save_model(model, args.out)
    print(f"saved {args.method} calibrator to {args.out}")


def cmd_eval(args: argparse.Namespace) -> None:
    clf = _load_classifier(args.classifier)
    with stage("data"):
        data = _read(args.data, args.schema, Vocabulary(dict(clf.vocab)))
    scores = clf.predict(data)
    outputs = {CLASSIFIERS[clf.name]: scores}
    for path in args.calibrator or []:
        model = load_model(path)
        if not isinstance(model, CalibrationMap):
            raise CorruptModel(f"{path} is not a calibrator")
        outputs[Path(path).stem] = model.calibrate(scores)
    writer = csv.writer(sys.stdout)
    writer.writerow(["method", "measure", "value"])
    for method, probs in outputs.items():
        report = evaluate(probs, data.labels, args.threshold)
        for measure, value in report.measures().items():
            writer.writerow([method, measure, repr(value)])
        if args.reliability_dir:
            Path(args.reliability_dir).mkdir(parents=True, exist_ok=True)
            write_reliability_csv(report.reliability, Path(args.reliability_dir) / f"reliability_{method}.csv")


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, then explicit flags, then the config file on top."""
    merged = ExperimentConfig().to_dict()
    if args.csv_train:
        merged.update(
            sim=None,
            train_csv=args.csv_train,
            calib_csv=args.csv_calib,
            test_csv=args.csv_test,
            schema=args.schema,
            dataset=args.dataset or Path(args.csv_train).stem,
        )
    else:
        sim = merged["sim"]
        for key, val in (("config", args.sim), ("seed", args.seed), ("noise", args.noise)):
            if val is not None:
                sim[key] = val
        for key in ("n_train", "n_calib", "n_test"):
            if getattr(args, key) is not None:
                sim[key] = getattr(args, key)
        merged["dataset"] = args.dataset or sim["config"]
    if args.classifier:
        merged["classifier"] = args.classifier
    merged["lr"] = asdict(_lr_hyper(args))
    methods = [m for m in args.methods.split(",") if m] if args.methods is not None else list(DEFAULT_CALIBRATORS)
    merged["calibrators"] = [{"method": m, "params": _calibrator_params(args, m)} for m in methods]
    if args.shared_split:
        merged["shared_split"] = True
    if args.threshold is not None:
        merged["threshold"] = args.threshold
    if args.out:
        merged["out_dir"] = args.out
    if args.config:
        file_cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if isinstance(file_cfg.get("sim"), dict) and merged["sim"] is not None:
            file_cfg["sim"] = {**merged["sim"], **file_cfg["sim"]}
        merged.update(file_cfg)
    return ExperimentConfig.from_dict(merged)


def cmd_run(args: argparse.Namespace) -> None:
    cfg = build_config(args)
    table = run_experiment(cfg)
    print(table.to_text())
    if cfg.out_dir:
        print(f"results written to {cfg.out_dir}")


def cmd_inspect(args: argparse.Namespace) -> None:
    model = load_model(args.path)
    doc = model_document(model)
    summary: dict[str, Any] = {"kind": doc["kind"], "version": doc["version"]}
    params = doc["params"]
    if doc["kind"] == "sbb":
        summary.update(n=params["n"], bins=len(params["bins"]), log_score=params["log_score"])
    elif doc["kind"] == "abb":
        summary.update(n=len(params["scores"]), log_total_mass=params["forward"][-1])
    elif doc["kind"] == "abb-cached":
        summary.update(R=len(params["values"]))
    elif doc["kind"] == "hist":
        summary.update(k=len(params["estimates"]), edges=params["edges"], estimates=params["estimates"])
    elif doc["kind"] == "classifier":
        summary.update(classifier=params["name"], features=len(params["mean"]) + sum(params["cardinalities"]))
    else:
        summary.update(params)
    if "config" in params:
        summary["prior"] = params["config"]
    print(json.dumps(summary, indent=2, sort_keys=True))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bayesbin", description="Bayesian binning calibration toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate simulated train/calib/test CSVs")
    p.add_argument("--config", choices=CONFIGS, default="xor")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-train", type=int, default=600)
    p.add_argument("--n-calib", type=int, default=600)
    p.add_argument("--n-test", type=int, default=600)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("train", help="train a base classifier on a CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--schema", required=True, help="schema file or inline schema line")
    p.add_argument("--classifier", choices=sorted(CLASSIFIERS), default="lr")
    _add_lr_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("calibrate", help="fit a calibrator on classifier scores")
    p.add_argument("--classifier", required=True, help="saved classifier model")
    p.add_argument("--data", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--method", choices=sorted(CALIBRATORS), required=True)
    _add_calibrator_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("eval", help="print the five measures on a test CSV")
    p.add_argument("--classifier", required=True)
    p.add_argument("--calibrator", action="append", help="saved calibrator (repeatable)")
    p.add_argument("--data", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--reliability-dir", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("run", help="full train/calibrate/test pipeline")
    p.add_argument("--config", default=None, help="JSON experiment config (overrides flags)")
    p.add_argument("--dataset", default=None)
    p.add_argument("--sim", choices=CONFIGS, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--noise", type=float, default=None)
    p.add_argument("--n-train", type=int, default=None)
    p.add_argument("--n-calib", type=int, default=None)
    p.add_argument("--n-test", type=int, default=None)
    p.add_argument("--csv-train", default=None)
    p.add_argument("--csv-calib", default=None)
    p.add_argument("--csv-test", default=None)
    p.add_argument("--schema", default=None)
    p.add_argument("--shared-split", action="store_true")
    p.add_argument("--classifier", choices=sorted(CLASSIFIERS), default=None)
    _add_lr_flags(p)
    p.add_argument("--methods", default=None, help="comma-separated calibrators, e.g. platt,hist,isotonic,sbb,abb")
    _add_calibrator_flags(p)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("inspect-model", help="summarise a saved model")
    p.add_argument("path")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CalibrationError, OSError, json.JSONDecodeError) as exc:
        print(f"error: [{args.command}] {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
