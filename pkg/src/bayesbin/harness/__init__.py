"""Experiment harness: CSV ingestion, persistence, the runner and the CLI."""

from .io import IngestResult, Schema, Vocabulary, ingest_csv, load_schema, parse_schema, write_dataset_csv
from .persistence import dumps_model, load_model, loads_model, save_model
from .pipeline import CalibratorSpec, FittedClassifier, fit_calibrator, train_classifier
from .runner import ExperimentConfig, ResultsTable, run_experiment

__all__ = [
    "CalibratorSpec",
    "ExperimentConfig",
    "FittedClassifier",
    "IngestResult",
    "ResultsTable",
    "Schema",
    "Vocabulary",
    "dumps_model",
    "fit_calibrator",
    "ingest_csv",
    "load_model",
    "load_schema",
    "loads_model",
    "parse_schema",
    "run_experiment",
    "save_model",
    "train_classifier",
    "write_dataset_csv",
]
