"""JSON persistence for fitted calibrators and classifiers."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ..base import MODEL_REGISTRY
from ..errors import CorruptModel
from .pipeline import FittedClassifier

FORMAT = "bayesbin-model"
FORMAT_VERSION = 1


def _registry() -> dict[str, Any]:
    return {**MODEL_REGISTRY, FittedClassifier.kind: FittedClassifier}


def model_document(model: Any) -> dict[str, Any]:
    return {"format": FORMAT, "version": FORMAT_VERSION, "kind": model.kind, "params": model.to_dict()}


def dumps_model(model: Any) -> str:
    return json.dumps(model_document(model), sort_keys=True, allow_nan=False)


def loads_model(text: str) -> Any:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptModel(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise CorruptModel("missing or wrong format marker")
    if doc.get("version") != FORMAT_VERSION:
        raise CorruptModel(f"model file version {doc.get('version')!r} does not match supported version {FORMAT_VERSION}")
    kind = doc.get("kind")
    cls = _registry().get(kind)
    if cls is None:
        raise CorruptModel(f"unknown model kind {kind!r}")
    try:
        return cls.from_dict(doc["params"])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise CorruptModel(f"bad {kind} parameters: {exc}") from None


def save_model(model: Any, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path: str | Path) -> Any:
    return loads_model(Path(path).read_text(encoding="utf-8"))
