"""CSV dataset ingestion and emission.

A schema is one line of ``column:role`` pairs separated by commas, where the
role is ``continuous``, ``categorical``, ``label`` or ``ignore``. A label
column may name its positive value (``income:label:>50K``); otherwise label
cells must read 0 or 1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..dataset import Dataset
from ..errors import NonBinaryLabel, SchemaMismatch, UnparseableValue

ROLES = ("continuous", "categorical", "label", "ignore")
MISSING = frozenset({"", "?", "NA", "NaN", "nan"})


@dataclass(frozen=True)
class Schema:
    columns: tuple[tuple[str, str], ...]
    positive_label: str | None = None

    @property
    def label_column(self) -> str:
        return next(name for name, role in self.columns if role == "label")

    def names(self, role: str) -> tuple[str, ...]:
        return tuple(name for name, r in self.columns if r == role)

    def to_line(self) -> str:
        parts = []
        for name, role in self.columns:
            if role == "label" and self.positive_label is not None:
                parts.append(f"{name}:label:{self.positive_label}")
            else:
                parts.append(f"{name}:{role}")
        return ",".join(parts)


def parse_schema(text: str) -> Schema:
    cols = []
    positive = None
    for item in text.strip().split(","):
        item = item.strip()
        if not item:
            continue
        name, _, rest = item.partition(":")
        role, _, extra = rest.partition(":")
        if role not in ROLES:
            raise SchemaMismatch(name, f"unknown role {role!r}")
        if role == "label" and extra:
            positive = extra
        cols.append((name, role))
    if sum(role == "label" for _, role in cols) != 1:
        raise SchemaMismatch("<label>", "schema must declare exactly one label column")
    return Schema(tuple(cols), positive)


def load_schema(source: str | Path | Schema) -> Schema:
    """Accept a Schema, a path to a one-line schema file, or the schema text itself."""
    if isinstance(source, Schema):
        return source
    path = Path(source)
    if path.exists():
        return parse_schema(path.read_text(encoding="utf-8"))
    return parse_schema(str(source))


@dataclass
class Vocabulary:
    """Category string -> integer code, per categorical column, grown across files."""

    codes: dict[str, dict[str, int]] = field(default_factory=dict)

    def encode(self, column: str, value: str) -> int:
        table = self.codes.setdefault(column, {})
        return table.setdefault(value, len(table))

    def cardinality(self, column: str) -> int:
        return len(self.codes.get(column, {}))


@dataclass(frozen=True)
class IngestResult:
    dataset: Dataset
    dropped: int


def _parse_label(raw: str, schema: Schema, row: int) -> int:
    if schema.positive_label is not None:
        return int(raw == schema.positive_label)
    try:
        value = float(raw)
    except ValueError:
        raise NonBinaryLabel(row, raw) from None
    if value not in (0.0, 1.0):
        raise NonBinaryLabel(row, raw)
    return int(value)


def ingest_csv(path: str | Path, schema: str | Path | Schema, vocab: Vocabulary | None = None) -> IngestResult:
    """Parse a headered CSV; rows with a missing cell are dropped and counted.

    Rows are numbered from 1 for the first data line. Pass the same ``vocab``
    when reading several files so categorical codes agree between them.
    """
    schema = load_schema(schema)
    vocab = vocab if vocab is not None else Vocabulary()
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SchemaMismatch("<header>", f"{path} is empty") from None
        declared = [name for name, _ in schema.columns]
        for name in declared:
            if name not in header:
                raise SchemaMismatch(name, "declared in schema but absent from header")
        for name in header:
            if name not in declared:
                raise SchemaMismatch(name, "present in header but not declared in schema")
        pos = {name: header.index(name) for name in declared}
        cont_names = schema.names("continuous")
        cat_names = schema.names("categorical")
        label_name = schema.label_column
        cont_rows, cat_rows, labels = [], [], []
        dropped = 0
        for row_no, cells in enumerate(reader, start=1):
            if not cells:
                continue
            if len(cells) != len(header):
                raise SchemaMismatch("<row>", f"row {row_no} has {len(cells)} cells, header has {len(header)}")
            cells = [c.strip() for c in cells]
            if any(cells[pos[name]] in MISSING for name, role in schema.columns if role != "ignore"):
                dropped += 1
                continue
            cont = []
            for name in cont_names:
                try:
                    cont.append(float(cells[pos[name]]))
                except ValueError:
                    raise UnparseableValue(row_no, name, cells[pos[name]]) from None
            cont_rows.append(cont)
            cat_rows.append([vocab.encode(name, cells[pos[name]]) for name in cat_names])
            labels.append(_parse_label(cells[pos[label_name]], schema, row_no))
    n = len(labels)
    dataset = Dataset(
        np.asarray(cont_rows, dtype=float).reshape(n, len(cont_names)),
        np.asarray(cat_rows, dtype=np.int64).reshape(n, len(cat_names)),
        np.asarray(labels, dtype=np.int64),
        cont_names,
        cat_names,
        tuple(max(vocab.cardinality(name), 1) for name in cat_names),
    )
    return IngestResult(dataset, dropped)


def write_dataset_csv(dataset: Dataset, path: str | Path, label_name: str = "label") -> Schema:
    """Write a dataset with continuous features only; returns its schema."""
    names = list(dataset.continuous_names) or [f"x{i + 1}" for i in range(dataset.continuous.shape[1])]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([*names, label_name])
        for row, z in zip(dataset.continuous, dataset.labels):
            writer.writerow([*(repr(float(v)) for v in row), int(z)])
    return Schema(tuple((n, "continuous") for n in names) + ((label_name, "label"),))
