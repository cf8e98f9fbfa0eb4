"""Exception types raised across the package."""

from __future__ import annotations


class CalibrationError(Exception):
    """Base class for all errors raised by bayesbin."""


class EmptyData(CalibrationError, ValueError):
    def __init__(self, what: str = "data") -> None:
        super().__init__(f"{what} is empty")


class ScoreOutOfRange(CalibrationError, ValueError):
    def __init__(self, index: int | None, value: float) -> None:
        self.index = index
        self.value = value
        where = f" at index {index}" if index is not None else ""
        super().__init__(f"score {value!r}{where} is outside [0, 1]")


class NonBinaryLabel(CalibrationError, ValueError):
    def __init__(self, index: int, value: object) -> None:
        self.index = index
        self.value = value
        super().__init__(f"label {value!r} at row {index} is not 0 or 1")


class IndexOutOfRange(CalibrationError, IndexError):
    pass


class InvalidBinCount(CalibrationError, ValueError):
    pass


class SingleClassData(CalibrationError, ValueError):
    def __init__(self, what: str = "data") -> None:
        super().__init__(f"{what} must contain both classes")


class NonConvergenceWarning(RuntimeWarning):
    """An iterative fit stopped at its iteration cap; the model is still usable."""


class DivergenceDetected(CalibrationError, RuntimeError):
    pass


class ArityMismatch(CalibrationError, ValueError):
    def __init__(self, expected: int, got: int) -> None:
        self.expected = expected
        self.got = got
        super().__init__(f"expected {expected} features, got {got}")


class InvalidSpec(CalibrationError, ValueError):
    pass


class SchemaMismatch(CalibrationError, ValueError):
    def __init__(self, column: str, detail: str = "") -> None:
        self.column = column
        msg = f"schema mismatch on column {column!r}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class UnparseableValue(CalibrationError, ValueError):
    def __init__(self, row: int, column: str, value: str) -> None:
        self.row = row
        self.column = column
        super().__init__(f"cannot parse {value!r} in row {row}, column {column!r}")


class CorruptModel(CalibrationError, ValueError):
    pass


class StageError(CalibrationError):
    """Wraps a failure with the pipeline stage it happened in."""

    def __init__(self, stage: str, cause: BaseException) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
