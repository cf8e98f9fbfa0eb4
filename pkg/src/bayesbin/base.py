from __future__ import annotations

from typing import Any, ClassVar, overload

import numpy as np

from .errors import ScoreOutOfRange

MODEL_REGISTRY: dict[str, type["CalibrationMap"]] = {}


class CalibrationMap:
    """A fitted score -> probability transform.

    Subclasses implement ``_transform`` on a validated float array and the
    ``to_dict``/``from_dict`` pair used for JSON persistence.
    """

    kind: ClassVar[str] = ""

    def __init_subclass__(cls, **kwargs: Any) -> None:
        super().__init_subclass__(**kwargs)
        if cls.kind:
            MODEL_REGISTRY[cls.kind] = cls

    def _transform(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @overload
    def calibrate(self, x: float) -> float: ...
    @overload
    def calibrate(self, x: np.ndarray) -> np.ndarray: ...

    def calibrate(self, x):
        arr = np.asarray(x, dtype=float)
        flat = arr.ravel()
        bad = np.flatnonzero(~((flat >= 0.0) & (flat <= 1.0)))
        if bad.size:
            raise ScoreOutOfRange(int(bad[0]) if arr.ndim else None, float(flat[bad[0]]))
        out = self._transform(flat).reshape(arr.shape)
        return float(out) if arr.ndim == 0 else out

    __call__ = calibrate

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CalibrationMap":
        raise NotImplementedError
