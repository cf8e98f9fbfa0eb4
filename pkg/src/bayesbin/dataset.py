from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ArityMismatch


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix split into continuous and categorical parts, plus binary labels."""

    continuous: np.ndarray  # (n, p) float
    categorical: np.ndarray  # (n, q) int codes
    labels: np.ndarray  # (n,) int in {0, 1}
    continuous_names: tuple[str, ...] = ()
    categorical_names: tuple[str, ...] = ()
    # number of known levels per categorical column
    cardinalities: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        n = self.labels.shape[0]
        if self.continuous.shape[0] != n or self.categorical.shape[0] != n:
            raise ArityMismatch(n, min(self.continuous.shape[0], self.categorical.shape[0]))
        if not self.cardinalities and self.categorical.shape[1]:
            levels = tuple(int(c.max()) + 1 if c.size else 1 for c in self.categorical.T)
            object.__setattr__(self, "cardinalities", levels)

    @classmethod
    def from_continuous(cls, x: np.ndarray, labels: np.ndarray, names: tuple[str, ...] = ()) -> Dataset:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        names = names or tuple(f"x{i + 1}" for i in range(x.shape[1]))
        return cls(x, np.zeros((x.shape[0], 0), dtype=np.int64), np.asarray(labels, dtype=np.int64), names)

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def one_hot(self) -> np.ndarray:
        """Continuous columns followed by one-hot blocks for each categorical column."""
        blocks = [self.continuous]
        for j, k in enumerate(self.cardinalities):
            blocks.append((self.categorical[:, j : j + 1] == np.arange(k)).astype(float))
        return np.hstack(blocks) if blocks else np.zeros((len(self), 0))
