"""Row streams: ordered (index, row) sources for out-of-core sampling.

A stream yields ``(row_index, row)`` pairs with strictly increasing indices
and a fixed row width.  Replayable streams can be traversed any number of
times (each traversal re-reads the source); single-shot streams refuse a
second traversal.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import InvalidMatrixError, NotReplayableError, ShapeMismatchError
from .linalg import as_matrix

Row = tuple[int, np.ndarray]


class RowStream:
    """Base class; subclasses implement ``_rows()``."""

    def __init__(self, n_cols: int, replayable: bool):
        if n_cols < 1:
            raise ShapeMismatchError(f"row width must be >= 1, got {n_cols}")
        self.n_cols = int(n_cols)
        self.replayable = bool(replayable)

    def _rows(self) -> Iterator[Row]:
        raise NotImplementedError

    def __iter__(self) -> Iterator[Row]:
        return self._checked(self._rows())

    def _checked(self, rows: Iterator[Row]) -> Iterator[Row]:
        last = -1
        for index, row in rows:
            index = int(index)
            if index <= last:
                raise ShapeMismatchError(
                    f"row indices must be strictly increasing: {index} after {last}"
                )
            arr = np.asarray(row, dtype=np.float64)
            if arr.ndim != 1 or arr.size != self.n_cols:
                raise ShapeMismatchError(
                    f"row {index} has {arr.size} entries, expected {self.n_cols}"
                )
            if not np.isfinite(arr).all():
                raise InvalidMatrixError(f"row {index} contains non-finite entries")
            last = index
            yield index, arr


class MatrixRowStream(RowStream):
    """Replayable stream over the rows of an in-memory matrix."""

    def __init__(self, matrix):
        self.matrix = as_matrix(matrix)
        super().__init__(self.matrix.shape[1], replayable=True)

    def _rows(self) -> Iterator[Row]:
        for i in range(self.matrix.shape[0]):
            yield i, self.matrix[i]


class IterableRowStream(RowStream):
    """Stream over a row factory (replayable) or a one-shot iterable.

    Pass a zero-argument callable returning a fresh iterator to get a
    replayable stream; pass an iterator/iterable to get a single-shot one.
    """

    def __init__(self, source: Callable[[], Iterable[Row]] | Iterable[Row], n_cols: int):
        if callable(source):
            self._factory = source
            self._once = None
            replayable = True
        else:
            self._factory = None
            self._once = iter(source)
            replayable = False
        super().__init__(n_cols, replayable=replayable)

    def _rows(self) -> Iterator[Row]:
        if self._factory is not None:
            return iter(self._factory())
        if self._once is None:
            raise NotReplayableError("single-shot stream was already consumed")
        rows, self._once = self._once, None
        return rows
