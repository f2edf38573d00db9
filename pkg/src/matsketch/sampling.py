"""Weighted row sampling with replacement and the rescaled sketch.

Rows are drawn independently with probability proportional to their squared
Euclidean length.  A drawn row x is stored as (1/sqrt(d)) * (F/|x|) * x,
where F is the Frobenius norm of the source, so that the expected Gram
matrix of the sketch equals the Gram matrix of the source and every sketch
row has length F/sqrt(d).

Three modes share this law:

* ``sample_sketch``          -- in-memory matrix;
* ``sample_sketch_two_pass`` -- replayable stream: pass 1 accumulates row
  weights, pass 2 materializes only the chosen rows.  Bit-identical to the
  in-memory mode for the same seed;
* ``sample_sketch_one_pass`` -- single traversal keeping d independent
  single-item weighted reservoirs.  Same occupant law, its own index stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotReplayableError, OutOfRangeError, ShapeMismatchError, ZeroMatrixError
from .linalg import as_matrix
from .rng import as_generator
from .streams import RowStream

_CEIL_GUARD = 1e-9  # absorbs float noise so exact-integer products do not round up


@dataclass(frozen=True)
class Sketch:
    """Sampled-and-rescaled row sketch plus sampling metadata."""

    matrix: np.ndarray
    chosen_indices: np.ndarray
    frobenius_of_source: float
    d: int
    seed: int | None

    def gram(self) -> np.ndarray:
        return self.matrix.T @ self.matrix


def required_sample_size(r, epsilon, delta, c_constant=1.0) -> int:
    """Smallest admissible sketch size ceil(c * t * log t), t = r/(eps^4 delta).

    Natural log, clamped below at 1 so the result is never under c * t.
    """
    if not r >= 1:
        raise OutOfRangeError(f"numerical rank must be >= 1, got {r}")
    if not 0 < epsilon < 1:
        raise OutOfRangeError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not 0 < delta < 1:
        raise OutOfRangeError(f"delta must lie in (0, 1), got {delta}")
    if not c_constant > 0:
        raise OutOfRangeError(f"c_constant must be positive, got {c_constant}")
    t = float(r) / (epsilon**4 * delta)
    value = c_constant * t * math.log(max(t, math.e))
    return max(1, math.ceil(value - _CEIL_GUARD * max(1.0, value)))


@dataclass(frozen=True)
class SamplingPlan:
    """Resolved sampling parameters; ``d`` is derived on construction."""

    r: float
    epsilon: float
    delta: float
    c_constant: float = 1.0
    d: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "d", required_sample_size(self.r, self.epsilon, self.delta, self.c_constant)
        )


def row_weights(a) -> np.ndarray:
    """Squared Euclidean length of each row.

    Computed row by row with the same reduction the streaming modes use, so
    in-memory and streamed sampling see bit-identical weights.
    """
    arr = as_matrix(a)
    return np.array([float(np.dot(row, row)) for row in arr])


def row_distribution(a) -> np.ndarray:
    """Sampling probabilities: squared row length over squared Frobenius norm."""
    w = row_weights(a)
    total = float(np.sum(w))
    if total <= 0.0:
        raise ZeroMatrixError("cannot sample rows of a zero matrix")
    return w / total


def draw_weighted_indices(weights, size: int, rng) -> np.ndarray:
    """Draw ``size`` indices i.i.d. with probability weights[i]/sum(weights).

    Inversion of the cumulative sum in extended precision; rows with zero
    weight are never drawn.
    """
    w = np.asarray(weights, dtype=np.longdouble)
    if w.ndim != 1 or w.size == 0:
        raise OutOfRangeError("weights must be a nonempty 1-d sequence")
    if (w < 0).any():
        raise OutOfRangeError("weights must be nonnegative")
    cum = np.cumsum(w)
    total = cum[-1]
    if not total > 0:
        raise ZeroMatrixError("all weights are zero")
    u = np.asarray(rng.random(size), dtype=np.longdouble) * total
    return np.searchsorted(cum, u, side="right").astype(np.int64)


def _scaled_rows(rows: np.ndarray, weights: np.ndarray, total_sq: float, d: int) -> np.ndarray:
    # (1/sqrt(d)) * (F/|x|) * x for each chosen row x
    f = math.sqrt(total_sq)
    scale = f / (math.sqrt(d) * np.sqrt(weights))
    return rows * scale[:, None]


def sample_sketch(a, d: int, seed=0) -> Sketch:
    """Sample ``d`` rescaled rows of an in-memory matrix.

    Parameters
    ----------
    a : array_like
        Source matrix with at least one nonzero row.
    d : int
        Number of rows to draw (with replacement).
    seed : int or numpy Generator
        Drives the draw; identical seeds give identical sketches.
    """
    arr = as_matrix(a)
    if d < 1:
        raise OutOfRangeError(f"sketch size d must be >= 1, got {d}")
    weights = row_weights(arr)
    total_sq = float(np.sum(weights))
    if total_sq <= 0.0:
        raise ZeroMatrixError("cannot sample rows of a zero matrix")
    rng = as_generator(seed)
    idx = draw_weighted_indices(weights, d, rng)
    matrix = _scaled_rows(arr[idx], weights[idx], total_sq, d)
    return Sketch(
        matrix=matrix,
        chosen_indices=idx,
        frobenius_of_source=math.sqrt(total_sq),
        d=int(d),
        seed=seed if isinstance(seed, int) else None,
    )


def stream_weights(stream: RowStream, accumulate_gram: bool = False):
    """One traversal collecting per-row weights (and optionally the Gram matrix).

    Returns (indices, weights, total_sq, gram_or_None).
    """
    indices: list[int] = []
    weights: list[float] = []
    gram = np.zeros((stream.n_cols, stream.n_cols)) if accumulate_gram else None
    for i, row in stream:
        indices.append(i)
        weights.append(float(np.dot(row, row)))
        if gram is not None:
            gram += np.outer(row, row)
    w = np.array(weights)
    return np.array(indices, dtype=np.int64), w, float(np.sum(w)), gram


def materialize_chosen(stream: RowStream, positions, weights, total_sq: float, d: int, seed) -> Sketch:
    """Second pass: collect only the chosen rows and assemble the sketch.

    ``positions`` are positions in traversal order; holds at most the set of
    distinct chosen rows plus the row currently being read.
    """
    wanted = set(int(p) for p in positions)
    store: dict[int, np.ndarray] = {}
    source_indices: list[int] = []
    for pos, (i, row) in enumerate(stream):
        source_indices.append(i)
        if pos in wanted:
            store[pos] = row
    missing = wanted.difference(store)
    if missing:
        raise ShapeMismatchError(
            f"stream replay ended before positions {sorted(missing)} were seen"
        )
    rows = np.stack([store[int(p)] for p in positions])
    matrix = _scaled_rows(rows, np.asarray(weights)[positions], total_sq, d)
    chosen = np.array([source_indices[int(p)] for p in positions], dtype=np.int64)
    return Sketch(
        matrix=matrix,
        chosen_indices=chosen,
        frobenius_of_source=math.sqrt(total_sq),
        d=int(d),
        seed=seed if isinstance(seed, int) else None,
    )


def sample_sketch_two_pass(stream: RowStream, d: int, seed=0) -> Sketch:
    """Sketch a replayable stream: weight pass, draw, then materialize pass."""
    if not stream.replayable:
        raise NotReplayableError("two-pass sampling requires a replayable stream")
    if d < 1:
        raise OutOfRangeError(f"sketch size d must be >= 1, got {d}")
    _, weights, total_sq, _ = stream_weights(stream)
    if total_sq <= 0.0:
        raise ZeroMatrixError("cannot sample rows of a zero matrix")
    rng = as_generator(seed)
    positions = draw_weighted_indices(weights, d, rng)
    return materialize_chosen(stream, positions, weights, total_sq, d, seed)


def sample_sketch_one_pass(stream: RowStream, d: int, seed=0) -> Sketch:
    """Sketch a stream in a single traversal.

    Keeps ``d`` independent single-item reservoirs.  When a row with weight
    w arrives and the running weight total becomes W, each reservoir
    replaces its occupant with probability w/W, independently.  The final
    occupant of each reservoir is then distributed exactly per the row
    distribution, and reservoirs are mutually independent.
    """
    if d < 1:
        raise OutOfRangeError(f"sketch size d must be >= 1, got {d}")
    rng = as_generator(seed)
    running = 0.0
    occupant_rows: list[np.ndarray | None] = [None] * d
    occupant_index = np.full(d, -1, dtype=np.int64)
    occupant_weight = np.zeros(d)
    weights: list[float] = []
    for i, row in stream:
        w = float(np.dot(row, row))
        weights.append(w)
        if w <= 0.0:
            continue
        running += w
        replace = rng.random(d) < (w / running)
        if replace.any():
            for slot in np.nonzero(replace)[0]:
                occupant_rows[slot] = row
            occupant_index[replace] = i
            occupant_weight[replace] = w
    total_sq = float(np.sum(np.array(weights))) if weights else 0.0
    if running <= 0.0 or total_sq <= 0.0:
        raise ZeroMatrixError("stream carried zero total weight")
    rows = np.stack(occupant_rows)
    matrix = _scaled_rows(rows, occupant_weight, total_sq, d)
    return Sketch(
        matrix=matrix,
        chosen_indices=occupant_index.copy(),
        frobenius_of_source=math.sqrt(total_sq),
        d=int(d),
        seed=seed if isinstance(seed, int) else None,
    )
