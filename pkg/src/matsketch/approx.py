"""Rank-k projectors from sketches and the approximation-error machinery.

The projector acts on input space: it is assembled from the sketch's right
singular vectors, i.e. the top eigenvectors of the sketch Gram matrix.  (A
d x n sketch's left singular vectors live in R^d and cannot project R^n;
see README "Design notes".)  Singular directions whose values vanish at
working precision are dropped, so the projector rank never exceeds the
numerical rank of the sketch: a sketch that misses part of the row space
yields a genuinely smaller projector instead of an arbitrary completion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import OutOfRangeError, ShapeMismatchError, ZeroMatrixError
from .linalg import as_matrix, spectral_norm, svd, sym_spectral_norm
from .parallel import run_indexed
from .rng import spawn
from .sampling import (
    Sketch,
    draw_weighted_indices,
    materialize_chosen,
    required_sample_size,
    sample_sketch,
    sample_sketch_one_pass,
    stream_weights,
)
from .streams import RowStream


@dataclass(frozen=True)
class Projector:
    """Orthogonal projection onto the span of ``basis`` columns (in R^n)."""

    basis: np.ndarray

    @property
    def k(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def matrix(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def apply_to_rows(self, a) -> np.ndarray:
        """Project each row of ``a``: returns a @ basis @ basis.T."""
        arr = as_matrix(a, allow_empty=True)
        if arr.shape[1] != self.dim:
            raise ShapeMismatchError(
                f"matrix has {arr.shape[1]} columns, projector lives in R^{self.dim}"
            )
        return (arr @ self.basis) @ self.basis.T


def projector_top_k(sketch: Sketch, k: int) -> Projector:
    """Projection onto the top-k right singular vectors of the sketch.

    k = 0 is the zero map.  Directions with numerically zero singular value
    are excluded, so the returned rank is min(k, rank of the sketch).
    """
    mat = sketch.matrix
    n = mat.shape[1]
    if k < 0 or k > n:
        raise ShapeMismatchError(f"k must lie in [0, {n}], got {k}")
    if k == 0:
        return Projector(basis=np.zeros((n, 0)))
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    cutoff = s[0] * max(mat.shape) * np.finfo(np.float64).eps if s.size else 0.0
    effective = min(k, int(np.count_nonzero(s > cutoff)))
    return Projector(basis=vh[:effective].T.copy())


def approximation_error(a, projector: Projector) -> float:
    """Spectral norm of a - a P."""
    arr = as_matrix(a)
    return spectral_norm(arr - projector.apply_to_rows(arr))


class BoundCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def projection_error_bound(a, sketch: Sketch, k: int) -> BoundCheck:
    """Deterministic comparison of the projection error with the Gram gap.

    lhs = |a - a P_k|_2^2, rhs = sigma_{k+1}(a)^2 + 2 |a^T a - s^T s|_2
    where s is the sketch.  Holds for every matrix, sketch, and k.
    """
    arr = as_matrix(a)
    if sketch.matrix.shape[1] != arr.shape[1]:
        raise ShapeMismatchError(
            f"sketch has {sketch.matrix.shape[1]} columns, matrix has {arr.shape[1]}"
        )
    projector = projector_top_k(sketch, k)
    lhs = approximation_error(arr, projector) ** 2
    values = svd(arr).values
    sigma_next = float(values[k]) if k < values.size else 0.0
    gram_gap = sym_spectral_norm(arr.T @ arr - sketch.gram())
    rhs = sigma_next**2 + 2.0 * gram_gap
    return BoundCheck(lhs=lhs, rhs=rhs, holds=bool(lhs <= rhs + 1e-8))


@dataclass(frozen=True)
class ApproxReport:
    """Outcome of one end-to-end approximation run.

    Error fields are None when the source is a stream (the full matrix is
    never held, so exact singular values are not computed).
    """

    k: int
    d: int
    epsilon: float
    delta: float
    numerical_rank: float | None
    sigma_kplus1: float | None
    error_spectral: float | None
    bound: float | None
    gram_deviation: float | None
    satisfied: bool | None


def _power_top_eigenvalue(gram: np.ndarray, iterations: int = 30) -> float:
    """Lower estimate of the top eigenvalue of a PSD matrix.

    Power iteration from a fixed starting vector; both the Rayleigh quotient
    and the largest diagonal entry are lower bounds, so the estimate only
    ever inflates the numerical rank (and hence the sample size).
    """
    n = gram.shape[0]
    v = np.full(n, 1.0 / math.sqrt(n))
    rayleigh = 0.0
    for _ in range(iterations):
        w = gram @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            break
        v = w / norm
        rayleigh = float(v @ (gram @ v))
    return max(rayleigh, float(gram.diagonal().max()), 0.0)


def low_rank_approximate(
    source,
    k: int,
    epsilon: float,
    delta: float,
    c_constant: float = 1.0,
    seed: int = 0,
    d: int | None = None,
) -> tuple[Projector, ApproxReport]:
    """Sample a sketch sized by the numerical rank and build its projector.

    ``source`` is a dense matrix or a RowStream.  Replayable streams take
    exactly two traversals; single-shot streams take one but require an
    explicit ``d`` (the reservoir count must be fixed before the pass).
    ``d`` overrides the sample-size formula in every mode.
    """
    if not 0 < epsilon < 1:
        raise OutOfRangeError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not 0 < delta < 1:
        raise OutOfRangeError(f"delta must lie in (0, 1), got {delta}")
    if isinstance(source, RowStream):
        return _approximate_stream(source, k, epsilon, delta, c_constant, seed, d)
    return _approximate_dense(source, k, epsilon, delta, c_constant, seed, d)


def _approximate_dense(a, k, epsilon, delta, c_constant, seed, d):
    arr = as_matrix(a)
    decomposition = svd(arr)
    values = decomposition.values
    top = float(values[0])
    if top == 0.0:
        raise ZeroMatrixError("cannot approximate the zero matrix")
    fro_sq = float(np.sum(values**2))
    rank = fro_sq / top**2
    if d is None:
        d = required_sample_size(rank, epsilon, delta, c_constant)
    sketch = sample_sketch(arr, d, seed)
    projector = projector_top_k(sketch, k)
    sigma_next = float(values[k]) if k < values.size else 0.0
    error = approximation_error(arr, projector)
    bound = sigma_next + epsilon * top
    gram_deviation = sym_spectral_norm(arr.T @ arr - sketch.gram())
    satisfied = bool(error <= bound + 1e-12 * max(1.0, bound))
    # small Gram deviation forces success: error^2 <= sigma^2 + 2*dev
    assert satisfied or gram_deviation > 0.5 * (epsilon * top) ** 2 - 1e-9
    report = ApproxReport(
        k=int(k),
        d=int(d),
        epsilon=float(epsilon),
        delta=float(delta),
        numerical_rank=rank,
        sigma_kplus1=sigma_next,
        error_spectral=error,
        bound=bound,
        gram_deviation=gram_deviation,
        satisfied=satisfied,
    )
    return projector, report


def _approximate_stream(stream, k, epsilon, delta, c_constant, seed, d):
    if stream.replayable:
        _, weights, total_sq, gram = stream_weights(stream, accumulate_gram=True)
        if total_sq <= 0.0:
            raise ZeroMatrixError("stream carried zero total weight")
        rank = total_sq / _power_top_eigenvalue(gram)
        if d is None:
            d = required_sample_size(max(1.0, rank), epsilon, delta, c_constant)
        rng = spawn(seed)
        positions = draw_weighted_indices(weights, d, rng)
        sketch = materialize_chosen(stream, positions, weights, total_sq, d, seed)
    else:
        if d is None:
            raise OutOfRangeError(
                "single-shot streams need an explicit sketch size d; "
                "the sample-size formula requires a replayable source"
            )
        sketch = sample_sketch_one_pass(stream, d, seed)
        rank = None
    projector = projector_top_k(sketch, k)
    report = ApproxReport(
        k=int(k),
        d=int(d),
        epsilon=float(epsilon),
        delta=float(delta),
        numerical_rank=None if rank is None else float(rank),
        sigma_kplus1=None,
        error_spectral=None,
        bound=None,
        gram_deviation=None,
        satisfied=None,
    )
    return projector, report


def block_identity_matrix(n: int, m: int) -> np.ndarray:
    """m x n matrix of m/n stacked identical-row blocks, orthonormal columns.

    Row i (1-based) has a single entry sqrt(n/m) in column ceil(n*i/m); each
    column carries m/n such entries, so spectral norm is 1 and the squared
    Frobenius norm is n.
    """
    if n < 1 or m <= n or m % n != 0:
        raise ShapeMismatchError(f"need n < m with n dividing m, got n={n}, m={m}")
    arr = np.zeros((m, n))
    value = math.sqrt(n / m)
    for i in range(1, m + 1):
        arr[i - 1, math.ceil(n * i / m) - 1] = value
    return arr


def _block_of_row(row_index: int, n: int, m: int) -> int:
    return math.ceil(n * (row_index + 1) / m) - 1


@dataclass(frozen=True)
class OptimalityResult:
    """Per-trial record of block coverage and projection failure."""

    failure_fraction: float
    missed_block_fraction: float
    failed: np.ndarray
    missed_blocks: np.ndarray
    errors: np.ndarray


def optimality_experiment(n: int, m: int, d: int, trials: int, seed: int = 0) -> OptimalityResult:
    """Sample the block-identity witness and test the full-rank projector.

    A trial "misses a block" when none of its rows is drawn; the witness
    column of that block then lies in the projector kernel and the
    approximation error is at least 1.
    """
    if d < 1:
        raise OutOfRangeError(f"d must be >= 1, got {d}")
    if trials < 1:
        raise OutOfRangeError(f"trials must be >= 1, got {trials}")
    arr = block_identity_matrix(n, m)

    def run(trial: int):
        sketch = sample_sketch(arr, d, spawn(seed, trial))
        blocks = {_block_of_row(int(i), n, m) for i in sketch.chosen_indices}
        missed = n - len(blocks)
        error = approximation_error(arr, projector_top_k(sketch, n))
        return missed, error

    outcomes = run_indexed(run, trials)
    missed_blocks = np.array([o[0] for o in outcomes], dtype=np.int64)
    errors = np.array([o[1] for o in outcomes])
    failed = errors >= 1.0 - 1e-6
    return OptimalityResult(
        failure_fraction=float(failed.mean()),
        missed_block_fraction=float((missed_blocks > 0).mean()),
        failed=failed,
        missed_blocks=missed_blocks,
        errors=errors,
    )
