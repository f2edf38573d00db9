"""matsketch: randomized row sampling, low-rank approximation, and
submatrix norm-decay experiments for dense real matrices."""

from .approx import (
    ApproxReport,
    BoundCheck,
    OptimalityResult,
    Projector,
    approximation_error,
    block_identity_matrix,
    low_rank_approximate,
    optimality_experiment,
    projection_error_bound,
    projector_top_k,
)
from .cutnorm import (
    CutNormResult,
    DecayEstimate,
    SubsetMask,
    bernoulli_subset,
    cut_decay_estimate,
    cut_norm_exact,
    full_mask,
    inf_to_one_norm_exact,
    order_statistics_check,
    restrict,
    sign_matrix_lower_bound,
    spectral_decay_estimate,
    witness_all_ones,
    witness_identity,
    witness_random_sign,
)
from .errors import (
    ConvergenceError,
    Error,
    InvalidMatrixError,
    NotReplayableError,
    NotSignMatrixError,
    NotSortedError,
    NotSquareError,
    OutOfRangeError,
    ParseError,
    ShapeMismatchError,
    TooLargeError,
    ZeroMatrixError,
)
from .linalg import (
    SvdResult,
    column_norm_sum,
    diagonal_part,
    frobenius_norm,
    numerical_rank,
    spectral_norm,
    svd,
    sym_spectral_norm,
    top_k_column_average,
)
from .lln import (
    DeviationStats,
    VectorEnsemble,
    empirical_second_moment,
    lln_deviation,
    matrix_rows_ensemble,
    rademacher_moment_check,
    scaled_basis_ensemble,
    tail_bound_eval,
)
from .matio import ingest, open_stream, read_matrix, write_binary, write_csv, write_matrixmarket
from .reports import ExperimentReport
from .sampling import (
    SamplingPlan,
    Sketch,
    required_sample_size,
    row_distribution,
    sample_sketch,
    sample_sketch_one_pass,
    sample_sketch_two_pass,
)
from .streams import IterableRowStream, MatrixRowStream, RowStream

__version__ = "0.1.0"
