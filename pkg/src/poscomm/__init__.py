"""Positive matrices and truncated block operators as commutators of positive operators."""

from .band_structure import (
    BandDecomposition,
    SuperTriangularReport,
    absolute_kernel,
    band_decomposition,
    super_index,
    triangularizing_order,
)
from .certificate import CommutatorCertificate, verify_certificate
from .errors import (
    NegativeEntryError,
    NotNilpotentError,
    PoscommError,
    PreconditionError,
    ShapeError,
    VerificationError,
)
from .exact_linalg import (
    Matrix,
    NormReport,
    commutator,
    matmul,
    nilpotency_index,
    norms,
    spectral_radius_bound,
)
from .nilpotent import (
    Obstruction,
    characterize_nilpotent_pair,
    construct_central_nilpotent,
    construct_jordan,
    necessity_two_super,
)
from .pelczynski import (
    BlockPartition,
    EmbeddingPair,
    EpsilonSchedule,
    TruncatedBlockOperator,
    band_projection_decay,
    build_A,
    build_B,
    dominating_matrix_U,
    end_to_end,
    lp_embedding,
    regroup_blocks,
    verify_commutator_window,
)
from .quasinilpotent import (
    ShiftSpec,
    WeightData,
    construct_diagonal_quasi,
    diag_factorization_lower_bound,
    summability_stats,
    weighted_shift,
    zero_diagonal_check,
)

__version__ = "0.1.0"
