"""startrace: exact verification and classification of trace- and
orthogonality-compatible bilinear products on n x n matrix algebras.

All arithmetic is exact (arbitrary-precision rationals or prime-field
residues); every identity is checked with zero tolerance.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    DecompositionFailed,
    DimensionMismatch,
    DivisionByZero,
    ExactAlgebraError,
    IndexOutOfRange,
    InfiniteField,
    InvalidField,
    MixedFields,
    NotNormalized,
    NotTraceless,
    SamplingFailed,
    SearchSpaceTooLarge,
    UnparameterizableSolution,
)
from .fields import RATIONALS, PrimeField, Rationals, field_from_string  # noqa: F401
from .matrices import (  # noqa: F401
    IdempotentPair,
    Matrix,
    decompose_as_commutator,
    commutator,
    enumerate_rank_one_idempotents,
    orthogonal_idempotent_pairs,
    rank_one_idempotent,
    sample_orthogonal_idempotent_pair,
)
from .perturbation import (  # noqa: F401
    PerturbationMap,
    associativity_residual,
    extract_scale_shift,
    identity_map,
    map_from_images,
    preserves_traceless,
    residual_scan,
    scale_admissible,
    scale_trace_map,
    trace_entry,
    vanishing_suite,
    zero_map,
)
from .products import (  # noqa: F401
    AxiomReport,
    StructureTensor,
    check_associativity,
    check_identity,
    check_orthogonality,
    check_trace,
    classify_product,
    opposite_tensor,
    ordinary_tensor,
    star_eval,
    tensor_from_bilinear,
    tensor_from_perturbation,
)
from .classify import (  # noqa: F401
    ClassificationReport,
    ConstraintSystem,
    adjudicate_char2_product,
    assemble_constraints,
    classify_brute,
    classify_symbolic,
    solve_linear_space,
)
