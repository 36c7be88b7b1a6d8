"""Exact Haar *-moments on deformed free orthogonal quantum groups.

Combinatorial substrate (non-crossing pairings), deformed Weingarten
calculus with exact rational tables, Haar *-moments with the adjoint
translation, free semicircular / generalized circular limit families with a
truncated Fock-space oracle, convergence harnesses for the 1/N_F freeness
rates, and state-level rotation-invariance checks.
"""

from .asymptotics import (
    ConvergenceRow,
    build_gamma,
    build_large_rank,
    convergence_table,
    freeness_error,
    standard_word_suite,
    weingarten_diagonality_error,
)
from .deformation import (
    CanonicalSpec,
    FactorType,
    FMatrix,
    NonCanonicalF,
    NonMonomialF,
    NotAdmissible,
    build_canonical,
    classify_factor_type,
    translate_star,
    validate,
)
from .fock import (
    CutoffTooSmallWarning,
    FockOperator,
    TruncatedFock,
    annihilation,
    creation,
    gc_from_spec,
    gc_operator,
    vacuum_expectation,
)
from .freedist import (
    GCSpec,
    GENERALIZED_CIRCULAR,
    LimitFamily,
    SEMICIRCULAR,
    araki_woods_lambda,
    free_moment,
    free_product_moment,
    haar_unitary_moments,
    limit_family,
    standard_semicircular,
    unitary_star_moment,
)
from .haar import (
    EMPTY_WORD,
    StarWord,
    haar_moment,
    haar_star_moment,
    plain_word,
    schur_covariance,
    variance_matrix,
)
from .partitions import (
    PLAIN,
    STAR,
    Pairing,
    Partition,
    enumerate_nc2,
    enumerate_nc2_eps,
    join_block_count,
    kernel_refines,
)
from .scalars import ExactScalar, format_scalar, parse_rational, parse_scalar
from .symmetry import (
    InvarianceReport,
    invariance_check,
    rotation_invariant_family,
    weak_q_relation_check,
    weak_unitarity_check,
)
from .weingarten import (
    BudgetExceeded,
    MAX_WORD_LENGTH,
    WeingartenTable,
    delta,
    gram_bruteforce,
    gram_closed,
    weingarten,
)

__version__ = "0.1.0"
