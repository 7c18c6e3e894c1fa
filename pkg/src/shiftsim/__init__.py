"""Similarity analysis for rank-one perturbations of the backward shift.

The package decides when two perturbed shifts ``U + r (x) phi`` and
``U + s (x) phi`` acting on the Hardy space are similar, constructs an
explicit rational witness when they are, and cross-checks the underlying
twisted-multiplication algebra against truncated-matrix oracles.
"""

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (
    BoundaryAmbiguous,
    IdenticallyZero,
    ChainBreaks,
    IndeterminateKernel,
    NoCircleSolution,
    NotCircleInvertible,
    PhiZero,
    PoleInDisc,
    ShiftSimError,
    TruncationUnsound,
)
from .hardy import (
    all_zeros,
    gamma_minus_fn,
    gamma_plus,
    inner_product,
    ord_at,
    toeplitz_conj_apply,
    zeros_in_closed_disc,
)
from .operators import (
    K_matrix_via_times,
    K_matrix_via_toeplitz,
    TruncatedOperator,
    intertwine_residual,
    jordan_chain,
    kernel_dim,
    kernel_dim_formula,
    truncate_U_r,
)
from .ratfun import RatFunc, conj_reflect, kernel_fn, sup_circle
from .staralg import (
    PhiContext,
    SimilarityReport,
    StructureData,
    build_phi_context,
    circle,
    circle_inverse,
    from_structure,
    is_circle_invertible,
    lift_symbol,
    similar,
    solve_circle,
    times,
    to_structure,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryAmbiguous",
    "ChainBreaks",
    "DEFAULT_TOL",
    "IdenticallyZero",
    "IndeterminateKernel",
    "K_matrix_via_times",
    "K_matrix_via_toeplitz",
    "NoCircleSolution",
    "NotCircleInvertible",
    "PhiContext",
    "PhiZero",
    "PoleInDisc",
    "RatFunc",
    "ShiftSimError",
    "SimilarityReport",
    "StructureData",
    "ToleranceConfig",
    "TruncatedOperator",
    "TruncationUnsound",
    "__version__",
    "all_zeros",
    "build_phi_context",
    "circle",
    "circle_inverse",
    "conj_reflect",
    "from_structure",
    "gamma_minus_fn",
    "gamma_plus",
    "inner_product",
    "intertwine_residual",
    "is_circle_invertible",
    "jordan_chain",
    "kernel_dim",
    "kernel_dim_formula",
    "kernel_fn",
    "lift_symbol",
    "ord_at",
    "similar",
    "solve_circle",
    "sup_circle",
    "times",
    "to_structure",
    "toeplitz_conj_apply",
    "truncate_U_r",
    "zeros_in_closed_disc",
]
