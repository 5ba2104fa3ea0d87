from .scalarizers import (
    TIE_TOLERANCE,
    BranchSelection,
    weighted_sum,
    tchebycheff,
    tch_gradient_weights,
    pbi,
    pbi_gradient,
    scalarize,
    scalarize_with_weights,
)

__all__ = [
    "TIE_TOLERANCE",
    "BranchSelection",
    "weighted_sum",
    "tchebycheff",
    "tch_gradient_weights",
    "pbi",
    "pbi_gradient",
    "scalarize",
    "scalarize_with_weights",
]
