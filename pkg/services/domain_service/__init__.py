from .objectives import (
    SIZE_LOWER_BOUND,
    check_dimension,
    size_objective,
    size_objective_batch,
    size_objective_gradient,
    sample_request,
    binarize,
)

__all__ = [
    "SIZE_LOWER_BOUND",
    "check_dimension",
    "size_objective",
    "size_objective_batch",
    "size_objective_gradient",
    "sample_request",
    "binarize",
]
