from .hypervolume import (
    FrontSet,
    as_points,
    nondominated_indices,
    nondominated,
    dominates,
    staircase,
    hypervolume_of,
    hypervolume,
    hvi,
    marginal_hvi,
)
from .selection import ObjectiveNormalizer, select_batch_indices, select_batch

__all__ = [
    "FrontSet",
    "as_points",
    "nondominated_indices",
    "nondominated",
    "dominates",
    "staircase",
    "hypervolume_of",
    "hypervolume",
    "hvi",
    "marginal_hvi",
    "ObjectiveNormalizer",
    "select_batch_indices",
    "select_batch",
]
