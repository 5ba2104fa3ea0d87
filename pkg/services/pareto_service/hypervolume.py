"""
Two-objective hypervolume, hypervolume improvement and nondominated filtering.
All objectives are minimized.
"""
from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

Point = Tuple[float, float]


class FrontSet(BaseModel):
    """A set of objective points together with the HV reference point"""
    model_config = ConfigDict(frozen=True)

    points: Tuple[Point, ...] = Field(default_factory=tuple)
    reference: Point

    @field_validator("reference")
    @classmethod
    def _finite_reference(cls, reference: Point) -> Point:
        if not all(np.isfinite(reference)):
            raise ValueError("reference point must be finite")
        return reference

    def as_array(self) -> np.ndarray:
        return as_points(self.points)

    def with_points(self, extra: Sequence[Point]) -> "FrontSet":
        return FrontSet(points=tuple(self.points) + tuple(tuple(p) for p in extra), reference=self.reference)


def as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.size == 0:
        return np.empty((0, 2))
    return arr.reshape(-1, 2)


# ============================================
# NONDOMINATED FILTERING
# ============================================
def nondominated_indices(points) -> np.ndarray:
    """Indices of the minimal nondominated subset, ordered by f1 ascending"""
    arr = as_points(points)
    if len(arr) == 0:
        return np.empty(0, dtype=np.int64)
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    keep = []
    best_f2 = np.inf
    for idx in order:
        f2 = arr[idx, 1]
        if f2 < best_f2:
            keep.append(idx)
            best_f2 = f2
    return np.asarray(keep, dtype=np.int64)


def nondominated(points) -> List[Point]:
    arr = as_points(points)
    return [(float(arr[i, 0]), float(arr[i, 1])) for i in nondominated_indices(arr)]


def dominates(a: Point, b: Point) -> bool:
    return a[0] <= b[0] and a[1] <= b[1] and (a[0] < b[0] or a[1] < b[1])


# ============================================
# HYPERVOLUME
# ============================================
def _inside_reference(arr: np.ndarray, reference: np.ndarray) -> np.ndarray:
    return arr[(arr[:, 0] < reference[0]) & (arr[:, 1] < reference[1])]


def staircase(points, reference) -> np.ndarray:
    """Nondominated points strictly inside the reference box, sorted by f1"""
    ref = np.asarray(reference, dtype=np.float64)
    inside = _inside_reference(as_points(points), ref)
    return inside[nondominated_indices(inside)]


def hypervolume_of(points, reference) -> float:
    ref = np.asarray(reference, dtype=np.float64)
    front = staircase(points, ref)
    if len(front) == 0:
        return 0.0
    next_f1 = np.append(front[1:, 0], ref[0])
    return float(np.sum((next_f1 - front[:, 0]) * (ref[1] - front[:, 1])))


def hypervolume(fs: FrontSet) -> float:
    """Exact 2-D hypervolume by the sweep method"""
    return hypervolume_of(fs.points, fs.reference)


def hvi(existing: FrontSet, candidates: Sequence[Point]) -> float:
    """HV(existing ∪ candidates) - HV(existing)"""
    base = hypervolume(existing)
    joint = hypervolume(existing.with_points(candidates))
    return max(0.0, joint - base)


def marginal_hvi(front_points, reference, candidates) -> np.ndarray:
    """Single-point HVI of every candidate against `front_points`, vectorized"""
    ref = np.asarray(reference, dtype=np.float64)
    cand = as_points(candidates)
    front = staircase(front_points, ref)

    starts = np.concatenate(([-np.inf], front[:, 0]))
    ends = np.concatenate((front[:, 0], [ref[0]]))
    heights = np.concatenate(([ref[1]], front[:, 1]))

    a = cand[:, 0:1]
    b = cand[:, 1:2]
    widths = np.clip(ends[None, :] - np.maximum(starts[None, :], a), 0.0, None)
    rises = np.clip(heights[None, :] - b, 0.0, None)
    scores = np.sum(widths * rises, axis=1)
    outside = (cand[:, 0] >= ref[0]) | (cand[:, 1] >= ref[1])
    scores[outside] = 0.0
    return scores
