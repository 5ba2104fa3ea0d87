"""
Greedy hypervolume-improvement batch selection and objective normalization
"""
from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np
from loguru import logger

from config.settings import settings
from shared.schemas import Strategy
from .hypervolume import FrontSet, as_points, marginal_hvi


class ObjectiveNormalizer:
    """Min-max scaling of (f1, f2) by the ranges of a reference set"""

    def __init__(self, points):
        arr = as_points(points)
        if len(arr) == 0:
            raise ValueError("cannot normalize against an empty point set")
        self.low = arr.min(axis=0)
        span = arr.max(axis=0) - self.low
        self.span = np.where(span > 0.0, span, 1.0)

    def transform(self, points) -> np.ndarray:
        return (as_points(points) - self.low) / self.span


def _first_occurrences(strategies, count: int) -> np.ndarray:
    """Mask keeping the first row of every distinct (rounded) strategy"""
    keep = np.ones(count, dtype=bool)
    if strategies is None:
        return keep
    X = np.round(np.asarray(strategies, dtype=np.float64).reshape(count, -1), settings.CACHE_DECIMALS)
    _, first = np.unique(X, axis=0, return_index=True)
    keep[:] = False
    keep[first] = True
    return keep


def select_batch_indices(
    existing_points,
    reference,
    pool_objectives,
    batch: int,
    strategies=None,
) -> List[int]:
    """
    Greedy HVI selection over pool objective pairs.

    Each round picks the largest marginal HVI against existing ∪ selected,
    ties broken by smaller f2 and then by pool index. Once every remaining
    marginal HVI is zero the rest is filled with the smallest-f2 candidates.
    When `strategies` is given, repeated strategies are only picked once.
    """
    pool = as_points(pool_objectives)
    if len(pool) == 0:
        raise ValueError("candidate pool is empty")
    if batch < 1:
        raise ValueError("batch must be >= 1")

    available = _first_occurrences(strategies, len(pool))
    n_pick = min(batch, int(available.sum()))
    front = as_points(existing_points)
    chosen: List[int] = []
    index = np.arange(len(pool))

    while len(chosen) < n_pick:
        scores = marginal_hvi(front, reference, pool)
        scores[~available] = -np.inf
        best = scores.max()
        if best <= 0.0:
            break
        order = np.lexsort((index, pool[:, 1], -scores))
        pick = int(order[0])
        chosen.append(pick)
        available[pick] = False
        front = np.vstack([front, pool[pick]])

    if len(chosen) < n_pick:
        remaining = index[available]
        fill = remaining[np.lexsort((remaining, pool[remaining, 1]))]
        needed = n_pick - len(chosen)
        logger.debug(f"HVI exhausted after {len(chosen)} picks, filling {needed} by smallest f2")
        chosen.extend(int(i) for i in fill[:needed])

    return chosen


def select_batch(
    existing: FrontSet,
    pool: Sequence[Tuple[Strategy, Tuple[float, float]]],
    batch: int,
) -> List[Strategy]:
    objectives = [obj for _, obj in pool]
    strategies = np.array([s.values for s, _ in pool], dtype=np.float64) if pool else None
    picks = select_batch_indices(existing.as_array(), existing.reference, objectives, batch, strategies)
    return [pool[i][0] for i in picks]
