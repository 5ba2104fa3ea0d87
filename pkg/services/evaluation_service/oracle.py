"""
Brute-force Pareto-front oracle for synthetic objectives
"""
import heapq
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from config.settings import settings
from shared.schemas import ObjectivePair, ObjectiveSource, Strategy
from shared.utils.errors import BudgetExceededError, InvalidArgumentError
from services.domain_service import size_objective_batch
from services.pareto_service import nondominated_indices
from .objectives import BlackBoxObjective, SyntheticObjective

OracleFront = List[Tuple[Strategy, ObjectivePair]]

_CHUNK = 1_000_000


def _to_front(xs: np.ndarray, f1: np.ndarray, f2: np.ndarray) -> OracleFront:
    keep = nondominated_indices(np.column_stack([f1, f2]))
    return [
        (
            Strategy.from_array(xs[i]),
            ObjectivePair(f1=float(f1[i]), f2=float(f2[i]), f2_source=ObjectiveSource.TRUE),
        )
        for i in keep
    ]


def greedy_allocation_front(obj: SyntheticObjective, grid_resolution: int) -> OracleFront:
    """
    Separable convex case: hand out sparsity in quanta of 1/(R-1), always to the
    block with the smallest f2 increase. Allocations for consecutive totals are
    nested, so one pass yields the minimal f2 at every grid mean sparsity.
    """
    steps = grid_resolution - 1
    q = 1.0 / steps
    w = obj.weights / obj.normalizer
    p = obj.exponents
    d = obj.dimension

    def marginal(i: int, level: int) -> float:
        return float(w[i] * (((level + 1) * q) ** p[i] - (level * q) ** p[i]))

    levels = np.zeros(d, dtype=np.int64)
    heap = [(marginal(i, 0), i) for i in range(d)]
    heapq.heapify(heap)

    rows = [levels.copy()]
    while heap:
        _, i = heapq.heappop(heap)
        levels[i] += 1
        rows.append(levels.copy())
        if levels[i] < steps:
            heapq.heappush(heap, (marginal(i, int(levels[i])), i))

    xs = np.asarray(rows, dtype=np.float64) * q
    return _to_front(xs, size_objective_batch(xs), obj.evaluate_batch(xs))


def grid_front(obj: BlackBoxObjective, grid_resolution: int, max_points: Optional[int] = None) -> OracleFront:
    """Full enumeration of the regular grid followed by nondominated filtering"""
    d = obj.dimension
    max_points = settings.ORACLE_MAX_GRID if max_points is None else max_points
    total = grid_resolution ** d
    if total > max_points:
        raise BudgetExceededError(
            f"grid of {grid_resolution}^{d} = {total} points exceeds the oracle limit of {max_points}"
        )

    levels = np.linspace(0.0, 1.0, grid_resolution)
    shape = (grid_resolution,) * d
    kept_x = np.empty((0, d))
    kept_f = np.empty((0, 2))

    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total))
        xs = levels[np.stack(np.unravel_index(flat, shape), axis=1)]
        f = np.column_stack([size_objective_batch(xs), obj.evaluate_batch(xs)])
        xs = np.vstack([kept_x, xs])
        f = np.vstack([kept_f, f])
        keep = nondominated_indices(f)
        kept_x, kept_f = xs[keep], f[keep]

    return _to_front(kept_x, kept_f[:, 0], kept_f[:, 1])


def pareto_oracle(obj: BlackBoxObjective, grid_resolution: int) -> OracleFront:
    """Nondominated (strategy, objectives) set of `obj` at the given grid resolution"""
    if grid_resolution < 2:
        raise InvalidArgumentError("grid_resolution must be >= 2")

    if isinstance(obj, SyntheticObjective) and obj.separable and bool(np.all(obj.exponents >= 1.0)):
        logger.info(f"Oracle: greedy allocation, d={obj.dimension}, resolution={grid_resolution}")
        return greedy_allocation_front(obj, grid_resolution)

    logger.info(f"Oracle: full grid enumeration, d={obj.dimension}, resolution={grid_resolution}")
    return grid_front(obj, grid_resolution)
