"""
Size objective, request sampling and strategy binarization
"""
from typing import Optional, Union

import numpy as np

from shared.schemas import BinarizeKind, BinarizeMode, Request, Strategy
from shared.utils.errors import InvalidArgumentError

StrategyLike = Union[Strategy, np.ndarray]

# f1 at the all-ones strategy
SIZE_LOWER_BOUND = 0.0


def _values(x: StrategyLike) -> np.ndarray:
    if isinstance(x, Strategy):
        return x.as_array()
    return np.asarray(x, dtype=np.float64)


def check_dimension(x: StrategyLike, d: int) -> None:
    n = _values(x).shape[-1]
    if n != d:
        raise InvalidArgumentError(f"strategy has {n} blocks, problem is configured for {d}")


def size_objective(x: StrategyLike) -> float:
    """f1 = 1 - mean sparsity"""
    values = _values(x)
    f1 = 1.0 - float(values.sum()) / values.shape[-1]
    return min(1.0, max(0.0, f1))


def size_objective_batch(xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.float64)
    return np.clip(1.0 - xs.mean(axis=1), 0.0, 1.0)


def size_objective_gradient(d: int) -> np.ndarray:
    return np.full(d, -1.0 / d)


def sample_request(rng: np.random.Generator) -> Request:
    """λ1 ~ U(0, 1), λ2 = 1 - λ1"""
    return Request.from_lambda1(rng.uniform(0.0, 1.0))


def binarize(x: StrategyLike, mode: Optional[BinarizeMode] = None) -> Strategy:
    mode = mode or BinarizeMode()
    values = _values(x)
    d = values.shape[-1]

    if mode.kind == BinarizeKind.THRESHOLD:
        return Strategy.from_array((values >= 0.5).astype(np.float64))

    if mode.k > d:
        raise InvalidArgumentError(f"top-k needs k <= d, got k={mode.k}, d={d}")
    # stable sort on -x keeps the lower index first among ties
    order = np.argsort(-values, kind="stable")
    out = np.zeros(d)
    out[order[: mode.k]] = 1.0
    return Strategy.from_array(out)
