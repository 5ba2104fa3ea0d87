"""
Initial design and candidate-pool request sampling
"""
import numpy as np

from shared.utils.errors import InvalidArgumentError


def latin_hypercube(n_samples: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """
    One point per stratum in every coordinate: each column is an independent
    permutation of the n cells plus a uniform offset inside the cell.
    """
    if n_samples < 1 or d < 1:
        raise InvalidArgumentError(f"latin hypercube needs n >= 1 and d >= 1, got n={n_samples}, d={d}")
    cells = np.column_stack([rng.permutation(n_samples) for _ in range(d)]).astype(np.float64)
    return (cells + rng.uniform(0.0, 1.0, size=(n_samples, d))) / n_samples


def pool_requests(count: int, rng: np.random.Generator, jitter: float = 0.5) -> np.ndarray:
    """
    λ1 values on a uniform grid over [0, 1], each moved by up to `jitter`
    grid spacings and clipped to the simplex.
    """
    if count < 1:
        raise InvalidArgumentError(f"pool size must be >= 1, got {count}")
    if count == 1:
        return np.array([rng.uniform(0.0, 1.0)])
    grid = np.linspace(0.0, 1.0, count)
    spacing = 1.0 / (count - 1)
    offsets = rng.uniform(-jitter, jitter, size=count) * spacing
    return np.clip(grid + offsets, 0.0, 1.0)
