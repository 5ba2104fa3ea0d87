"""
Black-box performance objectives

The expensive objective is an interface; the synthetic families below are
analytically tractable stand-ins whose Pareto fronts can be brute-forced.
"""
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from shared.schemas import ObjectiveFamily, SyntheticSpec


class BlackBoxObjective(ABC):
    """Deterministic, expensive f2(x) >= 0"""

    # nominal cost of one call, abstract units
    cost_per_call: float = 1.0
    # known infimum of f2, when the objective can declare one
    lower_bound: Optional[float] = None

    @property
    @abstractmethod
    def dimension(self) -> int:
        ...

    @abstractmethod
    def evaluate(self, x: np.ndarray) -> float:
        ...

    def evaluate_batch(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self.evaluate(row) for row in np.asarray(xs, dtype=np.float64)])


class SyntheticObjective(BlackBoxObjective):
    """PowerSum / Coupled families, normalized to f2(0) = 0 and f2(1) = 1"""

    lower_bound = 0.0

    def __init__(self, spec: SyntheticSpec):
        self.spec = spec
        self.weights = np.asarray(spec.weights, dtype=np.float64)
        self.exponents = np.asarray(spec.exponents, dtype=np.float64)
        if spec.family == ObjectiveFamily.COUPLED:
            # strict upper triangle carries the i<j pairs
            self.interaction = np.triu(np.asarray(spec.interaction, dtype=np.float64), k=1)
        else:
            self.interaction = None
        self.normalizer = float(self.weights.sum())
        if self.interaction is not None:
            self.normalizer += float(self.interaction.sum())

    @property
    def dimension(self) -> int:
        return self.spec.d

    @property
    def separable(self) -> bool:
        return self.spec.family == ObjectiveFamily.POWER_SUM

    def evaluate(self, x: np.ndarray) -> float:
        return float(self.evaluate_batch(np.asarray(x, dtype=np.float64)[None, :])[0])

    def evaluate_batch(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        total = np.power(xs, self.exponents[None, :]) @ self.weights
        if self.interaction is not None:
            total = total + np.einsum("ni,ij,nj->n", xs, self.interaction, xs)
        return total / self.normalizer
