"""
Pydantic value types for strategies, requests and objective values (Pydantic v2)
All types are immutable once constructed.
"""
from __future__ import annotations

import math
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

REQUEST_TOLERANCE = 1e-9


# =============================================================================
# STRATEGY / REQUEST
# =============================================================================

class Strategy(BaseModel):
    """Per-block sparsity ratios, each in [0, 1]"""
    model_config = ConfigDict(frozen=True)

    values: Tuple[float, ...] = Field(..., description="Sparsity ratio of each block")

    @field_validator("values")
    @classmethod
    def _check_values(cls, values: Tuple[float, ...]) -> Tuple[float, ...]:
        if len(values) < 1:
            raise ValueError("a strategy needs at least one block")
        for i, v in enumerate(values):
            if not math.isfinite(v) or v < 0.0 or v > 1.0:
                raise ValueError(f"block {i} sparsity {v!r} is outside [0, 1]")
        return values

    @property
    def d(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    @classmethod
    def from_array(cls, values: Iterable[float]) -> "Strategy":
        return cls(values=tuple(float(v) for v in values))


class Request(BaseModel):
    """A trade-off request on the 2-simplex"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: Tuple[float, float] = Field(..., alias="lambda", description="(λ1, λ2), nonnegative, summing to 1")

    @field_validator("lam")
    @classmethod
    def _check_simplex(cls, lam: Tuple[float, float]) -> Tuple[float, float]:
        l1, l2 = lam
        if not (math.isfinite(l1) and math.isfinite(l2)):
            raise ValueError("request weights must be finite")
        if l1 < 0.0 or l2 < 0.0:
            raise ValueError(f"request weights must be nonnegative, got {lam}")
        if abs(l1 + l2 - 1.0) > REQUEST_TOLERANCE:
            raise ValueError(f"request weights must sum to 1, got {l1 + l2!r}")
        return lam

    @property
    def lambda1(self) -> float:
        return self.lam[0]

    @property
    def lambda2(self) -> float:
        return self.lam[1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.lam, dtype=np.float64)

    @classmethod
    def from_lambda1(cls, lambda1: float) -> "Request":
        lambda1 = float(lambda1)
        return cls(lam=(lambda1, 1.0 - lambda1))


# =============================================================================
# OBJECTIVE VALUES
# =============================================================================

class ObjectiveSource(str, Enum):
    TRUE = "true"
    SURROGATE = "surrogate"


class ObjectivePair(BaseModel):
    """(f1, f2) for one strategy, with the provenance of f2"""
    model_config = ConfigDict(frozen=True)

    f1: float = Field(..., ge=0.0, le=1.0, description="Size objective")
    f2: float = Field(..., description="Performance objective")
    f2_source: ObjectiveSource = ObjectiveSource.TRUE

    @field_validator("f2")
    @classmethod
    def _finite_f2(cls, f2: float) -> float:
        if not math.isfinite(f2):
            raise ValueError("f2 must be finite")
        return f2

    def as_tuple(self) -> Tuple[float, float]:
        return (self.f1, self.f2)


class IdealPoint(BaseModel):
    """Componentwise lower bounds of (f1, f2)"""
    model_config = ConfigDict(frozen=True)

    z: Tuple[float, float]

    @model_validator(mode="after")
    def _finite(self) -> "IdealPoint":
        if not all(math.isfinite(v) for v in self.z):
            raise ValueError("ideal point must be finite")
        return self

    @classmethod
    def from_pairs(
        cls,
        pairs: Sequence[ObjectivePair],
        margin: float,
        bounds: Optional[Tuple[Optional[float], Optional[float]]] = None,
    ) -> "IdealPoint":
        """
        Running minimum of the observed objectives minus `margin`. A known
        lower bound of an objective replaces its running minimum when lower.
        """
        if not pairs:
            raise ValueError("cannot derive an ideal point from an empty dataset")
        f = np.array([p.as_tuple() for p in pairs], dtype=np.float64)
        low = f.min(axis=0)
        for i, bound in enumerate(bounds or (None, None)):
            if bound is not None:
                low[i] = min(low[i], float(bound))
        low = low - margin
        return cls(z=(float(low[0]), float(low[1])))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.z, dtype=np.float64)


# =============================================================================
# BINARIZATION MODE
# =============================================================================

class BinarizeKind(str, Enum):
    THRESHOLD = "threshold"
    TOP_K = "topk"


class BinarizeMode(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: BinarizeKind = BinarizeKind.THRESHOLD
    k: int = Field(0, ge=0, description="Number of ones for top-k mode")

    @classmethod
    def parse(cls, text: str) -> "BinarizeMode":
        """Parse 'threshold' or 'topk:<k>'"""
        raw = text.strip().lower()
        if raw == BinarizeKind.THRESHOLD.value:
            return cls(kind=BinarizeKind.THRESHOLD)
        if raw.startswith("topk:"):
            try:
                k = int(raw.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"Invalid top-k count in '{text}'")
            return cls(kind=BinarizeKind.TOP_K, k=k)
        raise ValueError(f"Unknown binarize mode '{text}'. Allowed: threshold, topk:<k>")


def strategies_to_matrix(strategies: Sequence[Strategy]) -> np.ndarray:
    return np.array([s.values for s in strategies], dtype=np.float64)
