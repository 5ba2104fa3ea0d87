"""
Pydantic schemas for run configuration (Pydantic v2)
Objective specs, acquisition and scalarizer settings, and the RunConfig itself.
"""
from __future__ import annotations

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from shared.utils.errors import ConfigError


# =============================================================================
# SYNTHETIC OBJECTIVE SPEC
# =============================================================================

class ObjectiveFamily(str, Enum):
    POWER_SUM = "PowerSum"
    COUPLED = "Coupled"


class SyntheticSpec(BaseModel):
    """Parameters of a synthetic performance objective"""
    model_config = ConfigDict(frozen=True)

    family: ObjectiveFamily = Field(..., description="PowerSum or Coupled")
    weights: Tuple[float, ...] = Field(..., description="Positive per-block weights")
    exponents: Tuple[float, ...] = Field(..., description="Positive per-block exponents")
    interaction: Optional[Tuple[Tuple[float, ...], ...]] = Field(
        None, description="Symmetric nonnegative d x d matrix (Coupled only)"
    )
    seed: int = 0

    @model_validator(mode="after")
    def _check_shapes(self) -> "SyntheticSpec":
        d = len(self.weights)
        if d < 1:
            raise ValueError("weights must not be empty")
        if len(self.exponents) != d:
            raise ValueError(f"exponents has {len(self.exponents)} entries, expected {d}")
        if any(not math.isfinite(w) or w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        # p < 1 is allowed; it gives concave fronts
        if any(not math.isfinite(p) or p <= 0 for p in self.exponents):
            raise ValueError("exponents must be positive")
        if self.family == ObjectiveFamily.COUPLED:
            if self.interaction is None:
                raise ValueError("Coupled family requires an interaction matrix")
            a = np.asarray(self.interaction, dtype=np.float64)
            if a.shape != (d, d):
                raise ValueError(f"interaction must be {d}x{d}, got {a.shape}")
            if not np.allclose(a, a.T) or (a < 0).any():
                raise ValueError("interaction must be symmetric and nonnegative")
        return self

    @property
    def d(self) -> int:
        return len(self.weights)

    @classmethod
    def from_seed(cls, family: Union[str, ObjectiveFamily], d: int, seed: int) -> "SyntheticSpec":
        """Draw weights U(0.5, 2), exponents U(1, 3) and, for Coupled, interactions U(0, 0.5)"""
        family = ObjectiveFamily(family)
        rng = np.random.default_rng(seed)
        weights = rng.uniform(0.5, 2.0, size=d)
        exponents = rng.uniform(1.0, 3.0, size=d)
        interaction = None
        if family == ObjectiveFamily.COUPLED:
            upper = np.triu(rng.uniform(0.0, 0.5, size=(d, d)), k=1)
            matrix = upper + upper.T
            interaction = tuple(tuple(float(v) for v in row) for row in matrix)
        return cls(
            family=family,
            weights=tuple(float(w) for w in weights),
            exponents=tuple(float(p) for p in exponents),
            interaction=interaction,
            seed=seed,
        )


# =============================================================================
# ACQUISITION / SCALARIZER
# =============================================================================

class AcquisitionKind(str, Enum):
    MEAN_ONLY = "mean_only"
    PESSIMISTIC = "pessimistic"
    OPTIMISTIC = "optimistic"


_ACQUISITION_ALIASES = {
    "none": AcquisitionKind.MEAN_ONLY,
    "mean": AcquisitionKind.MEAN_ONLY,
    "mean_only": AcquisitionKind.MEAN_ONLY,
    "paperlcb": AcquisitionKind.PESSIMISTIC,
    "pessimistic": AcquisitionKind.PESSIMISTIC,
    "optimistic": AcquisitionKind.OPTIMISTIC,
}


class AcquisitionConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: AcquisitionKind = AcquisitionKind.PESSIMISTIC
    kappa: float = Field(0.5, ge=0.0, description="Weight of the posterior std")

    @classmethod
    def parse(cls, text: str, kappa: float = 0.5) -> "AcquisitionConfig":
        """Parse 'none' | 'paperlcb' | 'optimistic', optionally prefixed 'acq:' and suffixed '@<kappa>'"""
        raw = text.strip().lower()
        if raw.startswith("acq:"):
            raw = raw[4:]
        if "@" in raw:
            raw, _, weight = raw.partition("@")
            try:
                kappa = float(weight)
            except ValueError:
                raise ValueError(f"Invalid kappa in '{text}'")
        if raw not in _ACQUISITION_ALIASES:
            raise ValueError(f"Unknown acquisition '{text}'. Allowed: none, paperlcb, optimistic")
        return cls(kind=_ACQUISITION_ALIASES[raw], kappa=kappa)

    @property
    def label(self) -> str:
        return f"{self.kind.value}@{self.kappa:g}"

    @property
    def effective_kappa(self) -> float:
        return 0.0 if self.kind == AcquisitionKind.MEAN_ONLY else self.kappa


class ScalarizerName(str, Enum):
    WEIGHTED_SUM = "ws"
    TCHEBYCHEFF = "tch"
    PBI = "pbi"


class ScalarizerKind(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ScalarizerName = ScalarizerName.TCHEBYCHEFF
    xi: Optional[float] = Field(None, description="PBI penalty, required and > 0 for pbi")

    @model_validator(mode="after")
    def _check_xi(self) -> "ScalarizerKind":
        if self.kind == ScalarizerName.PBI:
            if self.xi is None or not math.isfinite(self.xi) or self.xi <= 0:
                raise ValueError("PBI needs a penalty xi > 0")
        return self

    @classmethod
    def parse(cls, text: str) -> "ScalarizerKind":
        """Parse 'ws' | 'tch' | 'pbi:<xi>'"""
        raw = text.strip().lower()
        if raw == ScalarizerName.WEIGHTED_SUM.value:
            return cls(kind=ScalarizerName.WEIGHTED_SUM)
        if raw == ScalarizerName.TCHEBYCHEFF.value:
            return cls(kind=ScalarizerName.TCHEBYCHEFF)
        if raw.startswith("pbi:"):
            try:
                xi = float(raw.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"Invalid PBI penalty in '{text}'")
            return cls(kind=ScalarizerName.PBI, xi=xi)
        raise ValueError(f"Unknown scalarizer '{text}'. Allowed: ws, tch, pbi:<xi>")

    @property
    def label(self) -> str:
        if self.kind == ScalarizerName.PBI:
            return f"pbi:{self.xi:g}"
        return self.kind.value


# =============================================================================
# RUN CONFIG
# =============================================================================

REQUIRED_CONFIG_KEYS = ("d", "objective", "T", "seed")


class RunConfig(BaseModel):
    """Everything one training run depends on"""
    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1, description="Number of blocks")
    objective: SyntheticSpec
    T: int = Field(50, ge=1, description="Epochs")
    I: int = Field(1000, ge=1, description="StratNet steps per epoch")
    K: int = Field(8, ge=1, description="Requests sampled per step")
    N_init: int = Field(32, ge=2, description="Initial Latin-hypercube strategies")
    C_pool: int = Field(2240, ge=1, description="Candidate pool size")
    batch: int = Field(10, ge=1, description="New true evaluations per epoch")
    acquisition: AcquisitionConfig = Field(default_factory=AcquisitionConfig)
    scalarizer: ScalarizerKind = Field(default_factory=ScalarizerKind)
    lr: float = Field(1e-3, ge=0.0, description="StratNet learning rate")
    seed: int = 0
    eval_budget: Optional[int] = Field(None, ge=1, description="Cap on true evaluations")
    freeze_gp: bool = Field(False, description="Keep the initial GP for every epoch")
    hidden: int = Field(64, ge=1, description="Hidden width of StratNet")
    pool_jitter: float = Field(0.5, ge=0.0, le=1.0, description="Pool λ jitter, in grid spacings")

    @model_validator(mode="before")
    @classmethod
    def _expand_shorthand(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        objective = data.get("objective")
        if isinstance(objective, dict) and "weights" not in objective and "d" in data:
            generated = SyntheticSpec.from_seed(
                objective.get("family", ObjectiveFamily.POWER_SUM),
                int(data["d"]),
                int(objective.get("seed", 0)),
            )
            data["objective"] = generated.model_dump()
        acquisition = data.get("acquisition")
        if isinstance(acquisition, str):
            data["acquisition"] = AcquisitionConfig.parse(acquisition)
        scalarizer = data.get("scalarizer")
        if isinstance(scalarizer, str):
            data["scalarizer"] = ScalarizerKind.parse(scalarizer)
        return data

    @model_validator(mode="after")
    def _check_dimension(self) -> "RunConfig":
        if self.objective.d != self.d:
            raise ValueError(f"objective has {self.objective.d} blocks but d = {self.d}")
        return self


def parse_run_config(data: Dict[str, Any]) -> RunConfig:
    """Validate a raw config dict, collecting every offending field into one ConfigError"""
    fields: List[str] = [key for key in REQUIRED_CONFIG_KEYS if key not in data]
    details: List[str] = [f"{key}: missing" for key in fields]
    try:
        cfg = RunConfig.model_validate(data)
    except ValidationError as e:
        for err in e.errors():
            loc = ".".join(str(part) for part in err["loc"]) or "<root>"
            if loc not in fields:
                fields.append(loc)
                details.append(f"{loc}: {err['msg']}")
        raise ConfigError(fields, details)
    except ValueError as e:
        raise ConfigError(fields or ["<root>"], details + [str(e)])
    if fields:
        raise ConfigError(fields, details)
    return cfg


def load_run_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(["<file>"], [f"config file not found: {path}"])
    except json.JSONDecodeError as e:
        raise ConfigError(["<file>"], [f"invalid JSON: {e}"])
    if not isinstance(data, dict):
        raise ConfigError(["<root>"], ["config must be a JSON object"])
    return parse_run_config(data)
