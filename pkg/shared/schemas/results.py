"""
Pydantic schemas for training results and answered requests (Pydantic v2)
"""
from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from .domain import ObjectiveSource, Request, Strategy


class EpochMetrics(BaseModel):
    """One row of metrics.csv"""
    model_config = ConfigDict(frozen=True)

    epoch: int
    dataset_size: int
    true_evals: int
    hv_true_front: float
    mean_g_tch: float
    gp_loglik: float
    wall_ms: float = 0.0


class Provenance(BaseModel):
    """Where a dataset strategy came from"""
    model_config = ConfigDict(frozen=True)

    epoch: int = Field(..., description="0 for the initial design")
    pool_index: Optional[int] = Field(None, description="Index in the epoch's candidate pool")
    lambda1: Optional[float] = Field(None, description="Request that generated the candidate")


class AnsweredRequest(BaseModel):
    """A strategy produced for a request, with surrogate objective values"""
    model_config = ConfigDict(frozen=True)

    request: Request
    strategy: Strategy
    f1: float
    f2_hat: float
    f2_source: ObjectiveSource = ObjectiveSource.SURROGATE
