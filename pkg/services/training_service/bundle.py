"""
Trained bundle: the final network and surrogate, plus request answering and
front sweeps that cost no true evaluations unless asked to
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
from loguru import logger

from config.settings import settings
from services.domain_service import binarize, size_objective_batch
from services.evaluation_service import EvalLedger, evaluate_many
from services.evaluation_service.objectives import BlackBoxObjective
from services.pareto_service import ObjectiveNormalizer, hypervolume_of
from services.strategy_service import forward_batch
from services.surrogate_service import acquire_batch
from shared.schemas import (
    AnsweredRequest,
    BinarizeMode,
    ObjectiveSource,
    Request,
    Strategy,
)
from shared.storage import read_json, write_json
from .state import RunState

PathLike = Union[str, Path]


class TrainedBundle:
    """Final run state; treated as read-only"""

    def __init__(self, state: RunState):
        self.state = state

    @classmethod
    def from_state(cls, state: RunState) -> "TrainedBundle":
        return cls(state)

    @property
    def cfg(self):
        return self.state.cfg

    @property
    def params(self):
        return self.state.params

    @property
    def model(self):
        return self.state.model

    @property
    def dataset(self):
        return self.state.dataset

    @property
    def metrics(self):
        return self.state.metrics

    @property
    def true_evaluations(self) -> int:
        return self.state.ledger.true_evaluations

    @property
    def partial(self) -> bool:
        return self.state.partial

    def save(self, path: PathLike) -> Path:
        document = {"kind": "bundle", "app_version": settings.APP_VERSION, **self.state.to_dict()}
        return write_json(path, document)

    @classmethod
    def load(cls, path: PathLike) -> "TrainedBundle":
        data = read_json(path)
        if data.get("kind") not in ("bundle", "checkpoint"):
            raise ValueError(f"{path} is not a bundle or checkpoint document")
        return cls(RunState.from_dict(data))


# ============================================
# ANSWERING
# ============================================
def answer_requests(
    bundle: TrainedBundle,
    requests: Sequence[Request],
    binarize_mode: Optional[BinarizeMode] = None,
) -> List[AnsweredRequest]:
    """Forward passes only; f2 comes from the surrogate"""
    if not requests:
        return []
    lambda1 = np.array([r.lambda1 for r in requests], dtype=np.float64)
    X = forward_batch(bundle.params, lambda1)
    if binarize_mode is not None:
        X = np.array([binarize(row, binarize_mode).values for row in X], dtype=np.float64)
    f1 = size_objective_batch(X)
    f2 = acquire_batch(bundle.model, X, bundle.cfg.acquisition)
    return [
        AnsweredRequest(
            request=req,
            strategy=Strategy.from_array(X[i]),
            f1=float(f1[i]),
            f2_hat=float(f2[i]),
            f2_source=ObjectiveSource.SURROGATE,
        )
        for i, req in enumerate(requests)
    ]


def request_grid(n: int) -> List[Request]:
    if n < 2:
        raise ValueError("grid size must be >= 2")
    return [Request.from_lambda1(l1) for l1 in np.linspace(0.0, 1.0, n)]


@dataclass(frozen=True)
class FrontRow:
    lambda1: float
    f1: float
    f2_surrogate: float
    f2_true: Optional[float] = None


def sweep_front(bundle: TrainedBundle, n: int) -> List[FrontRow]:
    answers = answer_requests(bundle, request_grid(n))
    return [FrontRow(a.request.lambda1, a.f1, a.f2_hat) for a in answers]


def f1_nonincreasing(rows: Sequence[FrontRow], tolerance: float = 1e-9) -> bool:
    f1 = np.array([r.f1 for r in rows])
    return bool(np.all(np.diff(f1) <= tolerance))


def score_front(
    bundle: TrainedBundle,
    objective: BlackBoxObjective,
    n: int,
    ledger: Optional[EvalLedger] = None,
) -> List[FrontRow]:
    """Sweep and true-evaluate the network's front on a ledger separate from training"""
    ledger = ledger or EvalLedger()
    answers = answer_requests(bundle, request_grid(n))
    X = np.array([a.strategy.values for a in answers], dtype=np.float64)
    f2_true = evaluate_many(objective, X, ledger)
    logger.info(f"Scored {n}-request front with {ledger.true_evaluations} true evaluations")
    return [FrontRow(a.request.lambda1, a.f1, a.f2_hat, float(t)) for a, t in zip(answers, f2_true)]


def hv_ratio(candidate_points, oracle_points) -> float:
    """HV(candidate) / HV(oracle), both min-max scaled by the oracle front"""
    oracle = np.asarray(oracle_points, dtype=np.float64).reshape(-1, 2)
    normalizer = ObjectiveNormalizer(oracle)
    reference = settings.REFERENCE_POINT
    oracle_hv = hypervolume_of(normalizer.transform(oracle), reference)
    if oracle_hv <= 0.0:
        return 0.0
    cand = np.asarray(candidate_points, dtype=np.float64).reshape(-1, 2)
    return hypervolume_of(normalizer.transform(cand), reference) / oracle_hv
