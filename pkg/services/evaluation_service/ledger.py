"""
True-evaluation ledger: memoization and budget accounting
"""
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from config.settings import settings
from services.domain_service import check_dimension
from shared.schemas import Strategy
from shared.utils.errors import BudgetExceededError, EvaluatorFaultError
from .objectives import BlackBoxObjective

CacheKey = Tuple[float, ...]


class EvalLedger:
    """Cache of true f2 values keyed by quantized strategy"""

    def __init__(self, budget: Optional[int] = None, decimals: Optional[int] = None):
        self.budget = budget
        self.decimals = settings.CACHE_DECIMALS if decimals is None else decimals
        self.cache: Dict[CacheKey, float] = {}
        self.true_evaluations = 0
        self.cache_hits = 0
        self.cost = 0.0

    def key(self, x: np.ndarray) -> CacheKey:
        return tuple(np.round(np.asarray(x, dtype=np.float64), self.decimals).tolist())

    @property
    def remaining(self) -> Optional[int]:
        if self.budget is None:
            return None
        return max(0, self.budget - self.true_evaluations)

    def to_dict(self) -> Dict:
        return {
            "budget": self.budget,
            "decimals": self.decimals,
            "true_evaluations": self.true_evaluations,
            "cache_hits": self.cache_hits,
            "cost": self.cost,
            "entries": [[list(k), v] for k, v in self.cache.items()],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "EvalLedger":
        ledger = cls(budget=data.get("budget"), decimals=data.get("decimals"))
        ledger.true_evaluations = int(data["true_evaluations"])
        ledger.cache_hits = int(data["cache_hits"])
        ledger.cost = float(data.get("cost", ledger.true_evaluations))
        ledger.cache = {tuple(k): float(v) for k, v in data["entries"]}
        return ledger


def evaluate_true(obj: BlackBoxObjective, x, ledger: EvalLedger) -> float:
    """f2(x) through the ledger; only cache misses count as true evaluations and cost"""
    values = x.as_array() if isinstance(x, Strategy) else np.asarray(x, dtype=np.float64)
    check_dimension(values, obj.dimension)
    key = ledger.key(values)

    if key in ledger.cache:
        ledger.cache_hits += 1
        return ledger.cache[key]

    if ledger.remaining == 0:
        raise BudgetExceededError(f"true-evaluation budget of {ledger.budget} exhausted")

    value = float(obj.evaluate(values))
    if not math.isfinite(value):
        logger.error(f"✗ Evaluator returned {value!r} for strategy {values.tolist()}")
        raise EvaluatorFaultError(f"evaluator returned non-finite value {value!r}", values.tolist())

    ledger.cache[key] = value
    ledger.true_evaluations += 1
    ledger.cost += obj.cost_per_call
    return value


def evaluate_many(obj: BlackBoxObjective, xs: np.ndarray, ledger: EvalLedger) -> List[float]:
    return [evaluate_true(obj, row, ledger) for row in np.asarray(xs, dtype=np.float64)]
