"""
Training dataset and per-run state
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from services.evaluation_service import EvalLedger
from services.pareto_service import hypervolume_of
from services.strategy_service import StratNetParams
from services.surrogate_service import SurrogateModel
from shared.schemas import (
    EpochMetrics,
    IdealPoint,
    ObjectivePair,
    ObjectiveSource,
    Provenance,
    RunConfig,
    Strategy,
    strategies_to_matrix,
)
from shared.storage import decode_array, encode_array


@dataclass
class TrainingDataset:
    """True-evaluated strategies with their objectives and origin"""
    strategies: List[Strategy] = field(default_factory=list)
    targets: List[ObjectivePair] = field(default_factory=list)
    provenance: List[Provenance] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.strategies)

    def append(self, strategy: Strategy, target: ObjectivePair, origin: Provenance) -> None:
        if target.f2_source != ObjectiveSource.TRUE:
            raise ValueError("the training dataset only holds true evaluations")
        self.strategies.append(strategy)
        self.targets.append(target)
        self.provenance.append(origin)

    def copy(self) -> "TrainingDataset":
        return TrainingDataset(list(self.strategies), list(self.targets), list(self.provenance))

    def X(self) -> np.ndarray:
        return strategies_to_matrix(self.strategies)

    def f2(self) -> np.ndarray:
        return np.array([t.f2 for t in self.targets], dtype=np.float64)

    def points(self) -> np.ndarray:
        return np.array([t.as_tuple() for t in self.targets], dtype=np.float64)

    def to_dict(self) -> Dict:
        pts = self.points()
        return {
            "X": encode_array(self.X()),
            "f1": encode_array(pts[:, 0]),
            "f2": encode_array(pts[:, 1]),
            "provenance": [p.model_dump() for p in self.provenance],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "TrainingDataset":
        X = decode_array(data["X"])
        f1 = decode_array(data["f1"])
        f2 = decode_array(data["f2"])
        return cls(
            strategies=[Strategy.from_array(row) for row in X],
            targets=[ObjectivePair(f1=float(a), f2=float(b)) for a, b in zip(f1, f2)],
            provenance=[Provenance(**p) for p in data["provenance"]],
        )


@dataclass(frozen=True)
class HVScale:
    """Fixed objective scaling for the hypervolume metric, frozen at epoch 0"""
    f2_low: float
    f2_span: float
    reference: Tuple[float, float]

    @classmethod
    def from_points(cls, points: np.ndarray, reference: Tuple[float, float]) -> "HVScale":
        low = float(points[:, 1].min())
        span = float(points[:, 1].max()) - low
        return cls(f2_low=low, f2_span=span if span > 0.0 else 1.0, reference=tuple(reference))

    def transform(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        return np.column_stack([points[:, 0], (points[:, 1] - self.f2_low) / self.f2_span])

    def hypervolume(self, points: np.ndarray) -> float:
        return hypervolume_of(self.transform(points), self.reference)

    def to_dict(self) -> Dict:
        return {"f2_low": self.f2_low, "f2_span": self.f2_span, "reference": list(self.reference)}

    @classmethod
    def from_dict(cls, data: Dict) -> "HVScale":
        return cls(float(data["f2_low"]), float(data["f2_span"]), tuple(data["reference"]))


@dataclass
class RunState:
    cfg: RunConfig
    epoch: int
    dataset: TrainingDataset
    model: SurrogateModel
    params: StratNetParams
    ledger: EvalLedger
    ideal: IdealPoint
    hv_scale: HVScale
    metrics: List[EpochMetrics] = field(default_factory=list)
    partial: bool = False

    def copy(self) -> "RunState":
        return replace(
            self,
            dataset=self.dataset.copy(),
            ledger=EvalLedger.from_dict(self.ledger.to_dict()),
            metrics=list(self.metrics),
        )

    def to_dict(self) -> Dict:
        return {
            "config": self.cfg.model_dump(mode="json"),
            "epoch": self.epoch,
            "dataset": self.dataset.to_dict(),
            "gp": self.model.to_dict(),
            "stratnet": self.params.to_dict(),
            "ledger": self.ledger.to_dict(),
            "ideal": list(self.ideal.z),
            "hv_scale": self.hv_scale.to_dict(),
            "metrics": [m.model_dump() for m in self.metrics],
            "partial": self.partial,
        }

    @classmethod
    def from_dict(cls, data: Dict, cfg: Optional[RunConfig] = None) -> "RunState":
        return cls(
            cfg=cfg or RunConfig.model_validate(data["config"]),
            epoch=int(data["epoch"]),
            dataset=TrainingDataset.from_dict(data["dataset"]),
            model=SurrogateModel.from_dict(data["gp"]),
            params=StratNetParams.from_dict(data["stratnet"]),
            ledger=EvalLedger.from_dict(data["ledger"]),
            ideal=IdealPoint(z=tuple(data["ideal"])),
            hv_scale=HVScale.from_dict(data["hv_scale"]),
            metrics=[EpochMetrics(**m) for m in data["metrics"]],
            partial=bool(data.get("partial", False)),
        )
