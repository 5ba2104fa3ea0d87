from .domain import (
    Strategy,
    Request,
    ObjectiveSource,
    ObjectivePair,
    IdealPoint,
    BinarizeKind,
    BinarizeMode,
    strategies_to_matrix,
)
from .run_config import (
    ObjectiveFamily,
    SyntheticSpec,
    AcquisitionKind,
    AcquisitionConfig,
    ScalarizerName,
    ScalarizerKind,
    RunConfig,
    parse_run_config,
    load_run_config,
)
from .results import EpochMetrics, Provenance, AnsweredRequest

__all__ = [
    "Strategy",
    "Request",
    "ObjectiveSource",
    "ObjectivePair",
    "IdealPoint",
    "BinarizeKind",
    "BinarizeMode",
    "strategies_to_matrix",
    "ObjectiveFamily",
    "SyntheticSpec",
    "AcquisitionKind",
    "AcquisitionConfig",
    "ScalarizerName",
    "ScalarizerKind",
    "RunConfig",
    "parse_run_config",
    "load_run_config",
    "EpochMetrics",
    "Provenance",
    "AnsweredRequest",
]
