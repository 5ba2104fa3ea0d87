from .network import (
    StratNetParams,
    Tape,
    init_params,
    parameter_count,
    forward,
    forward_values,
    forward_batch,
    backward,
    adam_update,
)
from .training import scalarized_loss, training_step

__all__ = [
    "StratNetParams",
    "Tape",
    "init_params",
    "parameter_count",
    "forward",
    "forward_values",
    "forward_batch",
    "backward",
    "adam_update",
    "scalarized_loss",
    "training_step",
]
