from .errors import (
    PrefOptError,
    InvalidArgumentError,
    ConfigError,
    EvaluatorFaultError,
    NumericalFailureError,
    BudgetExceededError,
    TrainingAbortedError,
)
from .log_config import configure_logging

__all__ = [
    "PrefOptError",
    "InvalidArgumentError",
    "ConfigError",
    "EvaluatorFaultError",
    "NumericalFailureError",
    "BudgetExceededError",
    "TrainingAbortedError",
    "configure_logging",
]
