"""
Error types shared by every service.

Each error carries the process exit code the CLI reports for it.
"""
from typing import List, Optional, Sequence


class PrefOptError(Exception):
    """Base class for all optimizer errors"""

    exit_code: int = 1


class InvalidArgumentError(PrefOptError, ValueError):
    exit_code = 2


class ConfigError(PrefOptError):
    """Run configuration could not be parsed; `fields` names every offender"""

    exit_code = 2

    def __init__(self, fields: Sequence[str], details: Optional[List[str]] = None):
        self.fields = list(fields)
        self.details = list(details or [])
        listed = ", ".join(self.fields)
        message = f"Invalid run configuration, offending fields: {listed}"
        if self.details:
            message += " (" + "; ".join(self.details) + ")"
        super().__init__(message)


class EvaluatorFaultError(PrefOptError):
    """The black-box objective returned a non-finite value"""

    exit_code = 3

    def __init__(self, message: str, strategy: Optional[Sequence[float]] = None):
        self.strategy = list(strategy) if strategy is not None else None
        super().__init__(message)


class NumericalFailureError(PrefOptError):
    exit_code = 3


class BudgetExceededError(PrefOptError):
    exit_code = 4


class TrainingAbortedError(PrefOptError):
    """A run stopped at `epoch`; `checkpoint_path` is the last loadable state"""

    def __init__(self, epoch: int, cause: Exception, checkpoint_path: Optional[str] = None):
        self.epoch = epoch
        self.cause = cause
        self.checkpoint_path = checkpoint_path
        self.exit_code = getattr(cause, "exit_code", 1)
        super().__init__(
            f"Training aborted at epoch {epoch}: {cause}"
            + (f" (last good checkpoint: {checkpoint_path})" if checkpoint_path else "")
        )
