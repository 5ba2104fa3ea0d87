from .sampling import latin_hypercube, pool_requests
from .state import HVScale, RunState, TrainingDataset
from .trainer import (
    METRICS_COLUMNS,
    initialize,
    load_checkpoint,
    run,
    run_epoch,
    score_pool,
    write_checkpoint,
    write_metrics,
)
from .bundle import (
    FrontRow,
    TrainedBundle,
    answer_requests,
    f1_nonincreasing,
    hv_ratio,
    request_grid,
    score_front,
    sweep_front,
)
from .jobs import (
    apply_variant,
    read_requests,
    run_answer_job,
    run_compare_job,
    run_oracle_job,
    run_sweep_job,
    run_training_job,
)

__all__ = [
    "latin_hypercube",
    "pool_requests",
    "HVScale",
    "RunState",
    "TrainingDataset",
    "METRICS_COLUMNS",
    "initialize",
    "load_checkpoint",
    "run",
    "run_epoch",
    "score_pool",
    "write_checkpoint",
    "write_metrics",
    "FrontRow",
    "TrainedBundle",
    "answer_requests",
    "f1_nonincreasing",
    "hv_ratio",
    "request_grid",
    "score_front",
    "sweep_front",
    "apply_variant",
    "read_requests",
    "run_answer_job",
    "run_compare_job",
    "run_oracle_job",
    "run_sweep_job",
    "run_training_job",
]
