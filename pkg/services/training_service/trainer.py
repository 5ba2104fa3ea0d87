"""
Surrogate-assisted training loop

Step A builds a Latin-hypercube design, evaluates it and fits the GP. Every
epoch then refits the GP, trains the strategy network through it, samples a
candidate pool from the network and spends true evaluations on the batch with
the largest hypervolume improvement.
"""
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from config.settings import settings
from services.domain_service import SIZE_LOWER_BOUND, size_objective, size_objective_batch
from services.evaluation_service import EvalLedger, SyntheticObjective, evaluate_true
from services.evaluation_service.objectives import BlackBoxObjective
from services.pareto_service import ObjectiveNormalizer, select_batch_indices
from services.scalarization_service import scalarize
from services.strategy_service import forward_batch, init_params, training_step
from services.surrogate_service import SurrogateModel, acquire_batch, fit
from shared.schemas import (
    EpochMetrics,
    IdealPoint,
    ObjectivePair,
    Provenance,
    Request,
    RunConfig,
    Strategy,
)
from shared.storage import read_json, write_csv, write_json
from shared.utils.errors import BudgetExceededError, TrainingAbortedError
from .sampling import latin_hypercube, pool_requests
from .state import HVScale, RunState, TrainingDataset

# independent random streams per epoch
STREAM_DESIGN = 0
STREAM_GP = 1
STREAM_STRATNET = 2
STREAM_POOL = 3

POOL_CHUNK = 256
LOSS_PROBE_GRID = 101

METRICS_COLUMNS = ["epoch", "dataset_size", "true_evals", "hv_true_front", "mean_g_tch", "gp_loglik", "wall_ms"]

PathLike = Union[str, Path]


def stream(seed: int, epoch: int, kind: int) -> np.random.Generator:
    return np.random.default_rng([seed, epoch, kind])


def stream_seed(seed: int, epoch: int, kind: int) -> int:
    return int(np.random.SeedSequence([seed, epoch, kind]).generate_state(1)[0])


def _fit_gp(dataset: TrainingDataset, cfg: RunConfig, epoch: int) -> SurrogateModel:
    return fit(dataset.X(), dataset.f2(), seed=stream_seed(cfg.seed, epoch, STREAM_GP))


def _ideal(dataset: TrainingDataset, objective: BlackBoxObjective) -> IdealPoint:
    """Known lower bounds where the objectives have them, else the running minimum"""
    bounds = (SIZE_LOWER_BOUND, objective.lower_bound)
    return IdealPoint.from_pairs(dataset.targets, settings.IDEAL_MARGIN, bounds)


def grid_loss(state: RunState) -> float:
    """Mean surrogate scalarized loss of the network over a fixed λ grid"""
    lambda1 = np.linspace(0.0, 1.0, LOSS_PROBE_GRID)
    X = forward_batch(state.params, lambda1)
    f1 = size_objective_batch(X)
    f2 = acquire_batch(state.model, X, state.cfg.acquisition)
    values = [
        scalarize(state.cfg.scalarizer, (a, b), Request.from_lambda1(l1), state.ideal)
        for l1, a, b in zip(lambda1, f1, f2)
    ]
    return float(np.mean(values))


def score_pool(model: SurrogateModel, X: np.ndarray, cfg: RunConfig) -> np.ndarray:
    """Acquisition values for the pool, scored in fixed-size chunks across workers"""
    chunks = [X[i:i + POOL_CHUNK] for i in range(0, len(X), POOL_CHUNK)]
    workers = min(settings.worker_count, len(chunks))
    if workers <= 1:
        return np.concatenate([acquire_batch(model, c, cfg.acquisition) for c in chunks])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.concatenate(list(pool.map(lambda c: acquire_batch(model, c, cfg.acquisition), chunks)))


# ============================================
# STEP A
# ============================================
def initialize(cfg: RunConfig, objective: Optional[BlackBoxObjective] = None) -> RunState:
    objective = objective or SyntheticObjective(cfg.objective)
    logger.info(f"Initializing: d={cfg.d}, N_init={cfg.N_init}, seed={cfg.seed}")

    ledger = EvalLedger(budget=cfg.eval_budget)
    design = latin_hypercube(cfg.N_init, cfg.d, stream(cfg.seed, 0, STREAM_DESIGN))
    dataset = TrainingDataset()
    for row in design:
        strategy = Strategy.from_array(row)
        f2 = evaluate_true(objective, row, ledger)
        dataset.append(strategy, ObjectivePair(f1=size_objective(row), f2=f2), Provenance(epoch=0))

    model = _fit_gp(dataset, cfg, 0)
    params = init_params(cfg.d, hidden=cfg.hidden, lr=cfg.lr, seed=cfg.seed)
    hv_scale = HVScale.from_points(dataset.points(), settings.REFERENCE_POINT)

    state = RunState(
        cfg=cfg,
        epoch=0,
        dataset=dataset,
        model=model,
        params=params,
        ledger=ledger,
        ideal=_ideal(dataset, objective),
        hv_scale=hv_scale,
    )
    state.metrics.append(EpochMetrics(
        epoch=0,
        dataset_size=len(dataset),
        true_evals=ledger.true_evaluations,
        hv_true_front=hv_scale.hypervolume(dataset.points()),
        mean_g_tch=grid_loss(state),
        gp_loglik=model.log_likelihood,
    ))
    logger.info(f"✓ Initial design evaluated: {len(dataset)} strategies, GP loglik {model.log_likelihood:.4f}")
    return state


# ============================================
# STEP B
# ============================================
def run_epoch(state: RunState, cfg: Optional[RunConfig] = None, objective: Optional[BlackBoxObjective] = None) -> RunState:
    """One epoch; returns a new state and leaves `state` untouched"""
    cfg = cfg or state.cfg
    objective = objective or SyntheticObjective(cfg.objective)
    state = state.copy()
    epoch = state.epoch + 1
    started = time.perf_counter()

    # (i) GP refit on the current dataset
    if not cfg.freeze_gp:
        state.model = _fit_gp(state.dataset, cfg, epoch)

    # (ii) strategy network updates
    rng = stream(cfg.seed, epoch, STREAM_STRATNET)
    losses = []
    for _ in range(cfg.I):
        state.params, loss = training_step(
            state.params, state.model, cfg.acquisition, state.ideal, cfg.K, rng, scalarizer=cfg.scalarizer
        )
        losses.append(loss)

    # (iii) candidate pool from the frozen network
    lambda1 = pool_requests(cfg.C_pool, stream(cfg.seed, epoch, STREAM_POOL), cfg.pool_jitter)
    pool_X = forward_batch(state.params, lambda1)

    # (iv) exact f1, surrogate f2
    pool_f = np.column_stack([size_objective_batch(pool_X), score_pool(state.model, pool_X, cfg)])

    # (v) greedy HVI selection in dataset-normalized space
    n_pick = cfg.batch
    remaining = state.ledger.remaining
    if remaining is not None and remaining < n_pick:
        logger.warning(f"Evaluation budget allows {remaining} of {cfg.batch} new samples")
        n_pick = remaining
        state.partial = True

    picks: List[int] = []
    if n_pick > 0:
        normalizer = ObjectiveNormalizer(state.dataset.points())
        picks = select_batch_indices(
            normalizer.transform(state.dataset.points()),
            settings.REFERENCE_POINT,
            normalizer.transform(pool_f),
            n_pick,
            strategies=pool_X,
        )

    # (vi) true evaluation of the selected batch
    for i in picks:
        try:
            f2 = evaluate_true(objective, pool_X[i], state.ledger)
        except BudgetExceededError as e:
            logger.warning(f"Stopping epoch {epoch} early: {e}")
            state.partial = True
            break
        state.dataset.append(
            Strategy.from_array(pool_X[i]),
            ObjectivePair(f1=size_objective(pool_X[i]), f2=f2),
            Provenance(epoch=epoch, pool_index=int(i), lambda1=float(lambda1[i])),
        )
    state.ideal = _ideal(state.dataset, objective)

    # (vii) metrics
    wall_ms = (time.perf_counter() - started) * 1000.0 if settings.RECORD_WALL_TIME else 0.0
    state.metrics.append(EpochMetrics(
        epoch=epoch,
        dataset_size=len(state.dataset),
        true_evals=state.ledger.true_evaluations,
        hv_true_front=state.hv_scale.hypervolume(state.dataset.points()),
        mean_g_tch=float(np.mean(losses)) if losses else grid_loss(state),
        gp_loglik=state.model.log_likelihood,
        wall_ms=wall_ms,
    ))
    state.epoch = epoch
    last = state.metrics[-1]
    logger.info(
        f"Epoch {epoch}/{cfg.T}: dataset {last.dataset_size}, true evals {last.true_evals}, "
        f"HV {last.hv_true_front:.6f}, mean loss {last.mean_g_tch:.6f}"
    )
    return state


# ============================================
# FULL RUN
# ============================================
def write_metrics(state: RunState, output_dir: PathLike) -> Path:
    rows = [m.model_dump() for m in state.metrics]
    return write_csv(Path(output_dir) / settings.METRICS_FILENAME, rows, METRICS_COLUMNS)


def write_checkpoint(state: RunState, output_dir: PathLike) -> Path:
    document = {"kind": "checkpoint", "app_version": settings.APP_VERSION, **state.to_dict()}
    return write_json(Path(output_dir) / settings.checkpoint_name(state.epoch), document)


def load_checkpoint(path: PathLike) -> RunState:
    return RunState.from_dict(read_json(path))


def run(
    cfg: RunConfig,
    output_dir: Optional[PathLike] = None,
    resume_from: Optional[PathLike] = None,
    objective: Optional[BlackBoxObjective] = None,
):
    """
    Run T epochs (fewer under a budget stop), checkpointing after each one,
    and return the trained bundle. Errors abort with the last good checkpoint.
    """
    from .bundle import TrainedBundle

    objective = objective or SyntheticObjective(cfg.objective)
    output_dir = Path(output_dir) if output_dir is not None else None
    last_checkpoint: Optional[str] = None

    logger.info("=" * 60)
    logger.info(f"TRAINING RUN: T={cfg.T}, I={cfg.I}, K={cfg.K}, scalarizer={cfg.scalarizer.label}, "
                f"acquisition={cfg.acquisition.label}")
    logger.info("=" * 60)

    epoch = 0
    try:
        if resume_from is not None:
            state = load_checkpoint(resume_from)
            state.cfg = cfg
            last_checkpoint = str(resume_from)
            logger.info(f"Resuming from {resume_from} at epoch {state.epoch}")
        else:
            state = initialize(cfg, objective)
            if output_dir is not None:
                last_checkpoint = str(write_checkpoint(state, output_dir))
                write_metrics(state, output_dir)

        while state.epoch < cfg.T and not state.partial:
            epoch = state.epoch + 1
            state = run_epoch(state, cfg, objective)
            if output_dir is not None:
                last_checkpoint = str(write_checkpoint(state, output_dir))
                write_metrics(state, output_dir)
    except Exception as e:
        logger.error(f"✗ Training aborted at epoch {epoch}: {e}")
        logger.error(traceback.format_exc())
        raise TrainingAbortedError(epoch, e, last_checkpoint) from e

    bundle = TrainedBundle.from_state(state)
    if output_dir is not None:
        bundle.save(output_dir / settings.BUNDLE_FILENAME)

    status = "partial (budget exhausted)" if state.partial else "complete"
    logger.info(
        f"✓ Training {status}: {state.epoch} epochs, "
        f"{state.ledger.true_evaluations} true evaluations (cost {state.ledger.cost:g})"
    )
    return bundle
