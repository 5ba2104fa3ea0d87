"""
Job entry points behind the command line

Each job logs its progress, writes its outputs and returns a result dict
with "success", "message" and "exit_code"; errors never escape.
"""
import traceback
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from loguru import logger

from config.settings import settings
from services.evaluation_service import EvalLedger, SyntheticObjective, pareto_oracle
from shared.schemas import (
    AcquisitionConfig,
    BinarizeMode,
    Request,
    RunConfig,
    ScalarizerKind,
    load_run_config,
)
from shared.storage import read_csv, write_csv, write_json
from shared.utils.errors import InvalidArgumentError, PrefOptError
from .bundle import TrainedBundle, answer_requests, f1_nonincreasing, hv_ratio, request_grid, score_front, sweep_front
from .trainer import run

PathLike = Union[str, Path]

DEFAULT_ORACLE_RESOLUTION = 101
SCORE_GRID = 101


def _failure(e: Exception) -> Dict:
    return {
        "success": False,
        "message": str(e),
        "exit_code": getattr(e, "exit_code", 1),
    }


def _guard(name: str, fn, *args, **kwargs) -> Dict:
    try:
        return fn(*args, **kwargs)
    except PrefOptError as e:
        logger.error(f"✗ {name} failed: {e}")
        return _failure(e)
    except Exception as e:
        logger.error(f"✗ {name} failed: {e}")
        logger.error(traceback.format_exc())
        return _failure(e)


# ============================================
# TRAIN
# ============================================
def _train(config_path: PathLike, output_dir: Optional[PathLike], resume_from: Optional[PathLike]) -> Dict:
    cfg = load_run_config(config_path)
    output_dir = Path(output_dir or settings.OUTPUT_DIR)
    bundle = run(cfg, output_dir, resume_from=resume_from)
    result = {
        "success": True,
        "message": "Training partial: evaluation budget exhausted" if bundle.partial else "Training complete",
        "exit_code": 4 if bundle.partial else 0,
        "epochs": bundle.state.epoch,
        "true_evaluations": bundle.true_evaluations,
        "final_hv": bundle.metrics[-1].hv_true_front,
        "output_dir": str(output_dir),
    }
    return result


def run_training_job(config_path: PathLike, output_dir: Optional[PathLike] = None,
                     resume_from: Optional[PathLike] = None) -> Dict:
    return _guard("Training", _train, config_path, output_dir, resume_from)


# ============================================
# ANSWER / SWEEP
# ============================================
def read_requests(path: PathLike) -> List[Request]:
    df = read_csv(path)
    if "lambda1" not in df.columns:
        raise InvalidArgumentError(f"{path} needs a 'lambda1' column")
    try:
        return [Request.from_lambda1(v) for v in df["lambda1"].tolist()]
    except ValueError as e:
        raise InvalidArgumentError(f"invalid request in {path}: {e}")


def _answer(bundle_path: PathLike, output: PathLike, requests_path: Optional[PathLike],
            grid: Optional[int], binarize_mode: Optional[str]) -> Dict:
    bundle = TrainedBundle.load(bundle_path)
    if requests_path is not None:
        requests = read_requests(requests_path)
    elif grid is not None:
        if grid < 2:
            raise InvalidArgumentError("--grid must be >= 2")
        requests = request_grid(grid)
    else:
        raise InvalidArgumentError("answer needs a requests file or --grid")
    mode = None
    if binarize_mode:
        try:
            mode = BinarizeMode.parse(binarize_mode)
        except ValueError as e:
            raise InvalidArgumentError(str(e))

    before = bundle.true_evaluations
    answers = answer_requests(bundle, requests, mode)
    d = bundle.cfg.d
    rows = []
    for a in answers:
        row = {
            "lambda1": a.request.lambda1,
            "lambda2": a.request.lambda2,
            "f1": a.f1,
            "f2_hat": a.f2_hat,
            "f2_source": a.f2_source.value,
        }
        row.update({f"x{j}": a.strategy.values[j] for j in range(d)})
        rows.append(row)
    columns = ["lambda1", "lambda2", "f1", "f2_hat", "f2_source"] + [f"x{j}" for j in range(d)]
    path = write_csv(output, rows, columns)
    logger.info(f"✓ Answered {len(answers)} requests -> {path}")
    return {
        "success": True,
        "message": f"Answered {len(answers)} requests",
        "exit_code": 0,
        "answers": len(answers),
        "true_evaluations": bundle.true_evaluations - before,
        "output": str(path),
    }


def run_answer_job(bundle_path: PathLike, output: PathLike, requests_path: Optional[PathLike] = None,
                   grid: Optional[int] = None, binarize_mode: Optional[str] = None) -> Dict:
    return _guard("Answer", _answer, bundle_path, output, requests_path, grid, binarize_mode)


def _sweep(bundle_path: PathLike, grid: int, output: PathLike, true_eval: bool, budget: Optional[int]) -> Dict:
    if grid < 2:
        raise InvalidArgumentError("--grid must be >= 2")
    bundle = TrainedBundle.load(bundle_path)
    columns = ["lambda1", "f1", "f2_surrogate"]
    ledger = None
    if true_eval:
        ledger = EvalLedger(budget=budget)
        rows = score_front(bundle, SyntheticObjective(bundle.cfg.objective), grid, ledger)
        columns.append("f2_true")
    else:
        rows = sweep_front(bundle, grid)

    records = [{k: getattr(r, k) for k in columns} for r in rows]
    path = write_csv(output, records, columns)
    summary = {
        "grid": grid,
        "f1_nonincreasing": f1_nonincreasing(rows),
        "true_evaluations": ledger.true_evaluations if ledger else 0,
    }
    write_json(Path(output).with_suffix(".summary.json"), summary)
    logger.info(f"✓ Swept {grid} requests -> {path} (f1 nonincreasing: {summary['f1_nonincreasing']})")
    return {"success": True, "message": f"Swept {grid} requests", "exit_code": 0, "output": str(path), **summary}


def run_sweep_job(bundle_path: PathLike, grid: int, output: PathLike, true_eval: bool = False,
                  budget: Optional[int] = None) -> Dict:
    return _guard("Sweep", _sweep, bundle_path, grid, output, true_eval, budget)


# ============================================
# ORACLE / COMPARE
# ============================================
def _oracle(config_path: PathLike, resolution: int, output: PathLike) -> Dict:
    cfg = load_run_config(config_path)
    front = pareto_oracle(SyntheticObjective(cfg.objective), resolution)
    rows = [{"f1": f.f1, "f2": f.f2, "source": f.f2_source.value} for _, f in front]
    path = write_csv(output, rows, ["f1", "f2", "source"])
    logger.info(f"✓ Oracle front: {len(rows)} points -> {path}")
    return {"success": True, "message": f"Oracle front with {len(rows)} points", "exit_code": 0,
            "points": len(rows), "output": str(path)}


def run_oracle_job(config_path: PathLike, resolution: int = DEFAULT_ORACLE_RESOLUTION,
                   output: PathLike = "oracle_front.csv") -> Dict:
    return _guard("Oracle", _oracle, config_path, resolution, output)


def apply_variant(cfg: RunConfig, variant: str) -> RunConfig:
    """Config with the variant's scalarizer or acquisition swapped in"""
    raw = variant.strip().lower()
    try:
        if raw.startswith("acq:"):
            acquisition = AcquisitionConfig.parse(raw, kappa=cfg.acquisition.kappa)
            return cfg.model_copy(update={"acquisition": acquisition})
        return cfg.model_copy(update={"scalarizer": ScalarizerKind.parse(raw)})
    except ValueError as e:
        raise InvalidArgumentError(f"unknown variant '{variant}': {e}")


def _compare(config_path: PathLike, variants: Sequence[str], output_dir: PathLike, resolution: int) -> Dict:
    cfg = load_run_config(config_path)
    configs = [(v, apply_variant(cfg, v)) for v in variants]
    if not configs:
        raise InvalidArgumentError("compare needs at least one variant")

    objective = SyntheticObjective(cfg.objective)
    oracle = np.array([f.as_tuple() for _, f in pareto_oracle(objective, resolution)])
    output_dir = Path(output_dir)

    rows = []
    for variant, variant_cfg in configs:
        logger.info("")
        logger.info("=" * 40)
        logger.info(f"VARIANT: {variant}")
        logger.info("=" * 40)
        bundle = run(variant_cfg, output_dir / variant.replace(":", "_").replace("@", "_k"), objective=objective)
        scored = score_front(bundle, objective, SCORE_GRID)
        points = np.array([(r.f1, r.f2_true) for r in scored])
        ratio = hv_ratio(points, oracle)
        rows.append({
            "variant": variant,
            "kappa": variant_cfg.acquisition.effective_kappa,
            "final_hv": bundle.metrics[-1].hv_true_front,
            "hv_ratio": ratio,
            "true_evals": bundle.true_evaluations,
        })
        logger.info(f"✓ {variant}: hv_ratio {ratio:.6f}")

    path = write_csv(output_dir / "compare.csv", rows, ["variant", "kappa", "final_hv", "hv_ratio", "true_evals"])
    ratios = {r["variant"]: r["hv_ratio"] for r in rows}
    summary: Dict = {"variants": list(ratios.keys()), "hv_ratio": ratios}
    if "tch" in ratios and "ws" in ratios:
        summary["tch_beats_ws"] = bool(ratios["tch"] > ratios["ws"])
    write_json(output_dir / "compare_summary.json", summary)
    return {"success": True, "message": f"Compared {len(rows)} variants", "exit_code": 0,
            "output": str(path), **summary}


def run_compare_job(config_path: PathLike, variants: Sequence[str], output_dir: Optional[PathLike] = None,
                    resolution: int = DEFAULT_ORACLE_RESOLUTION) -> Dict:
    return _guard("Compare", _compare, config_path, variants, output_dir or settings.OUTPUT_DIR, resolution)
