"""
Command-line entry point

    python -m services.cli.main train config.json --output-dir runs/desk
    python -m services.cli.main answer runs/desk/bundle.json --grid 64
    python -m services.cli.main sweep runs/desk/bundle.json --grid 11
    python -m services.cli.main compare config.json --variants ws tch
    python -m services.cli.main oracle config.json --resolution 101

Exit codes: 0 ok, 2 config/usage, 3 numerical or evaluator failure, 4 budget exhausted.
"""
import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional

from loguru import logger

from config.settings import settings
from services.training_service import (
    run_answer_job,
    run_compare_job,
    run_oracle_job,
    run_sweep_job,
    run_training_job,
)
from shared.utils import configure_logging

COMPARE_VARIANTS = ["ws", "tch", "pbi:0.1", "pbi:5", "acq:none", "acq:paperlcb", "acq:optimistic"]


def _existing_file(value: str) -> str:
    if not Path(value).is_file():
        raise argparse.ArgumentTypeError(f"file not found: {value}")
    return value


def _grid(value: str) -> int:
    n = int(value)
    if n < 2:
        raise argparse.ArgumentTypeError("grid size must be >= 2")
    return n


def _variant(value: str) -> str:
    raw = value.strip().lower()
    base = raw.split("@", 1)[0] if raw.startswith("acq:") else raw
    if base not in COMPARE_VARIANTS:
        raise argparse.ArgumentTypeError(f"unknown variant '{value}'. Allowed: {', '.join(COMPARE_VARIANTS)}, acq:<kind>@<kappa>")
    if raw != base:
        try:
            float(raw.split("@", 1)[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid kappa in variant '{value}'")
    return raw


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=settings.APP_NAME, description="Preference-conditioned bi-objective optimizer")
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    parser.add_argument("--threads", type=int, default=None, help="Override PREFOPT_THREADS")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="Run a full training")
    train.add_argument("config", type=_existing_file)
    train.add_argument("--output-dir", default=None)
    train.add_argument("--resume", type=_existing_file, default=None, help="Checkpoint to continue from")

    answer = sub.add_parser("answer", help="Generate strategies for a batch of requests")
    answer.add_argument("bundle", type=_existing_file)
    source = answer.add_mutually_exclusive_group(required=True)
    source.add_argument("--requests", type=_existing_file, help="CSV with a lambda1 column")
    source.add_argument("--grid", type=_grid)
    answer.add_argument("--binarize", default=None, help="threshold | topk:<k>")
    answer.add_argument("--output", default=None)

    sweep = sub.add_parser("sweep", help="Sweep the trained front over a request grid")
    sweep.add_argument("bundle", type=_existing_file)
    sweep.add_argument("--grid", type=_grid, default=101)
    sweep.add_argument("--true-eval", action="store_true", help="Also true-evaluate the swept strategies")
    sweep.add_argument("--budget", type=int, default=None, help="True-evaluation cap for --true-eval")
    sweep.add_argument("--output", default=None)

    compare = sub.add_parser("compare", help="Train one run per variant and compare fronts")
    compare.add_argument("config", type=_existing_file)
    compare.add_argument("--variants", nargs="+", type=_variant, default=["ws", "tch"])
    compare.add_argument("--resolution", type=_grid, default=101)
    compare.add_argument("--output-dir", default=None)

    oracle = sub.add_parser("oracle", help="Brute-force the Pareto front of the configured objective")
    oracle.add_argument("config", type=_existing_file)
    oracle.add_argument("--resolution", type=_grid, default=101)
    oracle.add_argument("--output", default="oracle_front.csv")

    return parser


def _sibling(bundle: str, name: str) -> str:
    return str(Path(bundle).parent / name)


def dispatch(args: argparse.Namespace) -> Dict:
    if args.command == "train":
        return run_training_job(args.config, args.output_dir, resume_from=args.resume)
    if args.command == "answer":
        return run_answer_job(
            args.bundle,
            args.output or _sibling(args.bundle, "answers.csv"),
            requests_path=args.requests,
            grid=args.grid,
            binarize_mode=args.binarize,
        )
    if args.command == "sweep":
        if args.budget is not None and not args.true_eval:
            logger.warning("--budget has no effect without --true-eval")
        return run_sweep_job(
            args.bundle,
            args.grid,
            args.output or _sibling(args.bundle, "front.csv"),
            true_eval=args.true_eval,
            budget=args.budget,
        )
    if args.command == "compare":
        return run_compare_job(args.config, args.variants, args.output_dir, resolution=args.resolution)
    return run_oracle_job(args.config, args.resolution, args.output)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.threads is not None:
        settings.PREFOPT_THREADS = args.threads
    configure_logging(args.log_level)

    result = dispatch(args)
    if result["success"]:
        logger.info(f"✓ {result['message']}")
    else:
        logger.error(f"✗ {result['message']}")
        print(result["message"], file=sys.stderr)
    return int(result["exit_code"])


if __name__ == "__main__":
    sys.exit(main())
