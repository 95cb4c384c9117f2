"""Command-line entry point: ``pcm-amortized case1|case2|gradcheck|props``."""

import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from .config import PCM_LOG_LEVEL, Experiment, load_run_config
from .experiments import ExperimentOutcome, run_case1, run_case2, run_gradcheck, run_props

logger = logging.getLogger(__name__)

RUNNERS = {
    Experiment.CASE1: run_case1,
    Experiment.CASE2: run_case2,
    Experiment.GRADCHECK: run_gradcheck,
    Experiment.PROPS: run_props,
}

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _split_models(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcm-amortized",
        description="Train and globally minimize parameterized convex minorant approximators",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # Scalar benchmark with every approximator
    pcm-amortized case1 --out runs/case1

    # Wing-rock NMPC with EPLSE (the linear-MPC baseline always runs)
    pcm-amortized case2 --config case2.ini --models eplse

    # Gradient and property suites with a pinned seed
    pcm-amortized gradcheck --seed 7
    pcm-amortized props --out runs/props
        """
    )
    parser.add_argument(
        "experiment",
        choices=[e.value for e in Experiment],
        help="Experiment or suite to run"
    )
    parser.add_argument(
        "--config", "-c",
        default=None,
        help="INI run configuration (defaults apply when omitted)"
    )
    parser.add_argument(
        "--out", "-o",
        default=None,
        help="Output directory (overrides [run] output_dir)"
    )
    parser.add_argument(
        "--models", "-m",
        type=_split_models,
        default=None,
        help="Comma-separated model kinds, e.g. fnn,plse,dlse,eplse,linear-mpc"
    )
    parser.add_argument(
        "--seed", "-s",
        type=int,
        default=None,
        help="Root seed (overrides [run] seed)"
    )
    parser.add_argument(
        "--verbose", "-v",
        action="store_true",
        help="Enable verbose logging"
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; returns 0 iff everything completed and every check held."""
    args = build_parser().parse_args(argv)

    log_level = logging.DEBUG if args.verbose else getattr(logging, PCM_LOG_LEVEL, logging.INFO)
    logging.basicConfig(level=log_level, format="%(levelname)s: %(message)s")

    try:
        config = load_run_config(args.config).with_overrides(
            output_dir=args.out, models=args.models, seed=args.seed
        )
    except (OSError, ValueError, ValidationError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_USAGE

    experiment = Experiment(args.experiment)
    logger.info(f"Running {experiment.value} into {config.run.output_dir} with seed {config.run.seed}")
    try:
        outcome: ExperimentOutcome = RUNNERS[experiment](config)
    except ValueError as e:
        logger.error(f"{experiment.value} aborted: {e}")
        return EXIT_FAILED

    if not outcome.ok:
        logger.error(f"{experiment.value} finished with failures: {', '.join(outcome.failures)}")
        return EXIT_FAILED
    logger.info(f"{experiment.value} finished; wrote {len(outcome.artifacts)} artifacts")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
