#!/usr/bin/env python3
"""Main entry point for the IRS-assisted THz IIoT simulator."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from harness.report import emit
from harness.runner import SWEEP_AXES, ExperimentRunner
from utils.config import ALGORITHMS, ExperimentConfig
from utils.logging import setup_logging


def _error_record(error: str, message: str, path: Optional[str] = None) -> str:
    record = {"error": error, "message": message}
    if path:
        record["path"] = path
    return json.dumps(record, sort_keys=True) + "\n"


class _Parser(argparse.ArgumentParser):
    """Usage errors keep argparse's exit code 2 and also leave a JSON record on stderr."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        sys.stderr.write(_error_record("UsageError", message))
        self.exit(2)


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def _algorithms(text: str) -> List[str]:
    algos = [a.strip() for a in text.split(",") if a.strip()]
    unknown = [a for a in algos if a not in ALGORITHMS]
    if unknown or not algos:
        raise argparse.ArgumentTypeError(f"algorithms must come from {', '.join(ALGORITHMS)}")
    return algos


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        description="IRS-assisted THz IIoT link simulator",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    parser.add_argument("--config", type=Path, default=None,
                        help="YAML or JSON experiment file (flat or sectioned keys)")
    parser.add_argument("--seed", type=int, default=None,
                        help="Trial seed; also the base seed of sweeps")
    parser.add_argument("--trials", type=int, default=None,
                        help="Trials per sweep point")
    parser.add_argument("--algos", type=_algorithms, default=None,
                        help="Comma-separated association algorithms")
    parser.add_argument("--sweep", choices=sorted(SWEEP_AXES), default=None,
                        help="Sweep one axis instead of running a single trial")
    parser.add_argument("--values", type=_floats, default=None,
                        help="Comma-separated axis values for --sweep")
    parser.add_argument("--trajectory", type=int, default=None, metavar="STEPS",
                        help="Run one trial through STEPS mobility intervals")
    parser.add_argument("--complexity", type=_floats, default=None, metavar="L_VALUES",
                        help="Tabulate ES evaluations and GS proposals for these IRS counts")
    parser.add_argument("--out", default="-", help="Output path, '-' for stdout")
    parser.add_argument("--format", choices=["csv", "json"], default=None,
                        help="Output format (default: csv for tables, json for trials)")
    parser.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging level (overrides the config file)")
    return parser


def run(args: argparse.Namespace) -> None:
    logger = logging.getLogger(__name__)
    config = ExperimentConfig.load(str(args.config) if args.config else None)
    if args.log_level is None:
        setup_logging(level=config.run.log_level)
    config = config.with_overrides(base_seed=args.seed, trials=args.trials, algorithms=args.algos)
    runner = ExperimentRunner(config)

    if args.sweep:
        logger.info(f"Sweeping {args.sweep} over {args.values}")
        output, default_format = runner.sweep(args.sweep, args.values, config.run.trials), "csv"
    elif args.complexity:
        output, default_format = runner.summarize_complexity(
            [int(v) for v in args.complexity], config.run.trials), "csv"
    elif args.trajectory is not None:
        output, default_format = runner.run_trajectory(config.run.base_seed, args.trajectory), "json"
    else:
        logger.info(f"Running trial with seed {config.run.base_seed}")
        output, default_format = runner.run_trial(config.run.base_seed), "json"

    emit(output, args.format or default_format, args.out)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.sweep and not args.values:
        parser.error("--sweep needs --values")

    setup_logging(level=args.log_level or "INFO")
    logger = logging.getLogger(__name__)

    try:
        run(args)
        return 0
    except KeyboardInterrupt:
        logger.info("Interrupted, no output written")
        return 130
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=logger.isEnabledFor(logging.DEBUG))
        sys.stderr.write(_error_record(type(e).__name__, str(e), getattr(e, "path", None)))
        return 1


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
