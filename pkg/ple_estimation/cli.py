"""
Command-line entry point.

    ple-estimation sweep-shadow --trials 500 --out shadow.csv
    ple-estimation sweep-density --config density.env
    ple-estimation routing --mode analytic
    ple-estimation detect --events events.csv
    ple-estimation estimate measurements.txt --method wtls
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from .base import EstimateReport, ExperimentKind, RoutingMode
from .exceptions import (
    ConfigurationError,
    EstimatorNotSupportedError,
    InputFormatError,
    InsufficientSamplesError,
)
from .harness import (
    EXPERIMENTS,
    load_config,
    make_runner,
    routing_experiment,
    run_experiment,
    single_estimate,
    write_csv,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3


def _csv_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per cell")
    parser.add_argument("--out", dest="output_path", help="CSV output path (default: stdout)")
    parser.add_argument("--config", help="KEY=VALUE configuration file")
    parser.add_argument("--dimension", type=int, choices=[1, 2, 3], help="dimension of the field")
    parser.add_argument("--concurrency", type=int, help="worker threads for trials")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging level",
    )


def _add_sweep_lists(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gammas", type=_csv_list, help="comma-separated PLE values")
    parser.add_argument("--sigmas", type=_csv_list, help="comma-separated shadowing sigmas in dB")
    parser.add_argument("--densities", type=_csv_list, help="comma-separated node densities")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ple-estimation",
        description="Path-loss exponent self-estimation experiments",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("sweep-shadow", "estimator RMSE against shadowing"),
        ("sweep-density", "estimator RMSE against node density"),
    ):
        sweep = commands.add_parser(name, help=help_text)
        _add_common(sweep)
        _add_sweep_lists(sweep)
        sweep.add_argument("--methods", type=_csv_list, help="estimators, e.g. tls,wtls,c_ple")
        sweep.add_argument("--max-pairs", type=int, help="cap on pair samples per trial")

    routing = commands.add_parser("routing", help="kth-nearest-neighbour routing study")
    _add_common(routing)
    _add_sweep_lists(routing)
    routing.add_argument(
        "--mode",
        dest="routing_mode",
        choices=[m.value for m in RoutingMode],
        help="analytic or mc; falls back to ROUTING_MODE in the config file, then mc",
    )
    routing.add_argument("--alphas", type=_csv_list, help="alpha grid for the analytic mode")
    routing.add_argument("--k-max", type=int, help="largest neighbour order")

    detect = commands.add_parser("detect", help="range test calibration")
    _add_common(detect)
    _add_sweep_lists(detect)
    detect.add_argument("--levels", type=_csv_list, help="significance levels")
    detect.add_argument("--windows", type=_csv_list, help="window lengths I")
    detect.add_argument("--events", dest="events_path", help="write a network event log here")

    estimate = commands.add_parser("estimate", help="estimate the PLE from an RSS file")
    _add_common(estimate)
    estimate.add_argument("rss_file", help="file with one RSS value in dB per line")
    estimate.add_argument("--method", default="wtls", help="tls_svd, tls or wtls")
    estimate.add_argument("--max-pairs", type=int, help="cap on pair samples")
    return parser


def _experiment_for(args: argparse.Namespace) -> ExperimentKind:
    if args.command == "sweep-shadow":
        return ExperimentKind.SHADOW_SWEEP
    if args.command == "sweep-density":
        return ExperimentKind.DENSITY_SWEEP
    if args.command == "routing":
        return routing_experiment(args.config, {"routing_mode": args.routing_mode})
    if args.command == "detect":
        return ExperimentKind.DETECT_CALIBRATION
    return ExperimentKind.SINGLE_ESTIMATE


_NOT_CONFIG_KEYS = {"command", "config", "log_level"}


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG_KEYS}


def _print_report(report: EstimateReport) -> None:
    print(f"method={report.method.value}")
    print(f"gamma_hat={'' if report.gamma_hat is None else format(report.gamma_hat, '.10g')}")
    print(f"N={report.sample_count}")
    print(f"eta={'' if report.eta is None else format(report.eta, '.10g')}")
    print(f"degenerate={str(report.degenerate).lower()}")
    if report.reason:
        print(f"reason={report.reason}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(_experiment_for(args), args.config, _overrides(args))
        if config.experiment == ExperimentKind.SINGLE_ESTIMATE:
            report = single_estimate(
                config.rss_file, config.dimension, config.method, config.max_pairs, config.seed
            )
            _print_report(report)
            return EXIT_OK
        rows = run_experiment(config, make_runner(config.seed, config.concurrency))
        columns = EXPERIMENTS[config.experiment].row_type.columns
        write_csv(rows, config.output_path, columns=columns)
    except (ConfigurationError, ValidationError, EstimatorNotSupportedError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputFormatError, InsufficientSamplesError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK
