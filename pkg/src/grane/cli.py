"""Command-line front end: ``grane run|validate|constants <config>``.

Exit codes: 0 success, 2 invalid config, 3 solver divergence, 4 the
requested strong-monotonicity path is unavailable for the configured game.
"""

from __future__ import annotations

import argparse
import json
import sys

from .augmented import StrongMonotonicityUnavailableError
from .experiment import (
    ConfigError,
    constants_report,
    run_experiment,
    validate_config,
)
from .solvers import DivergenceError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_NO_STRONG_MONO = 4


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="grane",
        description="Distributed Nash-equilibrium seeking experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run every solver in a config")
    run.add_argument("config", help="path to a JSON experiment config")
    run.add_argument(
        "--output-dir",
        default=None,
        help="directory for traces/summary (default: $GRANE_OUTPUT_DIR or '.')",
    )

    val = sub.add_parser("validate", help="schema and semantic checks only")
    val.add_argument("config")

    con = sub.add_parser("constants", help="print computed constants without solving")
    con.add_argument("config")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            summary = run_experiment(args.config, output_dir=args.output_dir)
            for name, entry in summary["solvers"].items():
                final = entry["final"]
                print(
                    f"{name}: {entry['iterations_run']} iterations, "
                    f"fro_residual={final['fro_residual']:.6g}, "
                    f"vi_residual={final['vi_residual']:.6g}"
                )
            return EXIT_OK
        if args.command == "validate":
            report = validate_config(args.config)
            for issue in report.issues:
                print(f"issue: {issue}")
            for warning in report.warnings:
                print(f"warning: {warning}")
            if report.ok and not report.warnings:
                print("config is valid")
            return EXIT_OK if report.ok else EXIT_CONFIG
        if args.command == "constants":
            print(json.dumps(constants_report(args.config), indent=2, sort_keys=True))
            return EXIT_OK
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"solver diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except StrongMonotonicityUnavailableError as exc:
        print(f"{exc}", file=sys.stderr)
        return EXIT_NO_STRONG_MONO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
