"""Command-line experiment runner.

Usage::

    holomimo list
    holomimo run <experiment> [--config PATH] [--out DIR] [--seed N]

``run`` writes <out>/<experiment>.csv and <experiment>.svg (plus a
key = value summary for the packing experiment) and exits 0 on success,
2 for an unknown experiment, 3 for a config problem, 4 for a numerical
failure.  EMIT_HOLO_THREADS optionally caps worker parallelism; results
never depend on it because per-trial seeds are counter-derived and
reductions happen in trial order.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigError, NumericalError
from .experiments import REGISTRY, list_experiments, load_config, run_experiment

EXIT_OK = 0
EXIT_UNKNOWN_EXPERIMENT = 2
EXIT_CONFIG_ERROR = 3
EXIT_NUMERICAL_ERROR = 4


def worker_cap() -> int:
    """Validated EMIT_HOLO_THREADS value (default 1)."""
    raw = os.environ.get("EMIT_HOLO_THREADS")
    if raw is None or raw.strip() == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"EMIT_HOLO_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError("EMIT_HOLO_THREADS must be at least 1")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holomimo",
                                     description="EM channel and information-measure experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run one registered experiment")
    run_p.add_argument("experiment")
    run_p.add_argument("--config", default=None, help="INI config path (default: shipped config)")
    run_p.add_argument("--out", default="out", help="output directory")
    run_p.add_argument("--seed", type=int, default=None, help="override the master seed")
    sub.add_parser("list", help="list registered experiments")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list":
        for name, description in list_experiments():
            print(f"{name:24s} {description}")
        return EXIT_OK

    name = args.experiment
    if name not in REGISTRY:
        print(f"unknown experiment: {name!r} (see 'holomimo list')", file=sys.stderr)
        return EXIT_UNKNOWN_EXPERIMENT
    try:
        worker_cap()
        cfg = load_config(name, config_path=args.config, out_dir=args.out,
                          seed_override=args.seed)
        run_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
