"""Command-line entry point.

    pronysar run --preset fig3 [--config file.ini] [--seed N] [--out DIR]
                 [--realizations K] [--threads K]
    pronysar list-presets

Exit codes: 0 success, 2 configuration error, 3 numerical error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .config import ExperimentConfig, apply_config_file
from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    NumericalError,
    SingularGeometryError,
    WindowTooSmallError,
)
from .experiments import run_experiment
from .presets import list_presets, load_preset


def build_parser():
    parser = argparse.ArgumentParser(prog="pronysar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run an experiment preset or config file")
    runp.add_argument("--preset", help="built-in preset name")
    runp.add_argument("--config", help="INI-style config file with overrides")
    runp.add_argument("--seed", type=int, help="master seed")
    runp.add_argument("--out", help="output directory")
    runp.add_argument("--realizations", type=int, help="Monte Carlo realizations")
    runp.add_argument(
        "--threads", type=int,
        help="cap BLAS threads (needs threadpoolctl; otherwise ignored)",
    )
    sub.add_parser("list-presets", help="list the built-in presets")
    return parser


def _resolve_config(args) -> ExperimentConfig:
    if not args.preset and not args.config:
        raise ConfigError("run needs --preset and/or --config")
    if args.preset:
        config = load_preset(args.preset)
    else:
        config = ExperimentConfig(name="custom", kind="point_image",
                                  acquisition=load_preset("fig3").acquisition)
    if args.config:
        config = apply_config_file(config, args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, master_seed=args.seed)
    if args.out is not None:
        config = dataclasses.replace(config, out_dir=args.out)
    if args.realizations is not None:
        config = dataclasses.replace(config, realizations=args.realizations)
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-presets":
        print(list_presets())
        return 0
    try:
        if args.threads:
            try:
                import threadpoolctl

                threadpoolctl.threadpool_limits(args.threads)
            except ImportError:
                print("threadpoolctl not available; --threads ignored", file=sys.stderr)
        config = _resolve_config(args)
        files = run_experiment(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, SingularGeometryError, DomainError,
            WindowTooSmallError, DimensionError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
