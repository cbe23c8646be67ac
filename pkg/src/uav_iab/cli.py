"""Batch command line front end.

``uav-iab run|baseline|sweep|validate [--config FILE] [--seed N] ...``

Exit codes: 0 success, 2 configuration error, 3 no feasible placement in any
trial of any UAV arm.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .harness import (ConfigError, ExperimentConfig, altitude_sweep, desk_config, emit_outputs,
                      run_baseline, run_experiment)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3


def _altitudes(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of metres: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty altitude list")
    return vals


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment config (defaults: desk scale)")
    common.add_argument("--scenario", choices=("A", "B"),
                        help="scenario kind when no config file is given (default A)")
    common.add_argument("--seed", type=_seed, help="master seed")
    common.add_argument("--out", help="output directory")
    common.add_argument("--altitudes", type=_altitudes, help="sweep altitudes, e.g. 200,500")
    common.add_argument("--grid-step", type=float, help="horizontal grid step in metres")
    common.add_argument("--trials", type=int, help="number of trials")
    common.add_argument("--csi", type=int, help="CSI instants per trial")
    common.add_argument("--workers", type=int, help="parallel trial workers")

    parser = argparse.ArgumentParser(prog="uav-iab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="UAV arm plus paired baseline")
    sub.add_parser("baseline", parents=[common], help="no-UAV arm only")
    sub.add_parser("sweep", parents=[common], help="placement at fixed hovering altitudes")
    sub.add_parser("validate", parents=[common], help="check the config and exit")
    return parser


def load_config(args) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.load(args.config)
        if args.scenario:
            config = replace(config, scenario=replace(config.scenario, kind=args.scenario))
    else:
        config = desk_config(args.scenario or "A")
    overrides = {"master_seed": args.seed, "output_dir": args.out, "altitudes": args.altitudes,
                 "grid_step": args.grid_step, "n_trials": args.trials,
                 "n_csi_instants": args.csi, "workers": args.workers}
    return replace(config, **{k: v for k, v in overrides.items() if v is not None})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        problems = config.validate()
        if problems:
            raise ConfigError("; ".join(problems))
        if args.command == "validate":
            print("config ok")
            return EXIT_OK
        if args.command == "run":
            summary, traces = run_experiment(config)
        elif args.command == "baseline":
            summary, traces = run_baseline(config)
        else:
            summary, traces = altitude_sweep(config)
        paths = emit_outputs(summary, traces, config.output_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for name, path in paths.items():
        print(f"{name}: {path}")
    if summary.infeasible_everywhere():
        print("no feasible placement in any trial", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
