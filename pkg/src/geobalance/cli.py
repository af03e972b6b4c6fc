"""Command-line entry point: experiment dispatch and a quick invariant
self-check."""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

import numpy as np

from . import checks
from .config import (ConfigError, parse_config, write_drift_csv,
                     write_timeseries_csv)
from .experiments import (run_drift_experiment, run_shear_instability,
                          run_two_particle_exchange)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geobalance",
        description="Semi-geostrophic particle-motion laboratory")
    sub = parser.add_subparsers(dest="command")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--experiment", choices=["drift", "exchange", "shear"])
    common.add_argument("--eps", type=float)
    common.add_argument("--eps-list", dest="eps_list",
                        type=lambda s: [float(v) for v in s.split(",")])
    common.add_argument("--dt", type=float)
    common.add_argument("--horizon", type=float)
    common.add_argument("--n-particles", dest="n_particles", type=int)
    common.add_argument("--grid", type=int)
    common.add_argument("--alpha", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--stride", type=int)
    common.add_argument("--workers", type=int)
    for name in ("drift", "exchange", "shear"):
        sub.add_parser(name, parents=[common])
    sub.add_parser("check", parents=[common])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage itself
        return 0 if exc.code in (0, None) else 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1

    if args.command == "check":
        return 0 if checks.run_all() else 2

    overrides = {k: v for k, v in vars(args).items()
                 if k not in ("command", "config")}
    overrides.setdefault("experiment", None)
    if overrides["experiment"] is None:
        overrides["experiment"] = args.command
    try:
        cfg = parse_config(args.config, overrides)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    os.makedirs(cfg.out, exist_ok=True)
    try:
        if cfg.experiment == "drift":
            eps_list = [cfg.eps] if cfg.eps is not None else cfg.eps_list
            reports, fit = run_drift_experiment(eps_list, workers=cfg.workers)
            path = os.path.join(cfg.out, "drift.csv")
            write_drift_csv(reports, fit, path)
            print(f"wrote {path}  (fit: {fit[0]:.3g} * exp(-{fit[1]:.3g}/eps))")
        elif cfg.experiment == "exchange":
            record = run_two_particle_exchange(cfg.spec())
            path = os.path.join(cfg.out, "exchange.csv")
            write_timeseries_csv(record, path)
            print(f"wrote {path}  ({len(record)} samples)")
        else:
            record = run_shear_instability(cfg.spec())
            path = os.path.join(cfg.out, "shear.csv")
            write_timeseries_csv(record, path)
            print(f"wrote {path}  ({len(record)} samples)")
    except RuntimeError as exc:
        print(f"runtime abort: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
