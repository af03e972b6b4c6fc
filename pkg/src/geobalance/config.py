"""Run configuration: `key = value` file parsing with CLI-override
precedence, and bit-stable CSV output."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from typing import List, Optional, Sequence

import numpy as np

from .experiments import DEFAULT_EPS_SWEEP, ExperimentSpec
from .integrators import TrajectoryRecord
from .normalform import DriftReport


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    experiment: str = ""
    eps: Optional[float] = None
    eps_list: Sequence[float] = DEFAULT_EPS_SWEEP
    dt: Optional[float] = None
    horizon: Optional[float] = None
    n_particles: Optional[int] = None
    grid: Optional[int] = None
    alpha: float = 0.2015
    seed: int = 0
    out: str = "."
    stride: int = 1
    workers: int = 1

    def validate(self):
        if self.experiment not in ("drift", "exchange", "shear"):
            raise ConfigError(
                f"missing or unknown experiment kind {self.experiment!r}")
        if self.stride < 1:
            raise ConfigError(f"stride must be >= 1, got {self.stride}")
        if self.dt is not None and self.dt <= 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        return self

    def spec(self) -> ExperimentSpec:
        return ExperimentSpec(kind=self.experiment, eps=self.eps,
                              eps_list=self.eps_list, dt=self.dt,
                              horizon=self.horizon,
                              n_particles=self.n_particles,
                              grid_m=self.grid, alpha=self.alpha,
                              seed=self.seed, stride=self.stride,
                              workers=self.workers)


_PARSERS = {
    "experiment": str,
    "eps": float,
    "eps_list": lambda s: [float(v) for v in s.replace(",", " ").split()],
    "dt": float,
    "horizon": float,
    "n_particles": int,
    "grid": int,
    "alpha": float,
    "seed": int,
    "out": str,
    "stride": int,
    "workers": int,
}


def parse_config(path: Optional[str] = None, overrides: Optional[dict] = None
                 ) -> RunConfig:
    """Resolve a RunConfig from a `key = value` file plus CLI overrides.

    Precedence: CLI overrides > file values > defaults.  `#` starts a
    comment; unknown keys and unparsable values are reported with their
    line number.
    """
    cfg = RunConfig()
    if "GEOBALANCE_OUT" in os.environ:
        cfg.out = os.environ["GEOBALANCE_OUT"]
    if path is not None:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, _, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if key not in _PARSERS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                try:
                    setattr(cfg, key, _PARSERS[key](value))
                except (TypeError, ValueError) as exc:
                    raise ConfigError(
                        f"{path}:{lineno}: bad value for {key!r}: {exc}"
                    ) from exc
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _PARSERS:
            raise ConfigError(f"unknown option {key!r}")
        setattr(cfg, key, value)
    return cfg.validate()


def _fmt(x: float) -> str:
    """17 significant digits: round-trip exact for 64-bit floats."""
    return format(float(x), ".17g")


def write_timeseries_csv(record: TrajectoryRecord, path: str) -> None:
    """Write sampled diagnostics and expanded state columns."""
    if len(record) == 0:
        raise ValueError("refusing to write an empty record")
    n = record.p.shape[1] // 2
    cols = ["tau", "K", "H", "K_ag"]
    for i in range(1, n + 1):
        cols += [f"q{i}x", f"q{i}y"]
    for i in range(1, n + 1):
        cols += [f"p{i}x", f"p{i}y"]
    try:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(cols) + "\n")
            for k in range(len(record)):
                row = [record.tau[k], record.kinetic[k], record.energy[k],
                       record.kinetic_ag[k], *record.q[k], *record.p[k]]
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write time series to {path}: {exc}") from exc


def write_drift_csv(reports: List[DriftReport], fit, path: str) -> None:
    fit_c_amp, fit_c_rate = fit
    try:
        with open(path, "w", newline="") as fh:
            fh.write("eps,delta_K,delta_E,fit_C,fit_c\n")
            for r in reports:
                row = [r.eps, r.delta_k, r.delta_e, fit_c_amp, fit_c_rate]
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write drift table to {path}: {exc}") from exc


def read_csv(path: str):
    """Read back one of our CSV files; returns (columns, array)."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data
