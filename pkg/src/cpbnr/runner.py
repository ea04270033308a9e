"""Single runs, parameter sweeps and their delimited output files."""

from __future__ import annotations

import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .config import RunConfig, config_hash
from .dynamics import Trajectory, integrate
from .errors import CpbnrError, ValidationError
from .model import Constant, Sinusoid, Zero
from .state import CoherentSpec, initial_state, truncation_for

log = logging.getLogger(__name__)

COLUMNS = ("t", "entropy", "inversion", "norm2", "meanN")
SWEEP_AXES = ("gamma", "delta", "eta", "omegaPrime", "Delta", "meanN")


def simulate(cfg: RunConfig, **kwargs) -> Trajectory:
    n_max = cfg.n_max if cfg.n_max is not None else truncation_for(cfg.initial, cfg.tail_tol)
    psi0 = initial_state(cfg.initial, n_max)
    return integrate(cfg.params, psi0, cfg.plan, normalize_entropy=cfg.normalize_entropy, **kwargs)


def _fmt(x: float) -> str:
    return format(float(x), ".15g")


def format_rows(traj: Trajectory, fmt: str = "csv") -> str:
    cols = (traj.times, traj.entropy, traj.inversion, traj.norm2, traj.mean_n)
    if fmt == "csv":
        lines = [",".join(COLUMNS)]
        lines.extend(",".join(_fmt(v) for v in row) for row in zip(*cols))
    elif fmt == "jsonl":
        lines = [
            "{" + ", ".join(f'"{k}": {_fmt(v)}' for k, v in zip(COLUMNS, row)) + "}"
            for row in zip(*cols)
        ]
    else:
        raise ValidationError(f"unknown output format {fmt!r}")
    return "\n".join(lines) + "\n"


def write_trajectory(traj: Trajectory, path, fmt: str = "csv") -> None:
    text = format_rows(traj, fmt)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run_scenario(cfg: RunConfig) -> Trajectory:
    """Integrate ``cfg`` and write its rows to ``cfg.output_path`` (``-`` or None: stdout)."""
    traj = simulate(cfg, keep_states=False)
    write_trajectory(traj, cfg.output_path, cfg.output_format)
    return traj


@dataclass(frozen=True)
class SweepSpec:
    base: RunConfig
    axis: str
    values: tuple

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValidationError(f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if len(self.values) == 0:
            raise ValidationError("sweep needs at least one value")
        if len(set(self.values)) != len(self.values):
            raise ValidationError("sweep values must be distinct")
        for v in self.values:
            apply_axis(self.base, self.axis, v)


def apply_axis(cfg: RunConfig, axis: str, value: float) -> RunConfig:
    """Copy of ``cfg`` with one sweep parameter replaced (validated)."""
    if not math.isfinite(value):
        raise ValidationError(f"{axis} value must be finite, got {value}")
    p = cfg.params
    if axis in ("gamma", "delta"):
        if value < 0:
            raise ValidationError(f"{axis} must be >= 0, got {value}")
        prof = Constant(value) if value else Zero()
        return replace(cfg, params=replace(p, **{axis: prof}))
    if axis == "Delta":
        return replace(cfg, params=replace(p, detuning=Constant(value) if value else Zero()))
    if axis in ("eta", "omegaPrime"):
        if not isinstance(p.detuning, Sinusoid):
            raise ValidationError(f"sweeping {axis} needs a sinusoidal detuning in the base config")
        det = p.detuning
        new = Sinusoid(value, det.omega_prime) if axis == "eta" else Sinusoid(det.eta, value)
        return replace(cfg, params=replace(p, detuning=new))
    if axis == "meanN":
        return replace(cfg, initial=CoherentSpec(value, cfg.initial.phase))
    raise ValidationError(f"unknown sweep axis {axis!r}")


def point_filename(axis: str, value: float, fmt: str) -> str:
    return f"{axis}={value:g}.{fmt}"


def run_sweep(spec: SweepSpec, out_dir, jobs: int = 1) -> dict:
    """Run every sweep point and write one file per point plus ``manifest.json``.

    Points may run concurrently; the manifest always follows the input value
    order. A failed point is recorded in the manifest instead of aborting
    the sweep.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fmt = spec.base.output_format

    def one(value):
        name = point_filename(spec.axis, value, fmt)
        entry = {"value": value, "file": name}
        try:
            cfg = replace(apply_axis(spec.base, spec.axis, value), output_path=str(out_dir / name))
            traj = run_scenario(cfg)
        except CpbnrError as exc:
            log.warning("sweep point %s=%g failed: %s", spec.axis, value, exc)
            entry.update(status="error", error=f"{type(exc).__name__}: {exc}")
        else:
            entry.update(status="ok", rows=len(traj))
        return entry

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        points = list(pool.map(one, spec.values))

    manifest = {
        "axis": spec.axis,
        "values": list(spec.values),
        "config_hash": config_hash(spec.base),
        "format": fmt,
        "columns": list(COLUMNS),
        "points": points,
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest
