"""Equations of motion of the ladder amplitudes and their RK4 integration.

Each pair ``(C_e,n, C_g,n+1)`` evolves as

    dC_e,n/dt   = (-i n w(t) - i wc/2 - gamma - n delta) C_e,n   - i lam(t) (n+1) C_g,n+1
    dC_g,n+1/dt = (-i (n+1) w(t) + i wc/2 - (n+1) delta) C_g,n+1 - i lam(t) (n+1) C_e,n

and never exchanges amplitude with another pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import _kernel
from .errors import NumericsError, TruncationOverflowError, ValidationError
from .model import ModelParams, coupling_at, omega_at
from .observables import (
    ObservableRow,
    entropy_arrays,
    inversion_arrays,
    mean_n_arrays,
    norm2_arrays,
)
from .state import LadderState

STABILITY_LIMIT = 0.25
OVERFLOW_TOL = 1e-8
FRAMES = ("interaction", "lab")


def derivative(params: ModelParams, t: float, state: LadderState) -> LadderState:
    """Right-hand side of the amplitude equations in the lab frame."""
    w = omega_at(params, t)
    lam = coupling_at(params, t)
    gamma = params.gamma.evaluate(t)
    delta = params.delta.evaluate(t)
    n = np.arange(state.n_max)
    k = n + 1.0
    diag_e = -1j * (n * w + 0.5 * params.omega_c) - gamma - n * delta
    diag_g = -1j * (k * w - 0.5 * params.omega_c) - k * delta
    d_e = diag_e * state.c_e - 1j * lam * k * state.c_g
    d_g = diag_g * state.c_g - 1j * lam * k * state.c_e
    return LadderState(d_e, d_g)


def rk4_step(params: ModelParams, t: float, state: LadderState, h: float) -> LadderState:
    """One classical RK4 step of the lab-frame equations."""
    y_e, y_g = state.c_e, state.c_g
    k1 = derivative(params, t, state)
    k2 = derivative(params, t + h / 2, LadderState(y_e + h / 2 * k1.c_e, y_g + h / 2 * k1.c_g))
    k3 = derivative(params, t + h / 2, LadderState(y_e + h / 2 * k2.c_e, y_g + h / 2 * k2.c_g))
    k4 = derivative(params, t + h, LadderState(y_e + h * k3.c_e, y_g + h * k3.c_g))
    out_e = y_e + h / 6 * (k1.c_e + 2 * k2.c_e + 2 * k3.c_e + k4.c_e)
    out_g = y_g + h / 6 * (k1.c_g + 2 * k2.c_g + 2 * k3.c_g + k4.c_g)
    if not (np.all(np.isfinite(out_e)) and np.all(np.isfinite(out_g))):
        raise NumericsError(f"non-finite amplitude after RK4 step at t={t + h:g}")
    return LadderState(out_e, out_g)


@dataclass(frozen=True)
class IntegrationPlan:
    t_end: float
    step: float
    record_every: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise ValidationError(f"tEnd must be positive, got {self.t_end}")
        if not (math.isfinite(self.step) and self.step > 0):
            raise ValidationError(f"step must be positive, got {self.step}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValidationError(f"recordEvery must be a positive integer, got {self.record_every}")
        n = self.n_steps
        if n < 1 or abs(n * self.step - self.t_end) > 1e-9 * self.t_end:
            raise ValidationError(
                f"tEnd={self.t_end} is not an integer multiple of step={self.step}"
            )
        if n % self.record_every:
            raise ValidationError(
                f"{n} steps is not a multiple of recordEvery={self.record_every}"
            )

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.step))

    @property
    def record_interval(self) -> float:
        return self.step * self.record_every

    def fastest_rate(self, params: ModelParams, n_max: int, frame: str = "interaction") -> float:
        """Largest rate that the chosen frame leaves for RK4 to resolve."""
        f_max = params.detuning.max_abs()
        lam_max = params.lambda0 * math.sqrt(1.0 + f_max / params.omega0)
        if frame == "lab":
            return n_max * (params.omega0 + f_max) + 0.5 * params.omega_c + lam_max * n_max
        return lam_max * n_max + abs(params.omega0 - params.omega_c) + f_max

    def check(self, params: ModelParams, n_max: int, frame: str = "interaction"):
        rate = self.fastest_rate(params, n_max, frame)
        if self.step * rate > STABILITY_LIMIT:
            raise ValidationError(
                f"step {self.step:g} too large for the {frame} frame: "
                f"step * fastest rate = {self.step * rate:.3g} > {STABILITY_LIMIT}"
            )


@dataclass
class Trajectory:
    """Record of a run: lab-frame snapshots plus observable columns."""

    times: np.ndarray
    entropy: np.ndarray
    inversion: np.ndarray
    norm2: np.ndarray
    mean_n: np.ndarray
    c_e: np.ndarray | None = None
    c_g: np.ndarray | None = None
    normalized_entropy: bool = True
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return self.times.size

    @property
    def rows(self) -> list[ObservableRow]:
        return [
            ObservableRow(float(t), float(s), float(i), float(n), float(m))
            for t, s, i, n, m in zip(self.times, self.entropy, self.inversion, self.norm2, self.mean_n)
        ]

    @property
    def states(self) -> list[LadderState]:
        if self.c_e is None:
            raise ValueError("trajectory was recorded without states")
        return [LadderState(e, g) for e, g in zip(self.c_e, self.c_g)]

    def state_at(self, i: int) -> LadderState:
        if self.c_e is None:
            raise ValueError("trajectory was recorded without states")
        return LadderState(self.c_e[i].copy(), self.c_g[i].copy())


Observer = Callable[[float, LadderState], None]


def integrate(
    params: ModelParams,
    initial: LadderState,
    plan: IntegrationPlan,
    observers: Iterable[Observer] = (),
    *,
    frame: str = "interaction",
    normalize_entropy: bool = True,
    keep_states: bool = True,
    overflow_tol: float | None = OVERFLOW_TOL,
) -> Trajectory:
    """Advance ``initial`` from t=0 to ``plan.t_end`` with fixed-step RK4.

    ``frame="interaction"`` integrates the free phases and loss factors of
    every slot exactly and applies RK4 to the pair coupling only; this is
    what makes the ``n * omega0 ~ 1e5`` phases of realistic ladders
    tractable. ``frame="lab"`` applies RK4 to the equations as written and
    needs ``step * n_max * omega0`` well below one.

    ``observers`` are called as ``observer(t, state)`` at every record point,
    in time order. Raises :class:`TruncationOverflowError` when the top pair
    holds more than ``overflow_tol`` at a record point (``None`` disables the
    check).
    """
    if frame not in FRAMES:
        raise ValidationError(f"frame must be one of {FRAMES}, got {frame!r}")
    plan.check(params, initial.n_max, frame)
    for name in ("gamma", "delta"):
        if getattr(params, name).evaluate(0.0) < 0:
            raise ValidationError(f"{name} must be >= 0")
    kind, a, b = params.detuning.encode()
    rec_e, rec_g, status = _kernel.propagate(
        np.ascontiguousarray(initial.c_e, dtype=np.complex128),
        np.ascontiguousarray(initial.c_g, dtype=np.complex128),
        float(params.omega0),
        float(params.omega_c),
        float(params.lambda0),
        float(params.gamma.evaluate(0.0)),
        float(params.delta.evaluate(0.0)),
        kind,
        a,
        b,
        float(plan.step),
        plan.n_steps,
        int(plan.record_every),
        frame == "lab",
    )
    times = np.arange(rec_e.shape[0]) * plan.record_interval
    if status >= 0:
        raise NumericsError(f"non-finite amplitudes at t={times[status]:.6g}")

    if overflow_tol is not None:
        top = np.abs(rec_e[:, -1]) ** 2 + np.abs(rec_g[:, -1]) ** 2
        bad = np.nonzero(top > overflow_tol)[0]
        if bad.size:
            i = bad[0]
            raise TruncationOverflowError(
                f"top-pair occupancy {top[i]:.3e} exceeds {overflow_tol:g} at t={times[i]:.6g}; "
                f"increase nMax"
            )

    traj = Trajectory(
        times=times,
        entropy=entropy_arrays(rec_e, rec_g, normalize_entropy),
        inversion=inversion_arrays(rec_e, rec_g),
        norm2=norm2_arrays(rec_e, rec_g),
        mean_n=mean_n_arrays(rec_e, rec_g),
        c_e=rec_e if keep_states else None,
        c_g=rec_g if keep_states else None,
        normalized_entropy=normalize_entropy,
        meta={"frame": frame, "step": plan.step, "n_max": initial.n_max},
    )
    observers = list(observers)
    if observers:
        for t, e, g in zip(times, rec_e, rec_g):
            snap = LadderState(e.copy(), g.copy())
            for obs in observers:
                obs(float(t), snap)
    return traj
