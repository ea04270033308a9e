"""Dense reference implementation used to cross-check the ladder code.

The generator is assembled from the operators of the full Hamiltonian on
``CPB (x) Fock(0..n_max)`` and only then restricted to the ladder, so it
shares no code with :func:`cpbnr.dynamics.derivative`. Propagation uses
matrix exponentials of a fourth-order Magnus step, which is unrelated to
the RK4 path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import ConvergenceError, DegenerateStateError, DimensionError, NumericsError
from .model import ModelParams, coupling_at
from .state import LadderState

MAX_N = 64
SELF_CONSISTENCY = 1e-10
DEFAULT_PIECE = 2.5e-4


@dataclass(frozen=True)
class DenseOperator:
    """Generator ``G = -iH`` on the ladder, ordered ``|e,0..n_max-1>`` then ``|g,1..n_max>``."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def apply(self, state: LadderState) -> LadderState:
        return LadderState.from_vector(self.entries @ state.as_vector())


@lru_cache(maxsize=16)
def _operator_blocks(n_max: int):
    """Ladder restrictions of ``a^dag a``, ``sigma_z``, the BS coupling and ``|e><e|``.

    Operators live on CPB (x) Fock(0..n_max) with CPB index 0 = |e>, 1 = |g>.
    """
    n_fock = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, n_fock)), k=1).astype(complex)
    num = a.conj().T @ a
    sqrt_num = np.diag(np.sqrt(np.arange(n_fock))).astype(complex)
    eye_f = np.eye(n_fock)
    sig_p = np.array([[0, 1], [0, 0]], complex)  # |e><g|
    sig_m = sig_p.T.copy()
    sig_z = np.diag([1.0, -1.0]).astype(complex)
    proj_e = np.diag([1.0, 0.0]).astype(complex)
    eye_c = np.eye(2)

    idx = _ladder_indices(n_max)
    cut = np.ix_(idx, idx)
    blocks = (
        np.kron(eye_c, num),
        np.kron(sig_z, eye_f),
        np.kron(sig_p, a @ sqrt_num) + np.kron(sig_m, sqrt_num @ a.conj().T),
        np.kron(proj_e, eye_f),
    )
    out = tuple(b[cut].copy() for b in blocks)
    for b in out:
        b.flags.writeable = False
    return out


def _ladder_indices(n_max: int) -> np.ndarray:
    n_fock = n_max + 1
    e_idx = np.arange(n_max)  # |e, n>
    g_idx = n_fock + np.arange(1, n_max + 1)  # |g, n+1>
    return np.concatenate([e_idx, g_idx])


def build_generator(params: ModelParams, t: float, n_max: int) -> DenseOperator:
    if n_max > MAX_N:
        raise DimensionError(f"dense oracle limited to nMax <= {MAX_N}, got {n_max}")
    if n_max < 1:
        raise DimensionError(f"nMax must be >= 1, got {n_max}")
    num, sig_z, coupling, proj_e = _operator_blocks(n_max)
    omega = params.omega0 + params.detuning.evaluate(t)
    lam = coupling_at(params, t)
    gamma = params.gamma.evaluate(t)
    delta = params.delta.evaluate(t)
    h = (
        omega * num
        + 0.5 * params.omega_c * sig_z
        + lam * coupling
        - 1j * gamma * proj_e
        - 1j * delta * num
    )
    return DenseOperator(-1j * h)


_GAUSS_OFFSET = math.sqrt(3.0) / 6.0


def _magnus_propagate(params, vec, n_max, t_end, pieces):
    dt = t_end / pieces
    for k in range(pieces):
        t0 = k * dt
        g1 = build_generator(params, t0 + (0.5 - _GAUSS_OFFSET) * dt, n_max).entries
        g2 = build_generator(params, t0 + (0.5 + _GAUSS_OFFSET) * dt, n_max).entries
        omega = 0.5 * dt * (g1 + g2) - (math.sqrt(3.0) / 12.0) * dt * dt * (g1 @ g2 - g2 @ g1)
        vec = expm(omega) @ vec
    return vec


def reference_propagate(
    params: ModelParams,
    initial: LadderState,
    t_end: float,
    substeps: int | None = None,
) -> LadderState:
    """Propagate to ``t_end`` by piecewise matrix exponentials.

    The piece count starts at ``substeps`` and is doubled until two
    successive results agree to ``1e-10``; two doublings are allowed.
    """
    if substeps is None:
        substeps = max(1, math.ceil(t_end / DEFAULT_PIECE))
    vec0 = initial.as_vector()
    n_max = initial.n_max
    prev = _magnus_propagate(params, vec0, n_max, t_end, substeps)
    for level in (1, 2):
        cur = _magnus_propagate(params, vec0, n_max, t_end, substeps * 2**level)
        diff = float(np.max(np.abs(cur - prev)))
        if diff < SELF_CONSISTENCY:
            return LadderState.from_vector(cur)
        prev = cur
    raise ConvergenceError(
        f"reference propagation not self-consistent after two halvings (diff {diff:.3e})"
    )


def partial_trace_entropy(state: LadderState, side: str) -> float:
    """Entropy of the ``"cpb"`` or ``"nr"`` marginal of the normalized joint pure state."""
    side = side.lower()
    if side not in ("cpb", "nr"):
        raise ValueError(f"side must be 'cpb' or 'nr', got {side!r}")
    n_fock = state.n_max + 1
    psi = np.zeros((2, n_fock), complex)
    psi[0, : state.n_max] = state.c_e
    psi[1, 1:] = state.c_g
    total = float(np.vdot(psi, psi).real)
    if total == 0:
        raise DegenerateStateError("entropy of a zero-norm state")
    psi = psi.ravel() / math.sqrt(total)
    rho = np.outer(psi, psi.conj()).reshape(2, n_fock, 2, n_fock)
    if side == "cpb":
        reduced = np.einsum("injn->ij", rho)
    else:
        reduced = np.einsum("aiaj->ij", rho)
    eigs = np.linalg.eigvalsh(reduced)
    if eigs.min() < -1e-12:
        raise NumericsError(f"negative eigenvalue {eigs.min():.3e} in reduced density matrix")
    p = eigs[eigs > 0]
    return float(-np.sum(p * np.log(p)))
