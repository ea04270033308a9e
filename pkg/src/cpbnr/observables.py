"""Entropy, excitation inversion and diagnostics of ladder states.

The functions here accept a single :class:`LadderState`. The ``*_arrays``
helpers take amplitude arrays with the ladder on the last axis so a whole
trajectory can be processed at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, NumericsError
from .state import LadderState

NEGATIVE_EIG_TOL = 1e-12


@dataclass(frozen=True)
class ObservableRow:
    t: float
    entropy: float
    inversion: float
    norm2: float
    mean_n: float


def _branch_sums(c_e, c_g):
    pe = np.abs(c_e) ** 2
    pg = np.abs(c_g) ** 2
    a = pe.sum(axis=-1)
    b = pg.sum(axis=-1)
    # c_g[..., n] is the |g, n+1> amplitude, paired with c_e[..., n+1]
    x = np.sum(np.conj(c_e[..., 1:]) * c_g[..., :-1], axis=-1)
    return a, b, x


def reduced_eigenvalues_arrays(c_e, c_g):
    """Eigenvalues ``(s_plus, s_minus)`` of the CPB reduced matrix ``[[A, X], [X*, B]]``."""
    a, b, x = _branch_sums(c_e, c_g)
    trace = a + b
    root = np.sqrt((a - b) ** 2 + 4.0 * np.abs(x) ** 2)
    s_plus = 0.5 * (trace + root)
    # determinant form avoids cancellation in the small eigenvalue
    det = a * b - np.abs(x) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        s_minus = np.where(s_plus > 0, det / np.where(s_plus > 0, s_plus, 1.0), 0.0)
    if np.any(s_minus < -NEGATIVE_EIG_TOL * np.maximum(trace, 1.0)):
        raise NumericsError(f"negative reduced eigenvalue {np.min(s_minus):.3e}")
    s_minus = np.clip(s_minus, 0.0, None)
    return s_plus, s_minus


def reduced_eigenvalues(state: LadderState) -> tuple[float, float]:
    s_plus, s_minus = reduced_eigenvalues_arrays(state.c_e, state.c_g)
    return float(s_plus), float(s_minus)


def _shannon(*probs):
    total = 0.0
    for p in probs:
        p = np.asarray(p, dtype=float)
        safe = np.where(p > 0, p, 1.0)
        total = total - np.where(p > 0, p * np.log(safe), 0.0)
    return total


def entropy_arrays(c_e, c_g, normalize=True):
    s_plus, s_minus = reduced_eigenvalues_arrays(c_e, c_g)
    if normalize:
        n2 = s_plus + s_minus
        if np.any(n2 <= 0):
            raise DegenerateStateError("entropy of a zero-norm state")
        s_plus, s_minus = s_plus / n2, s_minus / n2
    return _shannon(s_plus, s_minus)


def entropy(state: LadderState, normalize: bool = True) -> float:
    """Von Neumann entropy (nats) of either subsystem.

    With ``normalize`` the reduced eigenvalues are divided by the state norm
    first, giving the entropy of the conditional (renormalized) state; without
    it the eigenvalues of the decaying amplitudes are used as they are.
    """
    return float(entropy_arrays(state.c_e, state.c_g, normalize))


def inversion_arrays(c_e, c_g):
    return np.sum(np.abs(c_e) ** 2, axis=-1) - np.sum(np.abs(c_g) ** 2, axis=-1)


def inversion(state: LadderState) -> float:
    """Excited minus ground branch probability, without renormalization."""
    return float(inversion_arrays(state.c_e, state.c_g))


def norm2_arrays(c_e, c_g):
    return np.sum(np.abs(c_e) ** 2, axis=-1) + np.sum(np.abs(c_g) ** 2, axis=-1)


def mean_n_arrays(c_e, c_g):
    n = np.arange(c_e.shape[-1])
    total = norm2_arrays(c_e, c_g)
    if np.any(total <= 0):
        raise DegenerateStateError("mean excitation of a zero-norm state")
    weighted = np.sum(n * np.abs(c_e) ** 2, axis=-1) + np.sum((n + 1) * np.abs(c_g) ** 2, axis=-1)
    return weighted / total


def resonator_reduced_matrix(state: LadderState) -> np.ndarray:
    """Resonator density matrix on Fock states ``0..n_max`` (trace = norm2)."""
    n = state.n_max
    psi_e = np.zeros(n + 1, complex)
    psi_g = np.zeros(n + 1, complex)
    psi_e[:n] = state.c_e
    psi_g[1:] = state.c_g
    return np.outer(psi_e, psi_e.conj()) + np.outer(psi_g, psi_g.conj())


def entropy_both_sides(state: LadderState, normalize: bool = True) -> tuple[float, float]:
    """CPB entropy from the 2x2 closed form and resonator entropy from an eigensolve."""
    s_cpb = entropy(state, normalize)
    rho = resonator_reduced_matrix(state)
    eigs = np.linalg.eigvalsh(rho)
    trace = float(np.sum(eigs))
    if normalize:
        if trace <= 0:
            raise DegenerateStateError("entropy of a zero-norm state")
        eigs = eigs / trace
    if np.any(eigs < -NEGATIVE_EIG_TOL * max(trace, 1.0)):
        raise NumericsError(f"negative resonator eigenvalue {eigs.min():.3e}")
    s_nr = float(_shannon(np.clip(eigs, 0.0, None)).sum()) if eigs.size else 0.0
    return s_cpb, s_nr


def observe(t: float, state: LadderState, normalize: bool = True) -> ObservableRow:
    n2 = float(norm2_arrays(state.c_e, state.c_g))
    return ObservableRow(
        t=t,
        entropy=entropy(state, normalize),
        inversion=inversion(state),
        norm2=n2,
        mean_n=float(mean_n_arrays(state.c_e, state.c_g)),
    )
