"""Truncated two-branch Fock ladder and coherent initial states.

Slot ``n`` of ``c_e`` holds the amplitude of ``|e, n>`` and slot ``k`` of
``c_g`` holds the amplitude of ``|g, k+1>``. There is no ``|g, 0>`` slot:
that state is never reached from ``|e>|alpha>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, TruncationError, ValidationError

DEFAULT_TAIL_TOL = 1e-10
PADDING = 10
_INIT_TAIL_LIMIT = 1e-8


@dataclass
class LadderState:
    c_e: np.ndarray
    c_g: np.ndarray

    def __post_init__(self):
        self.c_e = np.asarray(self.c_e, dtype=complex)
        self.c_g = np.asarray(self.c_g, dtype=complex)
        if self.c_e.ndim != 1 or self.c_e.shape != self.c_g.shape or self.c_e.size < 1:
            raise ValidationError(
                f"c_e and c_g must be 1-d with equal length >= 1, "
                f"got {self.c_e.shape} and {self.c_g.shape}"
            )

    @property
    def n_max(self) -> int:
        return self.c_e.size

    @classmethod
    def zeros(cls, n_max: int) -> "LadderState":
        return cls(np.zeros(n_max, complex), np.zeros(n_max, complex))

    def copy(self) -> "LadderState":
        return LadderState(self.c_e.copy(), self.c_g.copy())

    def scaled(self, factor: complex) -> "LadderState":
        return LadderState(self.c_e * factor, self.c_g * factor)

    def as_vector(self) -> np.ndarray:
        """Stack as ``[c_e..., c_g...]``, the ordering of the dense oracle."""
        return np.concatenate([self.c_e, self.c_g])

    @classmethod
    def from_vector(cls, vec) -> "LadderState":
        vec = np.asarray(vec, dtype=complex)
        n = vec.size // 2
        return cls(vec[:n].copy(), vec[n:].copy())


@dataclass(frozen=True)
class CoherentSpec:
    """Coherent resonator state with ``|alpha|^2 = mean_n`` and ``arg(alpha) = phase``."""

    mean_n: float
    phase: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.mean_n) and self.mean_n >= 0):
            raise ValidationError(f"meanN must be >= 0, got {self.mean_n}")
        if not math.isfinite(self.phase):
            raise ValidationError(f"phase must be finite, got {self.phase}")

    @property
    def alpha(self) -> complex:
        return math.sqrt(self.mean_n) * complex(math.cos(self.phase), math.sin(self.phase))


def coherent_amplitudes(spec: CoherentSpec, n_max: int) -> np.ndarray:
    """Fock amplitudes ``alpha**n / sqrt(n!) * exp(-|alpha|^2/2)`` for ``n < n_max``.

    Built with the recurrence ``F[n+1] = F[n] * alpha / sqrt(n+1)`` so no
    factorial is ever formed.
    """
    alpha = spec.alpha
    out = np.empty(n_max, dtype=complex)
    out[0] = math.exp(-0.5 * spec.mean_n)
    for n in range(n_max - 1):
        out[n + 1] = out[n] * alpha / math.sqrt(n + 1)
    return out


def _poisson_tail(mean_n: float, upto: int) -> np.ndarray:
    """``tail[N] = sum_{n >= N} P(n)`` for ``N = 0..upto``, summed from the top."""
    hi = int(mean_n + 20 * math.sqrt(mean_n) + 60) + upto
    n = np.arange(hi + 1)
    if mean_n == 0:
        pmf = (n == 0).astype(float)
    else:
        logp = -mean_n + n * math.log(mean_n) - np.array([math.lgamma(k + 1) for k in n])
        pmf = np.exp(logp)
    tail = np.cumsum(pmf[::-1])[::-1]
    return tail[: upto + 1]


def truncation_for(spec: CoherentSpec, tail_tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest ladder with Poisson tail below ``tail_tol``, plus padding slots."""
    if not 0 < tail_tol < 1:
        raise ValidationError(f"tailTol must lie in (0, 1), got {tail_tol}")
    upto = int(spec.mean_n + 40 * math.sqrt(spec.mean_n) + 100)
    tail = _poisson_tail(spec.mean_n, upto)
    below = np.nonzero(tail < tail_tol)[0]
    return int(below[0]) + PADDING


def initial_state(spec: CoherentSpec, n_max: int | None = None) -> LadderState:
    """The product state ``|e>|alpha>`` on a ladder of ``n_max`` pairs."""
    if n_max is None:
        n_max = truncation_for(spec)
    if n_max < 1:
        raise ValidationError(f"nMax must be >= 1, got {n_max}")
    c_e = coherent_amplitudes(spec, n_max)
    missing = 1.0 - float(np.sum(np.abs(c_e) ** 2))
    if missing > _INIT_TAIL_LIMIT:
        raise TruncationError(
            f"nMax={n_max} leaves coherent-state weight {missing:.3e} outside the ladder"
        )
    return LadderState(c_e, np.zeros(n_max, complex))


def norm2(state: LadderState) -> float:
    return float(np.sum(np.abs(state.c_e) ** 2) + np.sum(np.abs(state.c_g) ** 2))


def mean_excitation(state: LadderState) -> float:
    total = norm2(state)
    if total == 0:
        raise DegenerateStateError("mean excitation of a zero-norm state")
    n = np.arange(state.n_max)
    weighted = np.sum(n * np.abs(state.c_e) ** 2) + np.sum((n + 1) * np.abs(state.c_g) ** 2)
    return float(weighted) / total
