"""Physical parameters of the CPB-nanoresonator Hamiltonian.

Every frequency and rate is expressed in units of the bare coupling
``lambda0`` and time in units of ``1/lambda0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .errors import DomainError, ValidationError

# integer tags used by the compiled integration kernel
KIND_ZERO, KIND_CONSTANT, KIND_SINUSOID = 0, 1, 2


@dataclass(frozen=True)
class Zero:
    """Identically vanishing profile."""

    def evaluate(self, t: float) -> float:
        return 0.0

    def integral(self, t: float) -> float:
        return 0.0

    def max_abs(self) -> float:
        return 0.0

    def encode(self) -> tuple[int, float, float]:
        return KIND_ZERO, 0.0, 0.0

    def describe(self) -> str:
        return "0"


@dataclass(frozen=True)
class Constant:
    """Time-independent profile ``f(t) = value``."""

    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValidationError(f"constant profile value must be finite, got {self.value}")

    def evaluate(self, t: float) -> float:
        return self.value

    def integral(self, t: float) -> float:
        return self.value * t

    def max_abs(self) -> float:
        return abs(self.value)

    def encode(self) -> tuple[int, float, float]:
        return KIND_CONSTANT, float(self.value), 0.0

    def describe(self) -> str:
        return f"{self.value:g}"


@dataclass(frozen=True)
class Sinusoid:
    """Modulation ``f(t) = eta * sin(omega_prime * t)``."""

    eta: float
    omega_prime: float

    def __post_init__(self):
        if not (math.isfinite(self.eta) and self.eta >= 0):
            raise ValidationError(f"sinusoid amplitude eta must be >= 0, got {self.eta}")
        if not (math.isfinite(self.omega_prime) and self.omega_prime > 0):
            raise ValidationError(
                f"sinusoid frequency omegaPrime must be > 0, got {self.omega_prime}"
            )

    def evaluate(self, t: float) -> float:
        return self.eta * math.sin(self.omega_prime * t)

    def integral(self, t: float) -> float:
        # 1 - cos(x) = 2 sin^2(x/2) avoids cancellation at small t
        s = math.sin(0.5 * self.omega_prime * t)
        return 2.0 * self.eta * s * s / self.omega_prime

    def max_abs(self) -> float:
        return self.eta

    def encode(self) -> tuple[int, float, float]:
        return KIND_SINUSOID, float(self.eta), float(self.omega_prime)

    def describe(self) -> str:
        return f"{self.eta:g}*sin({self.omega_prime:g}t)"


TimeProfile = Union[Zero, Constant, Sinusoid]


def evaluate_profile(profile: TimeProfile, t: float) -> float:
    return profile.evaluate(t)


@dataclass(frozen=True)
class ModelParams:
    """Rates and time profiles of the non-Hermitian Buck-Sukumar model.

    ``gamma`` is the CPB decay rate, ``delta`` the resonator decay rate and
    ``detuning`` the shift ``f(t)`` of the resonator frequency
    ``omega(t) = omega0 + f(t)``. Loss profiles are restricted to
    :class:`Zero` and non-negative :class:`Constant`.

    ``lambda0`` is the unit of the problem and should be left at 1; setting
    it to 0 switches the coupling off, which is useful for checking the
    pure-loss limit.
    """

    omega0: float
    omega_c: float
    gamma: TimeProfile = field(default_factory=Zero)
    delta: TimeProfile = field(default_factory=Zero)
    detuning: TimeProfile = field(default_factory=Zero)
    lambda0: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.omega0) and self.omega0 > 0):
            raise ValidationError(f"omega0 must be positive, got {self.omega0}")
        if not (math.isfinite(self.omega_c) and self.omega_c > 0):
            raise ValidationError(f"omegaC must be positive, got {self.omega_c}")
        if not (math.isfinite(self.lambda0) and self.lambda0 >= 0):
            raise ValidationError(f"lambda0 must be >= 0, got {self.lambda0}")
        for name in ("gamma", "delta"):
            prof = getattr(self, name)
            if isinstance(prof, Sinusoid):
                raise ValidationError(f"{name}: loss profiles must be zero or constant")
            if isinstance(prof, Constant) and prof.value < 0:
                raise ValidationError(f"{name} must be >= 0, got {prof.value}")
        det = self.detuning
        if isinstance(det, Sinusoid) and det.eta >= self.omega0:
            raise ValidationError(
                f"detuning amplitude eta={det.eta} must stay below omega0={self.omega0}"
            )
        if isinstance(det, Constant) and 1.0 + det.value / self.omega0 <= 0:
            raise ValidationError(
                f"detuning {det.value} makes 1 + f/omega0 non-positive"
            )

    def describe(self) -> str:
        return (
            f"omega0={self.omega0:g} omegaC={self.omega_c:g} "
            f"gamma={self.gamma.describe()} delta={self.delta.describe()} "
            f"f(t)={self.detuning.describe()}"
        )


def omega_at(params: ModelParams, t: float) -> float:
    return params.omega0 + params.detuning.evaluate(t)


def coupling_at(params: ModelParams, t: float) -> float:
    """Intensity-independent part of the coupling, ``lambda0*sqrt(1 + f/omega0)``."""
    f = params.detuning.evaluate(t)
    if f == 0.0:
        return params.lambda0
    x = 1.0 + f / params.omega0
    if not x > 0:
        raise DomainError(f"1 + f(t)/omega0 = {x} <= 0 at t={t}")
    return params.lambda0 * math.sqrt(x)
