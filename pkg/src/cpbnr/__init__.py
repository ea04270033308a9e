"""Non-Hermitian Buck-Sukumar dynamics of a Cooper pair box coupled to a nanoresonator."""

from .dynamics import IntegrationPlan, Trajectory, derivative, integrate, rk4_step
from .model import Constant, ModelParams, Sinusoid, Zero, coupling_at, evaluate_profile, omega_at
from .observables import (
    ObservableRow,
    entropy,
    entropy_both_sides,
    inversion,
    reduced_eigenvalues,
)
from .state import (
    CoherentSpec,
    LadderState,
    initial_state,
    mean_excitation,
    norm2,
    truncation_for,
)

__version__ = "0.1.0"
