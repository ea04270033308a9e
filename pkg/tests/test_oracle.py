import math

import numpy as np
import pytest

from cpbnr.dynamics import IntegrationPlan, derivative, integrate
from cpbnr.errors import ConvergenceError, DegenerateStateError, DimensionError
from cpbnr.model import Constant, ModelParams, Sinusoid, Zero
from cpbnr.observables import entropy
from cpbnr.oracle import build_generator, partial_trace_entropy, reference_propagate
from cpbnr.state import CoherentSpec, LadderState, coherent_amplitudes, initial_state
from conftest import random_state


def test_single_pair_generator():
    g = build_generator(ModelParams(2000, 2000), 0.0, 1).entries
    expected = np.array([[-1000j, -1j], [-1j, -2000j + 1000j]])
    np.testing.assert_array_equal(g, expected)


def test_loss_only_generator_is_diagonal():
    g = build_generator(ModelParams(2000, 2000, gamma=Constant(0.3), lambda0=0.0), 0.0, 4).entries
    assert np.count_nonzero(g - np.diag(np.diag(g))) == 0
    assert g[0, 0].real == -0.3


def test_ideal_generator_antihermitian():
    g = build_generator(ModelParams(2000, 2010, detuning=Sinusoid(20, 1)), 0.7, 8).entries
    assert np.max(abs(g + g.conj().T)) < 1e-14


def test_dimension_guard():
    with pytest.raises(DimensionError):
        build_generator(ModelParams(1, 1), 0.0, 65)


@pytest.mark.parametrize(
    "params",
    [
        ModelParams(2000, 2000, gamma=Constant(0.01), delta=Constant(0.003)),
        ModelParams(2000, 1980, delta=Constant(0.1), detuning=Constant(20)),
        ModelParams(2000, 2000, gamma=Constant(0.001), detuning=Sinusoid(20, 1)),
    ],
)
def test_generator_reproduces_derivative(params):
    rng = np.random.default_rng(7)
    s = random_state(rng, 9)
    for t in (0.0, 0.37, 4.1):
        g = build_generator(params, t, 9)
        dense = g.apply(s).as_vector()
        kernel = derivative(params, t, s).as_vector()
        scale = np.max(abs(g.entries)) * np.max(abs(s.as_vector()))
        assert np.max(abs(dense - kernel)) <= 1e-14 * scale


def test_reference_rabi():
    s = LadderState.zeros(2)
    s.c_e[0] = 1
    out = reference_propagate(ModelParams(2000, 2000), s, math.pi / 2)
    assert abs(out.c_e[0]) ** 2 < 1e-9


def test_reference_decay_envelopes():
    g, d = 0.001, 0.005
    p = ModelParams(2000, 2000, gamma=Constant(g), delta=Constant(d), lambda0=0.0)
    c = coherent_amplitudes(CoherentSpec(2), 8)
    s = LadderState(c, np.zeros(8))
    out = reference_propagate(p, s, 5.0)
    n = np.arange(8)
    np.testing.assert_allclose(abs(out.c_e), np.exp(-(g + n * d) * 5.0) * abs(c), rtol=1e-10)


def test_reference_matches_integrate_small():
    c = coherent_amplitudes(CoherentSpec(2), 8)
    s = LadderState(c / np.linalg.norm(c), np.zeros(8))
    p = ModelParams(2000, 1990, gamma=Constant(0.01), delta=Constant(0.002), detuning=Sinusoid(5, 2))
    ref = reference_propagate(p, s, 2.0)
    traj = integrate(p, s, IntegrationPlan(2.0, 5e-5, 40000), overflow_tol=None)
    assert np.max(abs(traj.state_at(-1).as_vector() - ref.as_vector())) < 1e-6


def test_reference_convergence_error():
    s = initial_state(CoherentSpec(1), 12)
    with pytest.raises(ConvergenceError):
        reference_propagate(ModelParams(2000, 2000, detuning=Sinusoid(20, 20)), s, 5.0, substeps=1)


def test_partial_trace_examples():
    s = initial_state(CoherentSpec(3))
    assert partial_trace_entropy(s, "cpb") == pytest.approx(0, abs=1e-12)
    assert partial_trace_entropy(s, "nr") == pytest.approx(0, abs=1e-12)
    bell = LadderState.zeros(2)
    bell.c_e[0] = bell.c_g[0] = 1 / math.sqrt(2)
    assert partial_trace_entropy(bell, "cpb") == pytest.approx(math.log(2), abs=1e-14)
    assert partial_trace_entropy(bell, "nr") == pytest.approx(math.log(2), abs=1e-14)
    with pytest.raises(DegenerateStateError):
        partial_trace_entropy(LadderState.zeros(3), "nr")


def test_partial_trace_side_independence_and_closed_form():
    rng = np.random.default_rng(11)
    for _ in range(100):
        s = random_state(rng, int(rng.integers(1, 15)))
        a = partial_trace_entropy(s, "cpb")
        b = partial_trace_entropy(s, "nr")
        assert abs(a - b) < 1e-10
        assert abs(a - entropy(s)) < 1e-10
