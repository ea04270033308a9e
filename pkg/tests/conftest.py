import math
from dataclasses import replace
from functools import lru_cache

import numpy as np
import pytest

from cpbnr.dynamics import IntegrationPlan
from cpbnr.presets import load_preset
from cpbnr.runner import simulate

ACCEPTANCE_LINES = []


@lru_cache(maxsize=None)
def preset_run(name, step=None, record_interval=0.01, normalize=True, **param_overrides):
    """Cached trajectory of a preset, optionally with another step or loss rates."""
    cfg = load_preset(name)
    if step is not None:
        every = int(round(record_interval / step))
        cfg = replace(cfg, plan=IntegrationPlan(cfg.plan.t_end, step, every))
    if param_overrides:
        cfg = replace(cfg, params=replace(cfg.params, **dict(param_overrides)))
    cfg = replace(cfg, normalize_entropy=normalize)
    return simulate(cfg)


@pytest.fixture(scope="session")
def fig2a():
    return preset_run("fig2a")


@pytest.fixture(scope="session")
def fig3a():
    return preset_run("fig3a")


def random_state(rng, n_max, scale=1.0):
    c_e = rng.normal(size=n_max) + 1j * rng.normal(size=n_max)
    c_g = rng.normal(size=n_max) + 1j * rng.normal(size=n_max)
    norm = math.sqrt(np.sum(abs(c_e) ** 2) + np.sum(abs(c_g) ** 2))
    from cpbnr.state import LadderState

    return LadderState(c_e * scale / norm, c_g * scale / norm)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
