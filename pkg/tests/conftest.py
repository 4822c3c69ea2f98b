import math

import numpy as np
import pytest
from hypothesis import strategies as st

from telegraph_qubit import NoiseParams, PureStateAngles


@st.composite
def noise_params(draw, max_kappa=20.0, max_nu=8.0):
    """Admissible environments with rates given relative to lam."""
    lam = draw(st.floats(0.25, 4.0))
    a = draw(st.floats(-1.0, 1.0))
    kappa = draw(st.one_of(st.just(0.0), st.floats(0.0, max_kappa)))
    nu = draw(st.floats(0.05, max_nu))
    return NoiseParams(a=a, kappa=kappa * lam, lam=lam, nu=nu * lam)


@st.composite
def state_angles(draw):
    theta = draw(st.floats(0.0, math.pi))
    phi = draw(st.floats(0.0, 2 * math.pi, exclude_max=True))
    return PureStateAngles(theta, phi)


def random_params(rng, n):
    """Deterministic random admissible parameter sets (rates in units of lam)."""
    out = []
    for _ in range(n):
        lam = rng.uniform(0.5, 2.0)
        kappa = 0.0 if rng.random() < 0.1 else rng.uniform(0.0, 20.0)
        out.append(
            NoiseParams(
                a=rng.uniform(-1.0, 1.0),
                kappa=kappa * lam,
                lam=lam,
                nu=rng.uniform(0.05, 8.0) * lam,
            )
        )
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig1_params():
    return NoiseParams(a=0.5, kappa=8.0, lam=1.0, nu=0.8)


# one line per acceptance criterion, printed after the run even when output is captured
ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance():
    def record(number, passed, detail):
        ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(ACCEPTANCE_LINES[number])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
