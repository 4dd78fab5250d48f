import math

import numpy as np
import pytest
from hypothesis import strategies as st

from qpointer import make_config
from qpointer.qspecial import convergence_radius


def q_exp_product(x: complex, q: float, factors: int = 5000) -> complex:
    """``1 / ((1-q) x; q)_inf``: the product form of the q-exponential, used as an independent oracle."""
    if q == 1.0:
        return complex(np.exp(x))
    p = 1.0 + 0.0j
    qk = 1.0
    for _ in range(factors):
        p *= 1.0 - (1.0 - q) * x * qk
        qk *= q
        if qk < 1e-300:
            break
    return 1.0 / p


qs = st.one_of(st.floats(0.1, 0.999), st.just(1.0))
phases = st.floats(0.0, 2 * math.pi)


@st.composite
def configs(draw, g_max=1.0, fraction=0.9, cap=4.0):
    """In-domain configuration: every label has ``|x|^2 <= fraction * radius`` (capped)."""
    q = draw(qs)
    limit = min(fraction * convergence_radius(q), cap)
    mods = [math.sqrt(draw(st.floats(0.0, limit))) for _ in range(3)]
    obs = draw(st.sampled_from(["X1", "X2"]))
    g = draw(st.floats(0.0, g_max))
    return make_config(q, g, mods[0], draw(phases), mods[1], draw(phases), mods[2], draw(phases), obs)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
