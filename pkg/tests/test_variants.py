"""The uncorrected closed forms disagree with the oracle; the returned ones do not."""
import math

import numpy as np
import pytest

from qpointer import make_config, oracle
from qpointer.photonstats import _moments_closed, mandel_q, photon_distribution_closed, rel_delta
from qpointer.variants import (
    VARIANTS,
    mandel_q_unsquared_mean,
    photon_distribution_without_raising,
    second_p_flipped_linear,
)
from qpointer.weakmeas import pointer_state

PI = math.pi
SAMPLE = make_config(0.7, 0.4, 0.9, 1.1, 1.1, 0.4, 0.6, 2.2, "X1")


@pytest.fixture(scope="module")
def brute():
    return oracle.statistics(pointer_state(SAMPLE), SAMPLE.q)


def test_dropping_raising_term_loses_probability(brute):
    assert photon_distribution_without_raising(SAMPLE).sum() == pytest.approx(0.8690586283003974, rel=1e-10)
    good = photon_distribution_closed(SAMPLE)
    assert abs(good.sum() - 1) <= 1e-12
    n = min(good.size, brute.probabilities.size)
    assert np.max(np.abs(good[:n] - brute.probabilities[:n])) <= 1e-12


def test_dropping_raising_term_is_harmless_without_coupling():
    c = SAMPLE.with_(g=0.0)
    assert np.allclose(photon_distribution_without_raising(c), photon_distribution_closed(c), rtol=0, atol=1e-16)


def test_unsquared_mean(brute):
    assert rel_delta(mandel_q_unsquared_mean(SAMPLE), brute.mandel_q) > 1e-2
    assert rel_delta(mandel_q(SAMPLE), brute.mandel_q) <= 1e-12
    # at zero coupling the two agree only when <a_dag a> = 1
    c = make_config(0.5, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0)
    assert mandel_q_unsquared_mean(c) == pytest.approx(mandel_q(c), abs=1e-12)


def test_flipped_linear_term(brute):
    assert rel_delta(second_p_flipped_linear(SAMPLE), brute.second_p) > 1e-2
    assert rel_delta(_moments_closed(SAMPLE).second_p, brute.second_p) <= 1e-12
    c = SAMPLE.with_(g=0.0)
    assert second_p_flipped_linear(c) == pytest.approx(_moments_closed(c).second_p, rel=1e-14)


def test_flipped_linear_term_gives_negative_variance():
    c = make_config(0.5, 0.8, 0.3, PI / 2, 4.0, PI / 3, 0.5, 2 * PI / 3, "X1")
    m = _moments_closed(c)
    assert second_p_flipped_linear(c) - m.mean_p ** 2 < 0
    assert m.var_p > 0


def test_registry():
    assert set(VARIANTS) == {"probabilities", "mandel_q", "second_p"}
