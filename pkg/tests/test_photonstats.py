import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpointer import make_config, oracle
from qpointer.errors import DomainError, ZeroMeanPhoton
from qpointer.photonstats import (
    PhotonDistribution,
    QuadratureMoments,
    closed_form_values,
    g2_zero,
    mandel_q,
    mean_photon,
    normal_ordered_moment,
    photon_distribution,
    quadrature_moments,
    rel_delta,
    statistics_report,
)
from qpointer.presets import get_preset
from qpointer.weakmeas import pointer_state, weak_value

from conftest import configs

PI = math.pi
# shared angles of the photon-statistics presets
STATS = dict(z_phase=PI / 2, alpha_modulus=2.0, alpha_phase=PI / 8, beta_modulus=0.5, beta_phase=7 * PI / 8)


def cfg(q, g, zm, obs="X1", **kw):
    p = dict(STATS)
    p.update(kw)
    return make_config(q, g, zm, p["z_phase"], p["alpha_modulus"], p["alpha_phase"], p["beta_modulus"], p["beta_phase"], obs)


# ---------------------------------------------------------------- distribution


def test_poisson_at_zero_coupling_undeformed():
    d = photon_distribution(cfg(1.0, 0.0, 1.3))
    n = np.arange(d.probs.size)
    ref = np.exp(-1.69) * 1.69 ** n / np.array([math.factorial(k) for k in n], float)
    assert np.max(np.abs(d.probs - ref)) <= 1e-10


def test_deformed_coherent_distribution_at_zero_coupling():
    from qpointer.qspecial import q_exp_value, q_factorial

    q, zm = 0.6, 1.1
    d = photon_distribution(cfg(q, 0.0, zm))
    ez = q_exp_value(zm * zm, q).real
    for n in range(12):
        assert d.probs[n] == pytest.approx(zm ** (2 * n) / (q_factorial(n, q) * ez), abs=1e-14)


def test_fig2_distribution_at_q09():
    p = get_preset("fig2")
    c9, c1 = p.config(q=0.9), p.config(q=1.0)
    d9, d1 = photon_distribution(c9), photon_distribution(c1)
    brute = pointer_state(c9).probabilities()
    n = min(brute.size, d9.probs.size)
    assert np.max(np.abs(d9.probs[:n] - brute[:n])) <= 1e-10
    assert abs(d9.total() - 1) <= 1e-10
    assert d9.probs.max() < d1.probs.max()
    # measured: the peak stays at n = 2 here and moves to larger n for smaller q
    assert d9.peak() == d1.peak() == 2
    assert photon_distribution(p.config(q=0.7)).peak() == 3
    assert d9.mean() > d1.mean()


def test_distribution_clamps_tiny_negatives():
    c = cfg(0.5, 0.1, 0.5)
    d = PhotonDistribution(np.array([0.5, -1e-16, 0.5]), c)
    assert d.probs[1] == 0.0
    with pytest.raises(ValueError):
        PhotonDistribution(np.array([0.5, -1e-12, 0.5]), c)


@settings(max_examples=60, deadline=None)
@given(configs())
def test_distribution_normalized(c):
    d = photon_distribution(c, check=False)
    assert abs(math.fsum(d.probs) - 1) <= 1e-10


# ------------------------------------------------------------- photon moments


def test_mandel_examples():
    assert mandel_q(cfg(1.0, 0.0, 1.2)) == pytest.approx(0.0, abs=1e-12)
    c = make_config(0.5, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0)
    assert mandel_q(c) == pytest.approx(-0.5, abs=1e-12)
    assert oracle.statistics(pointer_state(c), 0.5).mandel_q == pytest.approx(-0.5, abs=1e-12)


@pytest.mark.parametrize("obs", ["X1", "X2"])
def test_fig3_ordering(obs):
    # sub-Poissonian, stronger at smaller q, at fixed |z| = 1
    q02, q08, q1 = (mandel_q(cfg(q, 0.6, 1.0, obs)) for q in (0.2, 0.8, 1.0))
    assert q02 < q08 < q1 < 0


def test_mandel_zero_mean():
    c = make_config(0.5, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0)
    with pytest.raises(ZeroMeanPhoton):
        mandel_q(c)
    with pytest.raises(ZeroMeanPhoton):
        g2_zero(c)


def test_g2_examples():
    for q in (0.3, 0.7, 1.0):
        assert g2_zero(cfg(q, 0.0, 0.8)) == pytest.approx(1.0, abs=1e-12)
    c = cfg(0.3, 0.2, 0.3, "X1")
    val = g2_zero(c)
    assert val < 1
    assert rel_delta(val, oracle.statistics(pointer_state(c), 0.3).g2_zero) <= 1e-8


def test_mean_photon_matches_moment():
    c = cfg(0.55, 0.8, 1.1, "X2")
    assert mean_photon(c) == pytest.approx(normal_ordered_moment(c, 1, 1).real, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(configs(), st.integers(0, 3), st.integers(0, 3))
def test_normal_ordered_moments_match_oracle(c, m, n):
    v = pointer_state(c)
    from qpointer.fockspace import build_annihilator

    a = build_annihilator(c.q, v.dim).entries
    ad = a.conj().T
    op = np.linalg.matrix_power(ad, m) @ np.linalg.matrix_power(a, n)
    ref = complex(np.vdot(v.coeffs, op @ v.coeffs))
    assert abs(normal_ordered_moment(c, m, n) - ref) <= 1e-9 * max(1.0, abs(ref))


# ---------------------------------------------------------------- quadratures


def test_coherent_minimum_uncertainty():
    m = quadrature_moments(make_config(1.0, 0.0, 0.9, 0.0, 1.0, 0.0, 1.0, 0.0))
    assert m.var_x == pytest.approx(0.5, abs=1e-12)
    assert m.var_p == pytest.approx(0.5, abs=1e-12)
    assert m.commutator_expect == pytest.approx(1j, abs=1e-12)
    assert m.uncertainty_product == pytest.approx(m.uncertainty_bound, abs=1e-12)


@pytest.mark.parametrize("q,zm", [(0.3, 0.5), (0.6, 1.2), (0.9, 2.0)])
def test_commutator_at_zero_coupling(q, zm):
    m = quadrature_moments(cfg(q, 0.0, zm))
    assert m.commutator_expect == pytest.approx(1j * (1 - (1 - q) * zm * zm), abs=1e-10)


def test_fig5cd_squeezing_example():
    c = make_config(0.5, 0.8, 1.0, PI / 2, 4.0, PI / 3, 0.5, 2 * PI / 3, "X1")
    m = quadrature_moments(c)
    assert m.squeezed_p and not m.squeezed_x


def test_squeezing_flags_follow_threshold():
    m = QuadratureMoments(0, 0, 0.3, 0.6, 0.3, 0.6, 0j, 0.8j)
    assert m.squeezed_x and not m.squeezed_p
    assert m.half_commutator == pytest.approx(0.4)


def test_variance_clamp():
    m = QuadratureMoments(0, 0, 0, 0, -1e-14, 0.5, 0j, 1j)
    assert m.var_x == 0.0
    with pytest.raises(ValueError):
        QuadratureMoments(0, 0, 0, 0, -1e-9, 0.5, 0j, 1j)


@settings(max_examples=60, deadline=None)
@given(configs())
def test_uncertainty_and_commutator(c):
    m = quadrature_moments(c, check=False)
    assert m.var_x >= 0 and m.var_p >= 0
    assert m.satisfies_uncertainty(1e-10)
    assert abs(m.commutator_expect.real) <= 1e-10


# ---------------------------------------------------------------- oracle suite


@settings(max_examples=120, deadline=None)
@given(configs())
def test_closed_forms_match_oracle(c):
    try:
        rep = statistics_report(c)
    except ZeroMeanPhoton:
        return
    assert rep.max_oracle_delta <= 1e-8, rep.oracle_deltas
    assert rep.mandel_q >= -1 - 1e-12
    assert rep.g2_zero >= 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([0.2, 0.5, 0.8, 0.95]), st.floats(0.05, 1.3), st.floats(0.0, 2 * math.pi))
def test_zero_coupling_laws(q, zfrac, phase):
    zm = zfrac * math.sqrt(0.9 / (1 - q)) / 1.3
    c = make_config(q, 0.0, zm, phase, 1.0, 0.1, 0.7, 2.0)
    assert mandel_q(c) == pytest.approx(-(1 - q) * zm * zm, abs=1e-10)
    assert g2_zero(c) == pytest.approx(1.0, abs=1e-10)


def test_statistics_report_examples():
    rep = statistics_report(make_config(1.0, 0.0, 1.0, 0.3, 1.0, 0.0, 1.0, 0.0))
    assert rep.mandel_q == pytest.approx(0, abs=1e-12)
    assert rep.g2_zero == pytest.approx(1, abs=1e-12)
    assert rep.moments.satisfies_uncertainty()
    assert rep.moments.uncertainty_product == pytest.approx(rep.moments.uncertainty_bound, abs=1e-12)
    with pytest.raises(DomainError, match="radius"):
        statistics_report(cfg(0.3, 0.2, 1.3))


def test_closed_form_values_keys():
    vals = closed_form_values(cfg(0.7, 0.5, 0.9, "X2"))
    for key in ("mandel_q", "g2_zero", "var_x", "var_p", "commutator_expect", "probabilities"):
        assert key in vals


def test_oracle_disagreement_is_logged(monkeypatch, caplog):
    import qpointer.photonstats as ps

    monkeypatch.setattr(ps, "_mandel_closed", lambda config, aw=None: 123.0)
    ps.mandel_q(cfg(0.7, 0.5, 0.9))
    assert "mandel_q" in caplog.text


def test_weak_value_drives_statistics():
    c = cfg(0.7, 0.5, 0.9, "X2")
    A = weak_value(c).value
    assert mean_photon(c) == mean_photon(c, A)
