import cmath
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qpointer.errors import DomainError, NonConvergence
from qpointer.qspecial import (
    DeformationParameter,
    convergence_radius,
    in_domain,
    log_q_factorial,
    q_exp,
    q_factorial,
    q_number,
    q_pochhammer,
)

from conftest import q_exp_product

# exact rational partial sum of sum_n 1/[n]_{1/2}! (200 terms)
Q_EXP_ONE_HALF = 3.462746619455064


@pytest.mark.parametrize("n,q,expected", [(0, 0.5, 0.0), (3, 0.5, 1.75), (5, 1.0, 5.0)])
def test_q_number_examples(n, q, expected):
    assert q_number(n, q) == expected


@pytest.mark.parametrize("n,q,expected", [(0, 0.3, 1.0), (3, 0.5, 2.625), (4, 1.0, 24.0)])
def test_q_factorial_examples(n, q, expected):
    assert q_factorial(n, q) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("a,q,n,expected", [(7.3 - 2j, 0.5, 0, 1.0), (1.0, 0.5, 3, 0.0), (0.5, 0.5, 2, 0.375)])
def test_q_pochhammer_examples(a, q, n, expected):
    assert q_pochhammer(a, q, n) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("q,expected", [(0.5, 2.0), (0.9, 10.0), (1.0, math.inf)])
def test_convergence_radius(q, expected):
    assert convergence_radius(q) == pytest.approx(expected)


@pytest.mark.parametrize("bad", [0.0, -0.2, 1.0000001, math.nan, 2.0])
def test_deformation_parameter_rejects(bad):
    with pytest.raises(ValueError):
        DeformationParameter(bad)


def test_q_one_is_exact_branch():
    assert DeformationParameter(1.0).undeformed
    assert not DeformationParameter(1 - 1e-16 * 2).undeformed
    # near q = 1 the deformed formula stays close to n without 0/0
    assert q_number(7, 1 - 1e-12) == pytest.approx(7.0, rel=1e-9)


def test_q_exp_examples():
    assert q_exp(0, 0.4).value == 1.0
    assert q_exp(1, 1.0).value == pytest.approx(math.e, rel=1e-15)
    r = q_exp(1, 0.5)
    assert r.value.real == pytest.approx(Q_EXP_ONE_HALF, rel=1e-12)
    assert r.terms_used >= 1
    # slack covers rounding in the partial sum itself
    assert abs(r.value - Q_EXP_ONE_HALF) <= r.tail_bound + 1e-15 * Q_EXP_ONE_HALF


def test_q_exp_domain_errors_name_the_radius():
    with pytest.raises(DomainError, match="radius 2"):
        q_exp(2.0, 0.5)
    with pytest.raises(DomainError):
        q_exp(1.999, 0.5)  # past the 0.999 margin
    assert in_domain(1.998, 0.5)


def test_q_exp_term_cap():
    with pytest.raises(NonConvergence):
        q_exp(0.99 * 10, 0.9, max_terms=20)


def test_q_exp_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        q_exp(0.1, 0.5, tol=0.0)


@pytest.mark.parametrize("q", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0])
def test_q_number_recurrence(q):
    for n in range(51):
        assert q_number(n + 1, q) == pytest.approx(1 + q * q_number(n, q), rel=1e-13, abs=1e-15)


@given(st.floats(0.05, 1.0), st.integers(1, 80))
def test_q_factorial_step(q, n):
    assert q_factorial(n, q) == q_factorial(n - 1, q) * q_number(n, q)


@given(st.floats(0.05, 1.0), st.integers(0, 300))
def test_log_q_factorial(q, n):
    assert log_q_factorial(n, q) == pytest.approx(math.fsum(math.log(q_number(k, q)) for k in range(1, n + 1)) if n else 0.0, abs=1e-9)


@given(st.integers(0, 60), st.floats(0.05, 1.0))
def test_q_number_increasing(n, q):
    # beyond this q**n is lost against 1 in double precision
    assume(q ** n > 1e-13)
    assert 0 <= q_number(n, q) < q_number(n + 1, q)


def _second_form(x, q, terms=4000):
    # sum ((1-q) x)^n / (q;q)_n
    y = (1 - q) * x
    total, term = 0j, 1 + 0j
    for n in range(terms):
        total += term
        term *= y / (1 - q ** (n + 1))
        if abs(term) < 1e-18 * abs(total):
            break
    return total


@settings(max_examples=80)
@given(st.floats(0.05, 0.99), st.floats(0.0, 0.9), st.floats(0, 2 * math.pi))
def test_two_series_forms_agree(q, frac, phase):
    x = cmath.rect(frac * convergence_radius(q), phase)
    # oscillating sums lose digits to cancellation; measure against the sum of moduli
    scale = q_exp(abs(x), q).value.real
    assert abs(q_exp(x, q).value - _second_form(x, q)) <= 1e-12 * scale


@settings(max_examples=80)
@given(st.floats(0.05, 0.99), st.floats(0.0, 0.9), st.floats(0, 2 * math.pi))
def test_matches_product_form(q, frac, phase):
    x = cmath.rect(frac * convergence_radius(q), phase)
    ref = q_exp_product(x, q)
    scale = q_exp(abs(x), q).value.real
    assert abs(q_exp(x, q).value - ref) <= 1e-11 * scale


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_undeformed_is_exp(re, im):
    x = complex(re, im)
    if abs(x) > 20:
        x *= 20 / abs(x)
    assert abs(q_exp(x, 1.0).value - cmath.exp(x)) <= 1e-12 * abs(cmath.exp(x))


@given(st.floats(0.05, 1.0), st.floats(0.0, 0.95), st.floats(0, 2 * math.pi))
def test_conjugate_symmetry(q, frac, phase):
    x = cmath.rect(frac * min(convergence_radius(q), 15.0), phase)
    assert q_exp(x.conjugate(), q).value == q_exp(x, q).value.conjugate()


@given(st.floats(0.05, 0.99), st.floats(0.0, 0.95))
def test_tail_bound_holds(q, frac):
    x = frac * convergence_radius(q)
    r = q_exp(x, q)
    assert abs(r.value - q_exp_product(x, q)) <= r.tail_bound + 1e-13 * abs(r.value)
