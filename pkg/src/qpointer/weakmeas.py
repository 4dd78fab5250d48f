"""Closed-form weak values, overlaps and normalization of the post-selected pointer.

With pre-selection ``|alpha>``, post-selection ``|beta>`` and a pointer prepared
in ``|z>``, first-order coupling leaves the pointer in

    N <beta|alpha> ( |z> - i g A_w P |z> ),    P = i (a_dag - a) / sqrt(2),

where ``A_w`` is the weak value of the measured observable.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from . import oracle
from .config import CoherentLabel, MeasurementConfig, Observable, WeakValue, as_label
from .errors import DomainError, NonConvergence, NonPositiveNorm
from .fockspace import FockVector
from .qspecial import QLike, as_deformation, check_domain, q_exp_value

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
ANOMALOUS_OVERLAP = 1e-12
NORM_DIAGNOSTIC_TOL = 1e-8


def fidelity(alpha: CoherentLabel, beta: CoherentLabel, q: QLike) -> complex:
    """``<beta|alpha> = e_q(beta* alpha) / sqrt(e_q(|beta|^2) e_q(|alpha|^2))``."""
    q = as_deformation(q)
    a, b = complex(as_label(alpha)), complex(as_label(beta))
    check_domain(abs(a) ** 2, q, "|alpha|^2")
    check_domain(abs(b) ** 2, q, "|beta|^2")
    num = q_exp_value(b.conjugate() * a, q)
    return num / math.sqrt(q_exp_value(abs(b) ** 2, q).real * q_exp_value(abs(a) ** 2, q).real)


def weak_value_x1(alpha: CoherentLabel, beta: CoherentLabel) -> WeakValue:
    """``(alpha + beta*) / sqrt(2)``, independent of ``q``."""
    a, b = complex(as_label(alpha)), complex(as_label(beta))
    return WeakValue((a + b.conjugate()) / SQRT2)


def x2_enhancement(alpha: CoherentLabel, beta: CoherentLabel, q: QLike) -> complex:
    """Factor ``q^(1/2) e_q(q^(1/2) alpha beta*) / e_q(alpha beta*)`` turning the X1 weak value into X2's."""
    q = as_deformation(q)
    if q.undeformed:
        return 1.0 + 0.0j
    x = complex(as_label(alpha)) * complex(as_label(beta)).conjugate()
    check_domain(abs(x), q, "|alpha beta*|")
    sq = math.sqrt(q.q)
    return sq * q_exp_value(sq * x, q) / q_exp_value(x, q)


def weak_value_x2(alpha: CoherentLabel, beta: CoherentLabel, q: QLike) -> WeakValue:
    base = weak_value_x1(alpha, beta).value
    return WeakValue(x2_enhancement(alpha, beta, q) * base)


def weak_value(config: MeasurementConfig) -> WeakValue:
    """Weak value of the configured observable, flagged when ``|<beta|alpha>|`` is tiny."""
    if config.observable is Observable.X1:
        wv = weak_value_x1(config.alpha, config.beta)
    else:
        wv = weak_value_x2(config.alpha, config.beta, config.q)
    anomalous = False
    if config.labels_in_domain:
        anomalous = abs(fidelity(config.alpha, config.beta, config.q)) < ANOMALOUS_OVERLAP
    return WeakValue(wv.value, anomalous)


def eigenvalue_scale(z: CoherentLabel, q: QLike) -> float:
    """Reference magnitude ``<z|X2|z> = q^(1/2) e_q(q^(1/2)|z|^2)/e_q(|z|^2) sqrt(2) Re z``.

    Used as the baseline curve against which the X2 weak value is compared.
    """
    q = as_deformation(q)
    z = complex(as_label(z))
    r = abs(z) ** 2
    check_domain(r, q, "|z|^2")
    if q.undeformed:
        return SQRT2 * z.real
    sq = math.sqrt(q.q)
    return sq * q_exp_value(sq * r, q).real / q_exp_value(r, q).real * SQRT2 * z.real


def _aw(config: MeasurementConfig, aw: WeakValue | complex | None) -> complex:
    return complex(weak_value(config) if aw is None else aw)


def norm_bracket(config: MeasurementConfig, aw: WeakValue | complex | None = None) -> float:
    """``1 + 2 sqrt(2) Im z Im(g A_w) + g^2/2 |A_w|^2 (1 + (1+q)|z|^2 - 2 Re(z)^2 + 2 Im(z)^2)``.

    This is ``|| |z> - i g A_w P |z> ||^2``; it does not involve ``<beta|alpha>``.
    """
    A = _aw(config, aw)
    g, q, z = config.g, config.q.q, config.z.value
    r2 = abs(z) ** 2
    value = (
        1.0
        + 2.0 * SQRT2 * z.imag * (g * A).imag
        + g * g / 2.0 * abs(A) ** 2 * (1.0 + (1.0 + q) * r2 - 2.0 * z.real ** 2 + 2.0 * z.imag ** 2)
    )
    if not value > 0.0:
        raise NonPositiveNorm(
            f"pointer norm bracket {value:.6g} <= 0: coupling g={g} is outside the weak regime"
        )
    return value


def pointer_prefactor(config: MeasurementConfig, aw: WeakValue | complex | None = None) -> float:
    """``|N|^2 |<beta|alpha>|^2``, the common prefactor of every normalized pointer moment."""
    return 1.0 / norm_bracket(config, aw)


def normalization(config: MeasurementConfig, aw: WeakValue | complex | None = None) -> float:
    """Normalization factor ``N(g, q) = [|<beta|alpha>|^2 * norm_bracket]^(-1/2)``.

    The brute-force norm of the synthesized pointer is computed alongside and a
    disagreement above ``1e-8`` (relative) is logged.
    """
    A = _aw(config, aw)
    fid = fidelity(config.alpha, config.beta, config.q)
    bracket = abs(fid) ** 2 * norm_bracket(config, A)
    value = bracket ** -0.5
    brute = normalization_oracle(config, A)
    delta = abs(value - brute) / abs(brute)
    if delta > NORM_DIAGNOSTIC_TOL:
        log.warning("normalization closed form %.17g vs oracle %.17g (rel %.3e)", value, brute, delta)
    return value


def normalization_oracle(
    config: MeasurementConfig, aw: WeakValue | complex | None = None, overlap: complex | None = None
) -> float:
    """``1 / || <beta|alpha> (|z> - i g A_w P|z>) ||`` with the overlap taken from explicit vectors."""
    A = _aw(config, aw)
    if overlap is None:
        overlap = oracle.fidelity(config.alpha, config.beta, config.q)
    return 1.0 / (abs(overlap) * math.sqrt(oracle.pointer_norm_squared(config, A)))


@dataclass(frozen=True)
class NormalizationCheck:
    closed_form: float
    oracle: float

    @property
    def rel_delta(self) -> float:
        return abs(self.closed_form - self.oracle) / abs(self.oracle)


def normalization_check(config: MeasurementConfig, aw: WeakValue | complex | None = None) -> NormalizationCheck:
    A = _aw(config, aw)
    fid = fidelity(config.alpha, config.beta, config.q)
    closed = (abs(fid) ** 2 * norm_bracket(config, A)) ** -0.5
    return NormalizationCheck(closed, normalization_oracle(config, A))


def pointer_state(config: MeasurementConfig, aw: WeakValue | complex | None = None) -> FockVector:
    """Normalized post-selected pointer as a Fock vector.

    The global phase is that of ``<beta|alpha>``, i.e. of ``e_q(beta* alpha)``;
    the magnitude is fixed by the vector's own norm rather than the closed form.
    """
    A = _aw(config, aw)
    x = config.beta.value.conjugate() * config.alpha.value
    phase = 1.0 + 0.0j
    try:
        overlap = q_exp_value(x, config.q)
        phase = overlap / abs(overlap)
    except (DomainError, NonConvergence):
        # beta* alpha outside the series domain: phase is not defined, keep it real
        pass
    return oracle.normalized_pointer(config, A, phase)
