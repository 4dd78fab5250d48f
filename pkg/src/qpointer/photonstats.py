"""Photon statistics and quadrature moments of the post-selected pointer.

Every quantity has two routes: a closed form in ``z``, ``q``, ``g`` and the weak
value ``A_w`` (returned), and a brute-force Fock evaluation on the pointer
vector (used as a check). In the closed forms ``K = |N|^2 |<beta|alpha>|^2`` is
the reciprocal of :func:`qpointer.weakmeas.norm_bracket`, and
``c = g A_w / sqrt(2)`` so that the unnormalized pointer is
``(1 - c z)|z> + c a_dag|z>``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .config import MeasurementConfig
from .errors import ZeroMeanPhoton
from .fockspace import adaptive_dimension
from .qspecial import q_exp_value, q_number
from .weakmeas import pointer_prefactor, pointer_state, weak_value

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
ORACLE_TOL = 1e-8
DISTRIBUTION_TOL = 1e-10
NEGATIVE_PROB_CLAMP = -1e-15
NEGATIVE_VAR_CLAMP = -1e-12
ZERO_MEAN = 1e-14
# below this magnitude deltas are absolute rather than relative
DELTA_FLOOR = 1e-2


def rel_delta(value, reference) -> float:
    """``|value - reference| / max(|value|, |reference|, DELTA_FLOOR)``."""
    scale = max(abs(value), abs(reference), DELTA_FLOOR)
    return abs(value - reference) / scale


def _params(config: MeasurementConfig, aw=None):
    A = complex(weak_value(config) if aw is None else aw)
    z = config.z.value
    return z, z.conjugate(), abs(z) ** 2, config.q.q, config.g, A


# ---------------------------------------------------------------- distribution


@dataclass(frozen=True)
class PhotonDistribution:
    """``probs[n] = |<n|Phi>|^2``; ``tail_mass`` is the mass beyond the last index."""

    probs: np.ndarray
    config: MeasurementConfig
    tail_mass: float = 0.0

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        low = p < 0.0
        if np.any(p < NEGATIVE_PROB_CLAMP):
            raise ValueError(f"negative probability {p.min():.3e}")
        if np.any(low):
            log.debug("clamping %d tiny negative probabilities to zero", int(low.sum()))
            p[low] = 0.0
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def total(self) -> float:
        return math.fsum(self.probs) + self.tail_mass

    def mean(self) -> float:
        """Mean occupation number ``sum n P(n)`` (not ``<a_dag a>``)."""
        return float(np.dot(np.arange(self.probs.size), self.probs))

    def peak(self) -> int:
        return int(np.argmax(self.probs))


def photon_distribution_closed(config: MeasurementConfig, aw=None, dim: int | None = None) -> np.ndarray:
    """``P(n) = K |(1 - c z) z^n/sqrt([n]!) + c sqrt([n]) z^(n-1)/sqrt([n-1]!)|^2 / e_q(|z|^2)``.

    The second term is the creation-operator part of the momentum kick; it
    shifts weight between neighbouring photon numbers.
    """
    z, zc, r2, q, g, A = _params(config, aw)
    K = pointer_prefactor(config, A)
    if dim is None:
        dim = adaptive_dimension(r2, q) + 1
    c = g * A / SQRT2
    u = 1.0 - c * z
    ez = q_exp_value(r2, q).real
    probs = np.empty(dim)
    prev = 0.0j
    cur = 1.0 + 0.0j
    for n in range(dim):
        if n:
            prev, cur = cur, cur * z / math.sqrt(q_number(n, q))
        amp = u * cur + c * math.sqrt(q_number(n, q)) * prev
        probs[n] = K * abs(amp) ** 2 / ez
    return probs


def photon_distribution(config: MeasurementConfig, check: bool = True) -> PhotonDistribution:
    probs = photon_distribution_closed(config)
    dist = PhotonDistribution(probs, config, max(0.0, 1.0 - math.fsum(probs)))
    if check:
        brute = pointer_state(config).probabilities()
        n = min(brute.size, probs.size)
        delta = float(np.max(np.abs(brute[:n] - probs[:n])))
        if delta > DISTRIBUTION_TOL:
            log.warning("photon distribution disagrees with Fock oracle by %.3e", delta)
    return dist


# -------------------------------------------------------------- photon moments


def _mean_photon_bracket(z, zc, r2, q, g, A) -> float:
    """Bracket of ``<a_dag a>`` (to be multiplied by ``K``)."""
    return (
        r2
        + 2 * g / SQRT2 * (A * (zc + (q * zc - z) * r2)).real
        + g * g / 2 * abs(A) ** 2
        * (1 + (q + 2 - z * z - zc * zc) * q * r2 + (1 + q ** 3) * r2 ** 2 - z * z - zc * zc).real
    )


def _second_photon_bracket(z, zc, r2, q, g, A) -> float:
    """Bracket of ``<(a_dag a)^2>``."""
    s2 = z * z + zc * zc
    return (
        r2
        + q * r2 ** 2
        + 2 * g / SQRT2 * (A * (zc + (2 * q * zc + q * q * zc - z) * r2 + (q ** 3 * zc - q * z) * r2 ** 2)).real
        + g * g / 2 * abs(A) ** 2
        * (
            1
            - s2
            - ((2 * q + q * q) * s2 - (q ** 3 + 3 * q * q + 3 * q)) * r2
            - (q ** 3 * s2 - (q ** 5 + 2 * q ** 4 + 3 * q ** 3) - 1) * r2 ** 2
            + (q ** 6 + q) * r2 ** 3
        ).real
    )


def _pair_photon_bracket(z, zc, r2, q, g, A) -> float:
    """Bracket of ``<a_dag^2 a^2>``."""
    s2 = z * z + zc * zc
    return (
        r2 ** 2
        + 2 * g / SQRT2 * (A * ((1 + q) * zc * r2 + (q * q * zc - z) * r2 ** 2)).real
        + g * g / 2 * abs(A) ** 2
        * (
            (q * q + 2 * q + 1 - (1 + q) * s2) * r2
            - (q * q * s2 - 2 * q ** 3 - 2 * q * q - q ** 4) * r2 ** 2
            + (1 + q ** 5) * r2 ** 3
        ).real
    )


def _g2_mean_bracket(z, zc, r2, q, g, A) -> float:
    # same quantity as _mean_photon_bracket, grouped differently
    s2 = z * z + zc * zc
    return (
        r2
        + 2 * g / SQRT2 * (A * (zc + q * zc * r2 - z * r2)).real
        + g * g / 2 * abs(A) ** 2 * (1 - s2 - (q * s2 - 2 * q - q * q) * r2 + (1 + q ** 3) * r2 ** 2).real
    )


def mean_photon(config: MeasurementConfig, aw=None) -> float:
    """``<Phi| a_dag a |Phi>``."""
    p = _params(config, aw)
    return pointer_prefactor(config, p[-1]) * _mean_photon_bracket(*p)


def _mandel_closed(config: MeasurementConfig, aw=None) -> float:
    p = _params(config, aw)
    K = pointer_prefactor(config, p[-1])
    mean = K * _mean_photon_bracket(*p)
    if mean <= ZERO_MEAN:
        raise ZeroMeanPhoton(f"<a_dag a> = {mean:.3e}: Mandel parameter undefined")
    second = K * _second_photon_bracket(*p)
    return (second - mean ** 2) / mean - 1.0


def _g2_closed(config: MeasurementConfig, aw=None) -> float:
    p = _params(config, aw)
    K = pointer_prefactor(config, p[-1])
    mean = K * _g2_mean_bracket(*p)
    if mean <= ZERO_MEAN:
        raise ZeroMeanPhoton(f"<a_dag a> = {mean:.3e}: g2(0) undefined")
    return K * _pair_photon_bracket(*p) / mean ** 2


def _oracle(config: MeasurementConfig) -> oracle.OracleStatistics:
    return oracle.statistics(pointer_state(config), config.q)


def _logged(name: str, closed: float, brute: float) -> None:
    delta = rel_delta(closed, brute)
    if delta > ORACLE_TOL:
        log.warning("%s: closed form %.17g vs Fock oracle %.17g (delta %.3e)", name, closed, brute, delta)


def mandel_q(config: MeasurementConfig, check: bool = True) -> float:
    """q-Mandel parameter ``Q = <(dn)^2>/<n> - 1`` with ``n -> a_dag a``."""
    value = _mandel_closed(config)
    if check:
        _logged("mandel_q", value, _oracle(config).mandel_q)
    return value


def g2_zero(config: MeasurementConfig, check: bool = True) -> float:
    """Zero-delay second-order correlation ``<a_dag^2 a^2> / <a_dag a>^2``."""
    value = _g2_closed(config)
    if check:
        _logged("g2_zero", value, _oracle(config).g2_zero)
    return value


# ------------------------------------------------------------------ quadratures


def _quadrature_second_bracket(sign: int, z, zc, r2, q, g, A, linear_sign: int = 1) -> float:
    """Bracket of ``<X^2>`` (``sign=+1``) or ``<P^2>`` (``sign=-1``), before the ``K/2`` factor.

    ``linear_sign`` multiplies the first-order term; it is ``+1`` for both
    quadratures.
    """
    s = sign
    w = zc - z + s * zc ** 3 - s * z ** 3 + (1 + q) * (zc + s * z) + (s * q * q * z + q * (1 + q) * zc - (1 + q) * z - s * zc) * r2
    z2 = z * z + zc * zc
    quad = (
        s * z ** 4
        + s * zc ** 4
        + ((2 - s) + (1 - s) * q - s * q * q) * z2
        + (-s * q ** 3 + q * q + q - s) * z2 * r2
        + (-q ** 3 - 3 * q * q - (3 - 2 * s) * q - s * (-2 + s)) * r2
        - (q ** 4 + q ** 3 - 2 * s * q * q + q + 1) * r2 ** 2
        - q
        - 2
    )
    out = 1 + s * z2 + (1 + q) * r2 + linear_sign * SQRT2 * g * (A * w).real - g * g / 2 * abs(A) ** 2 * quad
    return out.real


def _quadrature_mean_bracket(sign: int, z, zc, r2, q, g, A) -> complex:
    """``<X>`` (``sign=+1``) or ``<P>`` (``sign=-1``) before the ``K`` factor.

    The prefactor ``i^(1/2 -+ 1/2)`` is 1 for X and i for P; the first-order term
    takes the real part for X and the imaginary part for P.
    """
    s = sign
    ip = 1.0 if s == 1 else 1j
    inner = A * (1 + s * zc * zc - z * z + (q - s) * r2)
    part = inner.real if s == 1 else inner.imag
    body = (
        zc
        + s * z
        + s * SQRT2 * g * ip * part
        - g * g / 2 * abs(A) ** 2
        * (zc ** 3 + s * z ** 3 - q * (zc + s * z) + (1 - s) * (z - zc) + (-s * q * q + q - s) * z * r2 - (q * q - s * q + 1) * zc * r2)
    )
    return ip / SQRT2 * body


def _commutator_bracket(z, zc, r2, q, g, A) -> complex:
    """``<[X, P]>`` before the ``K`` factor (purely imaginary)."""
    t1 = (A * (z ** 3 + zc ** 3 + q * zc - (2 + q) * z + (q * q - q - 1) * zc * r2 - (q * q + q - 1) * z * r2)).real
    t2 = (A * (z ** 3 + zc ** 3 - q * (z + zc) - (q * q - q + 1) * z * r2 - (q * q - q + 1) * zc * r2)).real
    t3 = (
        zc ** 4
        - z ** 4
        - (q ** 3 + q * q - q + 1) * r2
        + (q * q + 2 * q + 1) * z * z
        - (1 + q * q) * zc * zc
        - (q ** 3 - q * q + q + 1) * zc * zc * r2
        + (q ** 3 + q * q - q + 1) * z * z * r2
        - (q ** 4 - q ** 3 + q - 1) * r2 ** 2
        - q
    ).real
    return 1j * (1 - r2 + q * r2) + 1j * g / SQRT2 * t1 - 1j * g / SQRT2 * t2 - 1j * g * g / 2 * abs(A) ** 2 * t3


def normal_ordered_moment(config: MeasurementConfig, m: int, n: int, aw=None) -> complex:
    """``<Phi| a_dag^m a^n |Phi>`` from the deformed commutation relation.

    Uses ``a^n a_dag = q^n a_dag a^n + [n]_q a^(n-1)`` and its adjoint, so every
    term reduces to coherent-state moments ``z*^j z^k``.
    """
    z, zc, r2, q, g, A = _params(config, aw)
    K = pointer_prefactor(config, A)
    c = g * A / SQRT2
    u = 1.0 - c * z

    def zz(j, k):
        return zc ** j * z ** k if j >= 0 and k >= 0 else 0.0

    qm, qn_ = q_number(m, q), q_number(n, q)
    total = abs(u) ** 2 * zz(m, n)
    total += u.conjugate() * c * (q ** n * zz(m + 1, n) + qn_ * zz(m, n - 1))
    total += c.conjugate() * u * (q ** m * zz(m, n + 1) + qm * zz(m - 1, n))
    total += abs(c) ** 2 * (
        q ** m * (q ** (n + 1) * zz(m + 1, n + 1) + q_number(n + 1, q) * zz(m, n))
        + qm * (q ** n * zz(m, n) + qn_ * zz(m - 1, n - 1))
    )
    return K * total


@dataclass(frozen=True)
class QuadratureMoments:
    mean_x: float
    mean_p: float
    second_x: float
    second_p: float
    var_x: float
    var_p: float
    cross_xp: complex  # <X P>
    commutator_expect: complex  # <[X, P]>
    squeezed_x: bool = field(init=False)
    squeezed_p: bool = field(init=False)

    def __post_init__(self):
        for name in ("var_x", "var_p"):
            v = getattr(self, name)
            if v < 0.0:
                if v < NEGATIVE_VAR_CLAMP:
                    raise ValueError(f"{name} = {v:.3e} is negative")
                log.debug("clamping %s = %.3e to zero", name, v)
                object.__setattr__(self, name, 0.0)
        half = self.half_commutator
        object.__setattr__(self, "squeezed_x", self.var_x < half)
        object.__setattr__(self, "squeezed_p", self.var_p < half)

    @property
    def half_commutator(self) -> float:
        """Squeezing threshold ``|<[X, P]>| / 2``."""
        return abs(self.commutator_expect) / 2.0

    @property
    def uncertainty_product(self) -> float:
        return self.var_x * self.var_p

    @property
    def uncertainty_bound(self) -> float:
        return abs(self.commutator_expect) ** 2 / 4.0

    def satisfies_uncertainty(self, atol: float = 1e-10) -> bool:
        return self.uncertainty_product >= self.uncertainty_bound - atol


def _moments_closed(config: MeasurementConfig, aw=None) -> QuadratureMoments:
    p = _params(config, aw)
    K = pointer_prefactor(config, p[-1])
    second_x = K / 2 * _quadrature_second_bracket(+1, *p)
    second_p = K / 2 * _quadrature_second_bracket(-1, *p)
    mean_x = (K * _quadrature_mean_bracket(+1, *p)).real
    mean_p = (K * _quadrature_mean_bracket(-1, *p)).real
    comm = K * _commutator_bracket(*p)
    raise_sq = normal_ordered_moment(config, 2, 0, p[-1])
    lower_sq = normal_ordered_moment(config, 0, 2, p[-1])
    cross = (1j * (raise_sq - lower_sq) + comm) / 2
    return QuadratureMoments(
        mean_x=mean_x,
        mean_p=mean_p,
        second_x=second_x,
        second_p=second_p,
        var_x=second_x - mean_x ** 2,
        var_p=second_p - mean_p ** 2,
        cross_xp=complex(cross),
        commutator_expect=complex(comm),
    )


def quadrature_moments(config: MeasurementConfig, check: bool = True) -> QuadratureMoments:
    """Means, second moments and variances of ``X = (a_dag + a)/sqrt(2)`` and ``P = i(a_dag - a)/sqrt(2)``."""
    closed = _moments_closed(config)
    if check:
        brute = _oracle(config)
        for name, ref in (
            ("second_x", brute.second_x),
            ("second_p", brute.second_p),
            ("mean_x", brute.mean_x),
            ("mean_p", brute.mean_p),
            ("commutator_expect", brute.commutator),
        ):
            _logged(name, getattr(closed, name), ref)
    return closed


# ----------------------------------------------------------------------- report


@dataclass(frozen=True)
class StatisticsReport:
    mandel_q: float
    g2_zero: float
    mean_photon: float
    distribution: PhotonDistribution
    moments: QuadratureMoments
    oracle_deltas: dict

    @property
    def max_oracle_delta(self) -> float:
        return max(self.oracle_deltas.values())


def oracle_deltas(config: MeasurementConfig, closed: dict, brute: oracle.OracleStatistics) -> dict:
    pairs = {
        "mean_photon": brute.mean_photon,
        "mandel_q": brute.mandel_q,
        "g2_zero": brute.g2_zero,
        "mean_x": brute.mean_x,
        "mean_p": brute.mean_p,
        "second_x": brute.second_x,
        "second_p": brute.second_p,
        "var_x": brute.var_x,
        "var_p": brute.var_p,
        "cross_xp": brute.cross_xp,
        "commutator_expect": brute.commutator,
    }
    out = {k: rel_delta(closed[k], ref) for k, ref in pairs.items() if k in closed}
    probs = closed.get("probabilities")
    if probs is not None:
        n = min(probs.size, brute.probabilities.size)
        out["distribution"] = float(np.max(np.abs(probs[:n] - brute.probabilities[:n])))
    return out


def closed_form_values(config: MeasurementConfig) -> dict:
    """All closed-form pointer statistics for one configuration, keyed by name."""
    aw = weak_value(config).value
    m = _moments_closed(config, aw)
    return {
        "mean_photon": mean_photon(config, aw),
        "mandel_q": _mandel_closed(config, aw),
        "g2_zero": _g2_closed(config, aw),
        "mean_x": m.mean_x,
        "mean_p": m.mean_p,
        "second_x": m.second_x,
        "second_p": m.second_p,
        "var_x": m.var_x,
        "var_p": m.var_p,
        "cross_xp": m.cross_xp,
        "commutator_expect": m.commutator_expect,
        "moments": m,
        "probabilities": photon_distribution_closed(config, aw),
    }


def statistics_report(config: MeasurementConfig) -> StatisticsReport:
    closed = closed_form_values(config)
    brute = _oracle(config)
    deltas = oracle_deltas(config, closed, brute)
    for name, d in deltas.items():
        if d > ORACLE_TOL:
            log.warning("%s disagrees with Fock oracle (delta %.3e)", name, d)
    probs = closed["probabilities"]
    return StatisticsReport(
        mandel_q=closed["mandel_q"],
        g2_zero=closed["g2_zero"],
        mean_photon=closed["mean_photon"],
        distribution=PhotonDistribution(probs, config, max(0.0, 1.0 - math.fsum(probs))),
        moments=closed["moments"],
        oracle_deltas=deltas,
    )
