"""q-numbers, q-factorials, q-Pochhammer symbols and the q-exponential series.

All functions accept either a plain float ``q`` or a :class:`DeformationParameter`.
The undeformed point ``q == 1`` is always routed to the ordinary closed forms
(``n``, ``n!``, ``exp``); the ``q < 1`` formulas are 0/0 there.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError, NonConvergence

DOMAIN_MARGIN = 0.999
MAX_TERMS = 10_000
DEFAULT_TOL = 1e-12
# used for normalizations inside the package, well below every downstream tolerance
INTERNAL_TOL = 1e-15


@dataclass(frozen=True)
class DeformationParameter:
    """Deformation parameter ``0 < q <= 1``."""

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q <= 1.0) or math.isnan(q):
            raise ValueError(f"deformation parameter must satisfy 0 < q <= 1, got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def undeformed(self) -> bool:
        return self.q == 1.0

    def __float__(self) -> float:
        return self.q


QLike = Union[float, DeformationParameter]


def as_deformation(q: QLike) -> DeformationParameter:
    if isinstance(q, DeformationParameter):
        return q
    return DeformationParameter(q)


@dataclass(frozen=True)
class QExpResult:
    """Partial sum of the q-exponential series.

    ``tail_bound`` bounds the modulus of the discarded remainder.
    """

    value: complex
    terms_used: int
    tail_bound: float


def q_number(n: int, q: QLike) -> float:
    """``[n]_q = (1 - q**n) / (1 - q)``; exactly ``n`` at ``q = 1``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    q = as_deformation(q).q
    if q == 1.0:
        return float(n)
    if n == 0:
        return 0.0
    # expm1 keeps full relative precision for q close to 1
    return -math.expm1(n * math.log(q)) / (1.0 - q)


def q_factorial(n: int, q: QLike) -> float:
    """Product ``[1]_q [2]_q ... [n]_q`` evaluated left to right.

    Overflows to ``inf`` for large ``n`` at ``q`` near 1; use
    :func:`log_q_factorial` there.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    q = as_deformation(q)
    out = 1.0
    for k in range(1, n + 1):
        out *= q_number(k, q)
    return out


def log_q_factorial(n: int, q: QLike) -> float:
    if n < 0:
        raise ValueError("n must be nonnegative")
    q = as_deformation(q)
    if q.undeformed:
        return math.lgamma(n + 1)
    return math.fsum(math.log(q_number(k, q)) for k in range(1, n + 1))


def q_pochhammer(a: complex, q: QLike, n: int) -> complex:
    """``(a; q)_n = (1 - a)(1 - a q) ... (1 - a q**(n-1))`` with ``(a; q)_0 = 1``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    q = as_deformation(q).q
    out = 1.0 + 0.0j
    qk = 1.0
    for _ in range(n):
        out *= 1.0 - a * qk
        qk *= q
    return out


def convergence_radius(q: QLike) -> float:
    """Radius of convergence ``1/(1-q)`` of the q-exponential; ``inf`` at ``q = 1``."""
    q = as_deformation(q).q
    if q == 1.0:
        return math.inf
    return 1.0 / (1.0 - q)


def in_domain(abs_x: float, q: QLike, margin: float = DOMAIN_MARGIN) -> bool:
    return abs_x <= margin * convergence_radius(q)


def check_domain(abs_x: float, q: QLike, what: str = "argument", margin: float = DOMAIN_MARGIN) -> None:
    """Raise :class:`DomainError` unless ``abs_x <= margin * radius``."""
    if math.isnan(abs_x) or not in_domain(abs_x, q, margin):
        radius = convergence_radius(q)
        raise DomainError(
            f"{what} = {abs_x:.17g} exceeds {margin} x convergence radius "
            f"{radius:.17g} at q = {as_deformation(q).q!r}"
        )


def q_exp(
    x: complex,
    q: QLike,
    tol: float = DEFAULT_TOL,
    margin: float = DOMAIN_MARGIN,
    max_terms: int = MAX_TERMS,
) -> QExpResult:
    """Sum ``e_q(x) = sum_n x**n / [n]_q!`` until the remainder bound clears ``tol``.

    Successive term ratios ``|x| / [n+1]_q`` decrease monotonically, so once the
    ratio ``r`` at the cut is below one the remainder is bounded by the next term
    over ``1 - r``. Summation stops when that bound is at most ``tol * |value|``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    q = as_deformation(q)
    x = complex(x)
    check_domain(abs(x), q, "|x|", margin)
    if q.undeformed:
        return QExpResult(cmath.exp(x), 1, 0.0)

    ax = abs(x)
    re_terms: list[float] = []
    im_terms: list[float] = []
    term = 1.0 + 0.0j
    for n in range(max_terms):
        re_terms.append(term.real)
        im_terms.append(term.imag)
        term = term * x / q_number(n + 1, q)
        ratio = ax / q_number(n + 2, q)
        if ratio < 1.0:
            bound = abs(term) / (1.0 - ratio)
            value = complex(math.fsum(re_terms), math.fsum(im_terms))
            if bound <= tol * abs(value):
                return QExpResult(value, n + 1, bound)
    raise NonConvergence(
        f"q_exp({x!r}, q={q.q!r}) did not reach tol={tol:g} within {max_terms} terms"
    )


def q_exp_value(x: complex, q: QLike, tol: float = INTERNAL_TOL) -> complex:
    return q_exp(x, q, tol).value
