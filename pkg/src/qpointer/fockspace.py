"""Truncated number-basis matrices for the Arik-Coon oscillator.

This is the brute-force side of every check in the package: states are explicit
coefficient arrays, operators are dense matrices, and expectation values are
plain linear algebra. Nothing here uses the closed-form expressions.
"""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DimensionMismatch, DimensionOverflow
from .qspecial import QLike, as_deformation, check_domain, log_q_factorial, q_exp_value, q_number

log = logging.getLogger(__name__)

START_DIM = 32
DEFAULT_MAX_DIM = 4096
MAX_DIM_ENV = "QPOINTER_MAX_DIM"
TAIL_TOL = 1e-14
HERMITIAN_ATOL = 1e-14
IMAG_CLAMP = 1e-12


def max_dimension() -> int:
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 2:
        raise ConfigError(f"{MAX_DIM_ENV} must be an integer >= 2, got {raw!r}")
    return value


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FockVector:
    """Coefficients over ``|0>, ..., |dim-1>``.

    ``tail_norm`` bounds the squared-norm mass carried by basis states at or
    above ``dim`` that were discarded by the truncation.
    """

    coeffs: np.ndarray
    tail_norm: float = 0.0
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(self.coeffs))
        if self.coeffs.ndim != 1 or self.coeffs.size < 1:
            raise ValueError("coeffs must be a nonempty 1-d array")
        if self.tail_norm < 0:
            raise ValueError("tail_norm must be nonnegative")

    @property
    def dim(self) -> int:
        return self.coeffs.size

    def norm_squared(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2

    def embed(self, dim: int) -> "FockVector":
        """Zero-pad to a larger basis (so ladder operators act without clipping)."""
        if dim < self.dim:
            raise DimensionMismatch(f"cannot embed dim {self.dim} into {dim}")
        c = np.zeros(dim, dtype=complex)
        c[: self.dim] = self.coeffs
        return FockVector(c, self.tail_norm, self.normalized)


@dataclass(frozen=True)
class FockOperator:
    entries: np.ndarray
    hermitian: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))
        m = self.entries
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator entries must be a square matrix")
        if self.hermitian and not np.allclose(m, m.conj().T, rtol=0.0, atol=HERMITIAN_ATOL):
            raise ValueError(f"operator {self.name!r} flagged hermitian but is not")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            _check_dims(self.dim, other.dim)
            return FockOperator(self.entries @ other.entries)
        if isinstance(other, FockVector):
            return apply(self, other)
        return NotImplemented

    def adjoint(self) -> "FockOperator":
        return FockOperator(self.entries.conj().T, self.hermitian)


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(f"dimension mismatch: {a} vs {b}")


@lru_cache(maxsize=64)
def _ladder(q: float, dim: int) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(1, dim)
    m[idx - 1, idx] = [math.sqrt(q_number(int(n), q)) for n in idx]
    return _frozen(m)


def build_annihilator(q: QLike, dim: int) -> FockOperator:
    """``a|n> = sqrt([n]_q) |n-1>``: nonzero only on the first superdiagonal."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    return FockOperator(_ladder(as_deformation(q).q, dim), name="a")


def build_creation(q: QLike, dim: int) -> FockOperator:
    if dim < 2:
        raise ValueError("dim must be >= 2")
    return FockOperator(_ladder(as_deformation(q).q, dim).conj().T, name="a_dag")


def build_q_half_number(q: QLike, dim: int) -> FockOperator:
    """Diagonal operator ``q**(N/2)``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    q = as_deformation(q).q
    return FockOperator(np.diag(q ** (np.arange(dim) / 2.0)), hermitian=True, name="q^(N/2)")


def build_number(q: QLike, dim: int) -> FockOperator:
    """``a_dag a``, which is ``diag([n]_q)`` (not the bare occupation number)."""
    q = as_deformation(q)
    return FockOperator(np.diag([q_number(n, q) for n in range(dim)]), hermitian=True, name="a_dag a")


def build_quadratures(q: QLike, dim: int) -> tuple[FockOperator, FockOperator, FockOperator]:
    """Return ``(X1, X2, P)``.

    ``X2`` keeps the operator ordering ``q^(N/2) a_dag + a q^(N/2)``; the sum is
    Hermitian even though each term is not.
    """
    a = build_annihilator(q, dim).entries
    ad = a.conj().T
    s = np.diag(build_q_half_number(q, dim).entries)
    r2 = math.sqrt(2.0)
    x1 = FockOperator((ad + a) / r2, hermitian=True, name="X1")
    # diagonal factors applied by broadcasting: s[:, None] * ad is q^(N/2) a_dag
    x2 = FockOperator((s[:, None] * ad + a * s[None, :]) / r2, hermitian=True, name="X2")
    p = FockOperator(1j * (ad - a) / r2, hermitian=True, name="P")
    return x1, x2, p


def coherent_tail_bound(abs_z_sq: float, q: QLike, dim: int, norm: float = 1.0) -> float:
    """Upper bound on ``sum_{n >= dim} |z|^(2n) / [n]_q!`` divided by ``norm``.

    Term ratios ``|z|^2 / [n+1]_q`` shrink with ``n``; once the ratio at the cut
    is below one the tail is a dominated geometric series. Returns ``inf`` when
    the cut is still in the growing part of the series.
    """
    if abs_z_sq == 0.0:
        return 0.0
    ratio = abs_z_sq / q_number(dim + 1, q)
    if ratio >= 1.0:
        return math.inf
    log_first = dim * math.log(abs_z_sq) - log_q_factorial(dim, q)
    return math.exp(log_first - math.log(norm)) / (1.0 - ratio)


def adaptive_dimension(abs_z_sq: float, q: QLike, tol: float = TAIL_TOL, max_dim: int | None = None) -> int:
    """Smallest ``32 * 2**k`` whose coherent-state tail bound is at most ``tol``."""
    q = as_deformation(q)
    if max_dim is None:
        max_dim = max_dimension()
    norm = q_exp_value(abs_z_sq, q).real
    dim = START_DIM
    while coherent_tail_bound(abs_z_sq, q, dim, norm) > tol:
        dim *= 2
        if dim > max_dim:
            raise DimensionOverflow(
                f"coherent state with |z|^2 = {abs_z_sq:.6g} at q = {q.q!r} needs dim > {max_dim}"
            )
    return dim


def coherent_vector(z: complex, q: QLike, dim: int | None = None) -> FockVector:
    """Normalized q-coherent state ``e_q(|z|^2)^(-1/2) sum_n z^n / sqrt([n]_q!) |n>``.

    With ``dim=None`` the truncation is chosen by :func:`adaptive_dimension`.
    """
    q = as_deformation(q)
    z = complex(z)
    abs_z_sq = abs(z) ** 2
    check_domain(abs_z_sq, q, "|z|^2")
    if dim is None:
        dim = adaptive_dimension(abs_z_sq, q)
    norm = q_exp_value(abs_z_sq, q).real
    c = np.empty(dim, dtype=complex)
    c[0] = 1.0
    for n in range(1, dim):
        c[n] = c[n - 1] * z / math.sqrt(q_number(n, q))
    c /= math.sqrt(norm)
    tail = coherent_tail_bound(abs_z_sq, q, dim, norm)
    if not math.isfinite(tail):
        tail = max(0.0, 1.0 - float(np.vdot(c, c).real))
    return FockVector(c, tail, normalized=True)


def apply(op: FockOperator, v: FockVector) -> FockVector:
    _check_dims(op.dim, v.dim)
    return FockVector(op.entries @ v.coeffs, v.tail_norm)


def inner_product(u: FockVector, v: FockVector) -> complex:
    """``<u|v>`` (antilinear in ``u``)."""
    _check_dims(u.dim, v.dim)
    return complex(np.vdot(u.coeffs, v.coeffs))


def expectation(op: FockOperator, v: FockVector) -> complex:
    """``<v|op|v>``; real-clamped for Hermitian operators."""
    _check_dims(op.dim, v.dim)
    val = complex(np.vdot(v.coeffs, op.entries @ v.coeffs))
    if op.hermitian:
        if abs(val.imag) > IMAG_CLAMP * max(1.0, abs(val.real)):
            log.warning("expectation of hermitian %s has imaginary part %.3e", op.name or "operator", val.imag)
        val = complex(val.real, 0.0)
    return val
