"""Brute-force evaluation of every pointer quantity in a truncated Fock basis.

Nothing in this module touches the closed-form expressions; it only builds
coherent vectors, applies ladder-operator matrices and takes inner products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fockspace as fs
from .config import MeasurementConfig, Observable, as_label
from .qspecial import QLike, as_deformation, q_number

# extra basis states above the coherent truncation so that up to four raising
# operators act on the pointer without clipping
PAD = 4


def _labels_vectors(alpha, beta, q: QLike) -> tuple[fs.FockVector, fs.FockVector]:
    q = as_deformation(q)
    a, b = complex(as_label(alpha)), complex(as_label(beta))
    dim = max(fs.adaptive_dimension(abs(a) ** 2, q), fs.adaptive_dimension(abs(b) ** 2, q)) + PAD
    return fs.coherent_vector(a, q, dim), fs.coherent_vector(b, q, dim)


def fidelity(alpha, beta, q: QLike) -> complex:
    """``<beta|alpha>`` from explicit coherent vectors."""
    va, vb = _labels_vectors(alpha, beta, q)
    return fs.inner_product(vb, va)


def _raw_label_vector(x: complex, q, dim: int) -> np.ndarray:
    c = np.empty(dim, dtype=complex)
    c[0] = 1.0
    for n in range(1, dim):
        c[n] = c[n - 1] * x / math.sqrt(q_number(n, q))
    return c


def weak_value(alpha, beta, q: QLike, observable: Observable | str) -> complex:
    """``<beta|A|alpha> / <beta|alpha>`` with ``A`` built as a matrix.

    Normalizations cancel in the ratio, so the label vectors are left
    unnormalized; only ``|alpha beta*|`` has to lie inside the series domain,
    not ``|alpha|^2`` and ``|beta|^2`` separately.
    """
    q = as_deformation(q)
    a, b = complex(as_label(alpha)), complex(as_label(beta))
    dim = fs.adaptive_dimension(abs(a) * abs(b), q) + PAD
    va, vb = _raw_label_vector(a, q, dim), _raw_label_vector(b, q, dim)
    x1, x2, _ = fs.build_quadratures(q, dim)
    op = x1 if Observable(observable) is Observable.X1 else x2
    return complex(np.vdot(vb, op.entries @ va)) / complex(np.vdot(vb, va))


def eigenvalue_scale(z, q: QLike) -> float:
    """``<z|X2|z>`` on the truncated coherent vector."""
    q = as_deformation(q)
    zc = complex(as_label(z))
    v = fs.coherent_vector(zc, q, fs.adaptive_dimension(abs(zc) ** 2, q) + PAD)
    _, x2, _ = fs.build_quadratures(q, v.dim)
    return fs.expectation(x2, v).real


def unnormalized_pointer(config: MeasurementConfig, aw: complex) -> fs.FockVector:
    """``|z> - i g A_w P |z>`` (first-order coupling, before post-selection scaling)."""
    q = config.q
    z = config.z.value
    dim = fs.adaptive_dimension(abs(z) ** 2, q) + PAD
    v = fs.coherent_vector(z, q, dim)
    a = fs.build_annihilator(q, dim).entries
    p_v = 1j * (a.conj().T @ v.coeffs - a @ v.coeffs) / math.sqrt(2.0)
    coeffs = v.coeffs - 1j * config.g * complex(aw) * p_v
    return fs.FockVector(coeffs, v.tail_norm)


def pointer_norm_squared(config: MeasurementConfig, aw: complex) -> float:
    """Squared norm of :func:`unnormalized_pointer`."""
    return unnormalized_pointer(config, aw).norm_squared()


def normalized_pointer(config: MeasurementConfig, aw: complex, phase: complex = 1.0) -> fs.FockVector:
    v = unnormalized_pointer(config, aw)
    scale = complex(phase) / math.sqrt(v.norm_squared())
    return fs.FockVector(v.coeffs * scale, v.tail_norm, normalized=True)


@dataclass(frozen=True)
class OracleStatistics:
    """Moments of a normalized pointer vector, all by matrix-vector products."""

    probabilities: np.ndarray
    mean_photon: float  # <a_dag a>
    second_photon: float  # <(a_dag a)^2>
    pair_photon: float  # <a_dag^2 a^2>
    mandel_q: float
    g2_zero: float
    mean_x: float
    mean_p: float
    second_x: float
    second_p: float
    var_x: float
    var_p: float
    cross_xp: complex  # <X P>
    commutator: complex  # <[X, P]>


def statistics(v: fs.FockVector, q: QLike) -> OracleStatistics:
    q = as_deformation(q)
    a = fs.build_annihilator(q, v.dim).entries
    ad = a.conj().T
    c = v.coeffs
    r2 = math.sqrt(2.0)
    ac = a @ c
    aac = a @ ac
    adac = ad @ ac  # a_dag a |v>
    mean_n = float(np.vdot(ac, ac).real)
    second_n = float(np.vdot(adac, adac).real)
    pair = float(np.vdot(aac, aac).real)
    xc = (ad @ c + ac) / r2
    pc = 1j * (ad @ c - ac) / r2
    mean_x = complex(np.vdot(c, xc)).real
    mean_p = complex(np.vdot(c, pc)).real
    second_x = float(np.vdot(xc, xc).real)
    second_p = float(np.vdot(pc, pc).real)
    xp = complex(np.vdot(xc, pc))  # <v| X P |v>, X Hermitian
    px = complex(np.vdot(pc, xc))
    if mean_n > 0:
        mandel = (second_n - mean_n ** 2) / mean_n - 1.0
        g2 = pair / mean_n ** 2
    else:
        mandel = g2 = math.nan
    return OracleStatistics(
        probabilities=np.abs(c) ** 2,
        mean_photon=mean_n,
        second_photon=second_n,
        pair_photon=pair,
        mandel_q=mandel,
        g2_zero=g2,
        mean_x=mean_x,
        mean_p=mean_p,
        second_x=second_x,
        second_p=second_p,
        var_x=second_x - mean_x ** 2,
        var_p=second_p - mean_p ** 2,
        cross_xp=xp,
        commutator=xp - px,
    )
