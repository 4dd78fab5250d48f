"""Uncorrected closed forms, kept for comparison against the returned ones.

Three long closed forms circulate in a slightly different shape from the ones
:mod:`qpointer.photonstats` returns. Each variant below reproduces that shape
so the differences can be measured against the Fock oracle:

* ``photon_distribution_without_raising`` drops the ``c sqrt([n]) z^(n-1)``
  contribution of the creation operator in the momentum kick. The result is
  not normalized.
* ``mandel_q_unsquared_mean`` subtracts ``<a_dag a>`` instead of
  ``<a_dag a>^2`` from the second moment.
* ``second_p_flipped_linear`` flips the sign of the first-order term of
  ``<P^2>``.

The verification harness also uses these as deliberately broken closed forms
to prove that it fails when it should.
"""
from __future__ import annotations

import math

import numpy as np

from .config import MeasurementConfig
from .fockspace import adaptive_dimension
from .photonstats import (
    SQRT2,
    _mean_photon_bracket,
    _params,
    _quadrature_second_bracket,
    _second_photon_bracket,
)
from .qspecial import q_exp_value, q_number
from .weakmeas import pointer_prefactor


def photon_distribution_without_raising(config: MeasurementConfig, aw=None, dim: int | None = None) -> np.ndarray:
    z, _, r2, q, g, A = _params(config, aw)
    K = pointer_prefactor(config, A)
    if dim is None:
        dim = adaptive_dimension(r2, q) + 1
    u = 1.0 - g * A / SQRT2 * z
    ez = q_exp_value(r2, q).real
    probs = np.empty(dim)
    cur = 1.0 + 0.0j
    for n in range(dim):
        if n:
            cur = cur * z / math.sqrt(q_number(n, q))
        probs[n] = K * abs(u * cur) ** 2 / ez
    return probs


def mandel_q_unsquared_mean(config: MeasurementConfig, aw=None) -> float:
    p = _params(config, aw)
    K = pointer_prefactor(config, p[-1])
    mean = K * _mean_photon_bracket(*p)
    second = K * _second_photon_bracket(*p)
    return (second - mean) / mean - 1.0


def second_p_flipped_linear(config: MeasurementConfig, aw=None) -> float:
    p = _params(config, aw)
    K = pointer_prefactor(config, p[-1])
    return K / 2 * _quadrature_second_bracket(-1, *p, linear_sign=-1)


VARIANTS = {
    "probabilities": photon_distribution_without_raising,
    "mandel_q": mandel_q_unsquared_mean,
    "second_p": second_p_flipped_linear,
}
