"""Parameter bundles for one post-selected weak-measurement evaluation."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

from .qspecial import DeformationParameter, QLike, as_deformation, check_domain, in_domain

TWO_PI = 2.0 * math.pi


class Observable(str, Enum):
    """System observable whose weak value drives the pointer shift."""

    X1 = "X1"  # (a_dag + a) / sqrt(2)
    X2 = "X2"  # (q^(N/2) a_dag + a q^(N/2)) / sqrt(2)


@dataclass(frozen=True)
class CoherentLabel:
    """Complex amplitude stored in polar form; ``phase`` is reduced to ``[0, 2pi)``."""

    modulus: float
    phase: float = 0.0

    def __post_init__(self):
        m = float(self.modulus)
        if not m >= 0.0 or math.isinf(m):
            raise ValueError(f"modulus must be finite and >= 0, got {self.modulus!r}")
        p = math.fmod(float(self.phase), TWO_PI)
        if p < 0.0:
            p += TWO_PI
        if p >= TWO_PI:
            p = 0.0
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "phase", p)

    @classmethod
    def from_complex(cls, z: complex) -> "CoherentLabel":
        z = complex(z)
        return cls(abs(z), cmath.phase(z))

    @property
    def value(self) -> complex:
        return cmath.rect(self.modulus, self.phase)

    def __complex__(self) -> complex:
        return self.value


def as_label(z) -> CoherentLabel:
    if isinstance(z, CoherentLabel):
        return z
    return CoherentLabel.from_complex(z)


@dataclass(frozen=True)
class WeakValue:
    value: complex
    # post-selection nearly orthogonal to pre-selection
    anomalous: bool = False

    def __complex__(self) -> complex:
        return self.value


@dataclass(frozen=True)
class MeasurementConfig:
    """Pointer ``z``, pre-selection ``alpha``, post-selection ``beta``, coupling ``g``.

    ``g`` is the dimensionless product of coupling and interaction time.
    Construction checks only what the pointer statistics need: ``|z|^2`` and,
    for ``X2``, ``|alpha beta*|`` inside the q-exponential domain. The overlap
    ``<beta|alpha>`` additionally needs ``|alpha|^2`` and ``|beta|^2`` in domain
    and is checked where it is evaluated.
    """

    q: DeformationParameter
    g: float
    z: CoherentLabel
    alpha: CoherentLabel
    beta: CoherentLabel
    observable: Observable = Observable.X1

    def __post_init__(self):
        object.__setattr__(self, "q", as_deformation(self.q))
        g = float(self.g)
        if not g >= 0.0 or math.isinf(g):
            raise ValueError(f"coupling g must be finite and >= 0, got {self.g!r}")
        object.__setattr__(self, "g", g)
        for name in ("z", "alpha", "beta"):
            object.__setattr__(self, name, as_label(getattr(self, name)))
        object.__setattr__(self, "observable", Observable(self.observable))
        check_domain(self.z.modulus ** 2, self.q, "|z|^2")
        if self.observable is Observable.X2:
            check_domain(self.alpha.modulus * self.beta.modulus, self.q, "|alpha beta*|")

    def with_(self, **changes) -> "MeasurementConfig":
        return replace(self, **changes)

    @property
    def labels_in_domain(self) -> bool:
        """Whether ``<beta|alpha>`` (hence the overlap and its normalization) is finite."""
        return in_domain(self.alpha.modulus ** 2, self.q) and in_domain(self.beta.modulus ** 2, self.q)


def make_config(
    q: QLike,
    g: float,
    z_modulus: float,
    z_phase: float,
    alpha_modulus: float,
    alpha_phase: float,
    beta_modulus: float,
    beta_phase: float,
    observable: Observable | str = Observable.X1,
) -> MeasurementConfig:
    return MeasurementConfig(
        q=as_deformation(q),
        g=g,
        z=CoherentLabel(z_modulus, z_phase),
        alpha=CoherentLabel(alpha_modulus, alpha_phase),
        beta=CoherentLabel(beta_modulus, beta_phase),
        observable=Observable(observable),
    )
