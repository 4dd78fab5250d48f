"""Named parameter sets for the figure sweeps.

Each preset fixes every scalar parameter, a default sweep axis with its grid,
and optionally a *series*: one parameter that takes several values, producing
one curve per value. Angles may be written as ``7pi/8`` style strings.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .config import MeasurementConfig, Observable, make_config
from .errors import ConfigError

PI = math.pi

PARAMETER_NAMES = (
    "q",
    "g",
    "z_modulus",
    "z_phase",
    "alpha_modulus",
    "alpha_phase",
    "beta_modulus",
    "beta_phase",
    "observable",
)
NUMERIC_PARAMETERS = PARAMETER_NAMES[:-1]
ANGLE_PARAMETERS = ("z_phase", "alpha_phase", "beta_phase")
SERIES_KEYS = ("q", "g", "z_modulus")
AXES = ("q", "g", "z_modulus", "n")

_ANGLE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text: str) -> float:
    """``"7pi/8"``, ``"-pi/4"``, ``"2*pi/3"``, ``"pi"`` or a plain float in radians."""
    s = str(text).strip().lower()
    m = _ANGLE.match(s)
    if m:
        coeff = m.group(1)
        if coeff in ("", "+"):
            c = 1.0
        elif coeff == "-":
            c = -1.0
        else:
            c = float(coeff)
        den = float(m.group(2)) if m.group(2) else 1.0
        return c * PI / den
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None


def parse_observables(text: str) -> tuple[Observable, ...]:
    s = str(text).strip().upper()
    if s in ("BOTH", "X1,X2", "X1+X2"):
        return (Observable.X1, Observable.X2)
    try:
        return (Observable(s),)
    except ValueError:
        raise ConfigError(f"unknown observable {text!r} (expected X1, X2 or both)") from None


def parse_value(key: str, text) -> float | tuple[Observable, ...]:
    if key not in PARAMETER_NAMES:
        raise ConfigError(f"unknown parameter {key!r}; known: {', '.join(PARAMETER_NAMES)}")
    if key == "observable":
        return parse_observables(text)
    if key in ANGLE_PARAMETERS:
        return parse_angle(text)
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"parameter {key!r}: cannot parse {text!r} as a number") from None


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    params: dict
    observables: tuple[Observable, ...]
    axis: str
    axis_values: tuple[float, ...]
    series_key: str | None = None
    series_values: tuple[float, ...] = ()
    notes: str = ""

    def config(self, observable: Observable | None = None, **overrides) -> MeasurementConfig:
        p = dict(self.params)
        p.update(overrides)
        return make_config(observable=observable or self.observables[0], **p)


def linspace(start: float, stop: float, count: int) -> tuple[float, ...]:
    if count == 1:
        return (float(start),)
    step = (stop - start) / (count - 1)
    return tuple(start + k * step for k in range(count - 1)) + (float(stop),)


def _params(q, g, z, zp, a, ap, b, bp) -> dict:
    return dict(
        q=q, g=g, z_modulus=z, z_phase=zp, alpha_modulus=a, alpha_phase=ap, beta_modulus=b, beta_phase=bp
    )


X1 = (Observable.X1,)
X2 = (Observable.X2,)
Z_GRID = linspace(0.0, 2.0, 41)
Q_GRID = linspace(0.05, 1.0, 96)

# shared angles of the photon-statistics figures
_STATS = dict(zp=PI / 2, ap=PI / 8, bp=7 * PI / 8)
_SQUEEZE = dict(zp=PI / 2, ap=PI / 3, bp=2 * PI / 3)


def _mk(name, description, params, observables, axis, axis_values, series_key=None, series_values=(), notes=""):
    return Preset(
        name=name,
        description=description,
        params=params,
        observables=observables,
        axis=axis,
        axis_values=tuple(axis_values),
        series_key=series_key,
        series_values=tuple(series_values),
        notes=notes,
    )


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        _mk(
            "fig1",
            "X2 weak value against q with the eigenvalue baseline",
            _params(1.0, 0.0, 1.0, PI / 8, 2.0, 7 * PI / 8, 0.5, 0.0),
            X2,
            "q",
            Q_GRID,
            notes="|alpha|=2, |beta|=0.5, pointer phase pi/8, alpha phase 7pi/8; |z| and beta phase unstated, set to 1 and 0",
        ),
        _mk(
            "fig2",
            "photon distribution of the X2 pointer for several q",
            _params(1.0, 0.3, 1.5, PI / 2, 2.0, PI / 2, 1.0, PI / 2),
            X2,
            "n",
            range(0, 16),
            "q",
            (0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0),
            notes="q below 0.5556 puts |z|^2 = 2.25 outside the series domain; those curves are flagged",
        ),
        _mk(
            "fig3a", "Mandel parameter, X1 weak value, g=0.6, several q",
            _params(1.0, 0.6, 1.0, _STATS["zp"], 2.0, _STATS["ap"], 0.5, _STATS["bp"]),
            X1, "z_modulus", Z_GRID, "q", (0.2, 0.5, 0.8, 1.0),
        ),
        _mk(
            "fig3b", "Mandel parameter, X2 weak value, g=0.6, several q",
            _params(1.0, 0.6, 1.0, _STATS["zp"], 2.0, _STATS["ap"], 0.5, _STATS["bp"]),
            X2, "z_modulus", Z_GRID, "q", (0.2, 0.5, 0.8, 1.0),
        ),
        _mk(
            "fig3c", "Mandel parameter, X1 weak value, q=0.8, several g",
            _params(0.8, 0.6, 1.0, _STATS["zp"], 2.0, _STATS["ap"], 0.5, _STATS["bp"]),
            X1, "z_modulus", Z_GRID, "g", (0.2, 0.4, 0.6, 0.8, 1.0),
        ),
        _mk(
            "fig3d", "Mandel parameter, X2 weak value, q=0.8, several g",
            _params(0.8, 0.6, 1.0, _STATS["zp"], 2.0, _STATS["ap"], 0.5, _STATS["bp"]),
            X2, "z_modulus", Z_GRID, "g", (0.2, 0.4, 0.6, 0.8, 1.0),
        ),
        _mk(
            "fig4a", "g2(0), X1 weak value, g=0.2, several q",
            _params(1.0, 0.2, 1.0, _STATS["zp"], 2.0, _STATS["ap"], 0.5, _STATS["bp"]),
            X1, "z_modulus", Z_GRID, "q", (0.3, 0.5, 0.8, 1.0),
        ),
        _mk(
            "fig4b", "g2(0), X2 weak value, g=0.2, several q",
            _params(1.0, 0.2, 1.0, _STATS["zp"], 2.0, _STATS["ap"], 0.5, _STATS["bp"]),
            X2, "z_modulus", Z_GRID, "q", (0.3, 0.5, 0.8, 1.0),
        ),
        _mk(
            "fig4c", "g2(0), X1 weak value, q=0.3, several g",
            _params(0.3, 0.2, 1.0, _STATS["zp"], 2.0, _STATS["ap"], 0.5, _STATS["bp"]),
            X1, "z_modulus", Z_GRID, "g", (0.2, 0.4, 0.6, 0.8, 1.0),
        ),
        _mk(
            "fig4d", "g2(0), X2 weak value, q=0.3, several g",
            _params(0.3, 0.2, 1.0, _STATS["zp"], 2.0, _STATS["ap"], 0.5, _STATS["bp"]),
            X2, "z_modulus", Z_GRID, "g", (0.2, 0.4, 0.6, 0.8, 1.0),
        ),
        _mk(
            "fig5a", "uncertainty relation, X1 weak value, |alpha|=4, |beta|=2",
            _params(1.0, 0.8, 1.0, _STATS["zp"], 4.0, _STATS["ap"], 2.0, _STATS["bp"]),
            X1, "z_modulus", Z_GRID, "q", (0.9, 0.95, 1.0),
            notes="g and q unstated; g=0.8 and q in {0.9, 0.95, 1} chosen so |alpha beta*| = 8 stays in domain",
        ),
        _mk(
            "fig5b", "uncertainty relation, X2 weak value, |alpha|=4, |beta|=2",
            _params(1.0, 0.8, 1.0, _STATS["zp"], 4.0, _STATS["ap"], 2.0, _STATS["bp"]),
            X2, "z_modulus", Z_GRID, "q", (0.9, 0.95, 1.0),
            notes="g and q unstated; g=0.8 and q in {0.9, 0.95, 1} chosen so |alpha beta*| = 8 stays in domain",
        ),
        _mk(
            "fig5c", "quadrature variances, X1 weak value, g=0.8, several q",
            _params(0.7, 0.8, 1.0, _SQUEEZE["zp"], 4.0, _SQUEEZE["ap"], 0.5, _SQUEEZE["bp"]),
            X1, "z_modulus", Z_GRID, "q", (0.5, 0.6, 0.7, 0.9),
        ),
        _mk(
            "fig5d", "quadrature variances, X2 weak value, g=0.8, several q",
            _params(0.7, 0.8, 1.0, _SQUEEZE["zp"], 4.0, _SQUEEZE["ap"], 0.5, _SQUEEZE["bp"]),
            X2, "z_modulus", Z_GRID, "q", (0.5, 0.6, 0.7, 0.9),
            notes="at q=0.5 |alpha beta*| = 2 sits on the series radius; that curve is flagged",
        ),
        _mk(
            "fig5cd", "quadrature variances, both weak values, g=0.8, q=0.5",
            _params(0.5, 0.8, 1.0, _SQUEEZE["zp"], 4.0, _SQUEEZE["ap"], 0.5, _SQUEEZE["bp"]),
            (Observable.X1, Observable.X2), "z_modulus", Z_GRID,
        ),
        _mk(
            "fig5e", "quadrature variances, X1 weak value, q=0.7, several g",
            _params(0.7, 0.8, 1.0, _SQUEEZE["zp"], 4.0, _SQUEEZE["ap"], 0.5, _SQUEEZE["bp"]),
            X1, "z_modulus", Z_GRID, "g", (0.2, 0.4, 0.6, 0.8, 1.0),
            notes="moduli not restated for this panel; reused |alpha|=4, |beta|=0.5",
        ),
        _mk(
            "fig5f", "quadrature variances, X2 weak value, q=0.7, several g",
            _params(0.7, 0.8, 1.0, _SQUEEZE["zp"], 4.0, _SQUEEZE["ap"], 0.5, _SQUEEZE["bp"]),
            X2, "z_modulus", Z_GRID, "g", (0.2, 0.4, 0.6, 0.8, 1.0),
            notes="moduli not restated for this panel; reused |alpha|=4, |beta|=0.5",
        ),
        _mk(
            "fig5_caption", "quadrature variances at g=0.8, q=0.7 (caption values)",
            _params(0.7, 0.8, 1.0, _SQUEEZE["zp"], 4.0, _SQUEEZE["ap"], 0.5, _SQUEEZE["bp"]),
            (Observable.X1, Observable.X2), "z_modulus", Z_GRID,
            notes="caption and running text disagree on (g, q); see fig5_text",
        ),
        _mk(
            "fig5_text", "quadrature variances at g=0.9, q=0.8 (running-text values)",
            _params(0.8, 0.9, 1.0, _SQUEEZE["zp"], 4.0, _SQUEEZE["ap"], 0.5, _SQUEEZE["bp"]),
            (Observable.X1, Observable.X2), "z_modulus", Z_GRID,
            notes="caption and running text disagree on (g, q); see fig5_caption",
        ),
    ]
}

# which sweep each preset is meant for
PRESET_COMMAND = {
    "fig1": "weak-value",
    "fig2": "photon-dist",
    **{f"fig3{s}": "mandel" for s in "abcd"},
    **{f"fig4{s}": "g2" for s in "abcd"},
    **{n: "quadrature" for n in ("fig5a", "fig5b", "fig5c", "fig5d", "fig5cd", "fig5e", "fig5f", "fig5_caption", "fig5_text")},
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None
