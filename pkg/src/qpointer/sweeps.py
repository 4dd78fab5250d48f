"""Parameter sweeps behind the CLI and their CSV / JSON serialization.

A sweep resolves a preset (or the defaults) plus overrides into a base
parameter set, then evaluates one row per (series value, axis value). Points
outside the series domain are kept as rows with a status flag and empty cells;
they are also listed under ``clipped`` in the metadata.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, oracle
from .config import CoherentLabel, MeasurementConfig, Observable, make_config
from .errors import ConfigError, DimensionOverflow, DomainError, NonConvergence, NonPositiveNorm, ZeroMeanPhoton
from .fockspace import TAIL_TOL, max_dimension
from .photonstats import (
    DISTRIBUTION_TOL,
    ORACLE_TOL,
    _g2_closed,
    _mandel_closed,
    _moments_closed,
    mean_photon,
    photon_distribution_closed,
    rel_delta,
)
from .presets import AXES, PARAMETER_NAMES, SERIES_KEYS, get_preset, linspace, parse_value
from .qspecial import DEFAULT_TOL, DOMAIN_MARGIN
from .weakmeas import eigenvalue_scale, pointer_state, weak_value

log = logging.getLogger(__name__)

DEFAULT_PARAMS = dict(
    q=1.0, g=0.0, z_modulus=1.0, z_phase=0.0, alpha_modulus=1.0, alpha_phase=0.0, beta_modulus=1.0, beta_phase=0.0
)
DEFAULT_AXIS = {
    "weak-value": ("q", linspace(0.05, 1.0, 96)),
    "photon-dist": ("n", tuple(range(16))),
    "mandel": ("z_modulus", linspace(0.0, 2.0, 41)),
    "g2": ("z_modulus", linspace(0.0, 2.0, 41)),
    "quadrature": ("z_modulus", linspace(0.0, 2.0, 41)),
}

STATUS_OK = "ok"
STATUS_OUT = "out_of_domain"
STATUS_NO_ORACLE = "oracle_unavailable"
STATUS_UNDEFINED = "undefined"


@dataclass(frozen=True)
class SweepSpec:
    preset: str | None = None
    overrides: dict = field(default_factory=dict)
    sweep_axis: str | None = None
    axis_values: tuple | None = None
    series: tuple | None = None  # (key, values)
    output_path: Path | None = None
    format: str = "csv"

    def __post_init__(self):
        for key in self.overrides:
            if key not in PARAMETER_NAMES:
                raise ConfigError(f"unknown parameter {key!r} in overrides; known: {', '.join(PARAMETER_NAMES)}")
        if self.sweep_axis is not None and self.sweep_axis not in AXES:
            raise ConfigError(f"unknown sweep axis {self.sweep_axis!r}; expected one of {', '.join(AXES)}")
        if self.axis_values is not None:
            vals = tuple(float(v) for v in self.axis_values)
            if not vals:
                raise ConfigError("axis values must be nonempty")
            if any(not math.isfinite(v) for v in vals):
                raise ConfigError("axis values must be finite")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ConfigError("axis values must be strictly increasing")
            object.__setattr__(self, "axis_values", vals)
        if self.series is not None:
            key, values = self.series
            if key not in SERIES_KEYS:
                raise ConfigError(f"series key must be one of {', '.join(SERIES_KEYS)}, got {key!r}")
            values = tuple(float(v) for v in values)
            if not values:
                raise ConfigError("series values must be nonempty")
            object.__setattr__(self, "series", (key, values))
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.output_path is not None:
            object.__setattr__(self, "output_path", Path(self.output_path))


@dataclass
class SweepResult:
    columns: list[str]
    rows: list[list]
    metadata: dict

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, r)) for r in self.rows]


@dataclass
class _Resolved:
    command: str
    preset: str | None
    params: dict
    observables: tuple
    axis: str
    axis_values: tuple
    series_key: str | None
    series_values: tuple
    notes: str

    def points(self):
        for s in self.series_values or (None,):
            for x in self.axis_values:
                p = dict(self.params)
                if self.series_key is not None:
                    p[self.series_key] = s
                if self.axis != "n":
                    p[self.axis] = x
                yield s, x, p


def resolve(spec: SweepSpec, command: str) -> _Resolved:
    notes = ""
    if spec.preset is not None:
        pr = get_preset(spec.preset)
        params = dict(pr.params)
        observables = pr.observables
        axis, axis_values = pr.axis, pr.axis_values
        series_key, series_values = pr.series_key, pr.series_values
        notes = pr.notes
    else:
        params = dict(DEFAULT_PARAMS)
        observables = (Observable.X1,)
        axis, axis_values = DEFAULT_AXIS[command]
        series_key, series_values = None, ()

    for key, raw in spec.overrides.items():
        value = parse_value(key, raw)
        if key == "observable":
            observables = value
            continue
        params[key] = value
        if key == series_key:
            series_key, series_values = None, ()

    if spec.series is not None:
        series_key, series_values = spec.series
    if spec.sweep_axis is not None and spec.sweep_axis != axis:
        axis = spec.sweep_axis
        axis_values = DEFAULT_AXIS[command][1] if axis == DEFAULT_AXIS[command][0] else None
    if spec.axis_values is not None:
        axis_values = spec.axis_values
    if axis_values is None:
        raise ConfigError(f"axis {axis!r} needs explicit values (--range or --values)")

    if command == "photon-dist":
        if axis != "n":
            raise ConfigError("photon-dist sweeps run over the photon number axis 'n'")
        if any(v < 0 or v != int(v) for v in axis_values):
            raise ConfigError("photon numbers must be nonnegative integers")
        axis_values = tuple(int(v) for v in axis_values)
    elif axis == "n":
        raise ConfigError(f"axis 'n' is only valid for photon-dist, not {command}")
    if series_key is not None and series_key == axis:
        raise ConfigError(f"series key {series_key!r} coincides with the sweep axis")

    for key in ("q", "g"):
        vals = [params[key]]
        if series_key == key:
            vals += list(series_values)
        if axis == key:
            vals += list(axis_values)
        if key == "q" and any(not 0.0 < v <= 1.0 for v in vals):
            raise ConfigError("q values must satisfy 0 < q <= 1")
        if key == "g" and any(v < 0.0 for v in vals):
            raise ConfigError("g values must be >= 0")
    if axis == "z_modulus" and any(v < 0 for v in axis_values):
        raise ConfigError("z_modulus values must be >= 0")

    return _Resolved(
        command=command,
        preset=spec.preset,
        params=params,
        observables=tuple(observables),
        axis=axis,
        axis_values=tuple(axis_values),
        series_key=series_key,
        series_values=tuple(series_values),
        notes=notes,
    )


def _config(p: dict, obs: Observable) -> MeasurementConfig:
    return make_config(observable=obs, **p)


def _suffix(obs: Observable) -> str:
    return "_" + obs.value.lower()


def _metadata(r: _Resolved, clipped: list, extra: dict | None = None) -> dict:
    meta = {
        "tool": "qpointer",
        "version": __version__,
        "command": r.command,
        "preset": r.preset,
        "parameters": {**r.params, "observables": [o.value for o in r.observables]},
        "axis": r.axis,
        "axis_values": list(r.axis_values),
        "series": None if r.series_key is None else {"key": r.series_key, "values": list(r.series_values)},
        "tolerances": {
            "oracle_relative": ORACLE_TOL,
            "distribution_absolute": DISTRIBUTION_TOL,
            "series_relative": DEFAULT_TOL,
            "domain_margin": DOMAIN_MARGIN,
            "fock_tail": TAIL_TOL,
        },
        "max_fock_dim": max_dimension(),
        "notes": r.notes,
        "clipped": clipped,
    }
    if extra:
        meta.update(extra)
    return meta


def _lead_columns(r: _Resolved) -> list[str]:
    return ([r.series_key] if r.series_key else []) + [r.axis]


def _lead(r: _Resolved, s, x) -> list:
    return ([s] if r.series_key else []) + [x]


def _clip(clipped: list, r: _Resolved, s, x, obs, err: Exception) -> None:
    entry = {r.axis: x, "reason": str(err)}
    if r.series_key:
        entry[r.series_key] = s
    if obs is not None:
        entry["observable"] = obs.value
    clipped.append(entry)


# ------------------------------------------------------------------ weak value


def run_weak_value_sweep(spec: SweepSpec) -> SweepResult:
    r = resolve(spec, "weak-value")
    columns = _lead_columns(r) + ["eigenvalue", "eigenvalue_status"]
    for o in r.observables:
        sfx = _suffix(o)
        columns += [f"weak_value_re{sfx}", f"weak_value_im{sfx}", f"weak_value_abs{sfx}",
                    f"anomalous{sfx}", f"oracle_delta{sfx}", f"status{sfx}"]
    rows, clipped = [], []
    for s, x, p in r.points():
        row = _lead(r, s, x)
        q = p["q"]
        z = CoherentLabel(p["z_modulus"], p["z_phase"])
        try:
            ev = eigenvalue_scale(z, q)
            row += [ev, STATUS_OK]
        except DomainError as err:
            row += [None, STATUS_OUT]
            _clip(clipped, r, s, x, None, err)
        for o in r.observables:
            try:
                cfg = _config({**p, "z_modulus": 0.0}, o)
            except DomainError as err:
                row += [None] * 5 + [STATUS_OUT]
                _clip(clipped, r, s, x, o, err)
                continue
            wv = weak_value(cfg)
            delta, status = None, STATUS_OK
            try:
                ref = oracle.weak_value(cfg.alpha, cfg.beta, cfg.q, o)
                delta = rel_delta(wv.value, ref)
            except (DomainError, DimensionOverflow, NonConvergence):
                status = STATUS_NO_ORACLE
            row += [wv.value.real, wv.value.imag, abs(wv.value), wv.anomalous, delta, status]
        rows.append(row)
    return SweepResult(columns, rows, _metadata(r, clipped))


# ------------------------------------------------------------- photon numbers


def run_photon_dist(spec: SweepSpec) -> SweepResult:
    r = resolve(spec, "photon-dist")
    obs = r.observables[0]
    if len(r.observables) > 1:
        raise ConfigError("photon-dist takes a single observable")
    columns = _lead_columns(r) + ["probability", "oracle_delta", "status"]
    rows, clipped, totals = [], [], []
    nmax = max(r.axis_values)
    for s in r.series_values or (None,):
        p = dict(r.params)
        if r.series_key:
            p[r.series_key] = s
        try:
            cfg = _config(p, obs)
        except DomainError as err:
            log.warning("skipping %s=%s: %s", r.series_key or "point", s, err)
            for n in r.axis_values:
                rows.append(_lead(r, s, n) + [None, None, STATUS_OUT])
            _clip(clipped, r, s, None, obs, err)
            totals.append({"value": s, "total": None})
            continue
        probs = photon_distribution_closed(cfg)
        if probs.size <= nmax:
            probs = photon_distribution_closed(cfg, dim=nmax + 1)
        total = math.fsum(probs)
        try:
            brute = pointer_state(cfg).probabilities()
        except DimensionOverflow:
            brute = None
        totals.append({"value": s, "total": total})
        for n in r.axis_values:
            delta = None
            if brute is not None:
                delta = abs(probs[n] - brute[n]) if n < brute.size else abs(probs[n])
            rows.append(_lead(r, s, n) + [float(probs[n]), delta, STATUS_OK if brute is not None else STATUS_NO_ORACLE])
    return SweepResult(columns, rows, _metadata(r, clipped, {"total_probability": totals}))


# ---------------------------------------------------------------- statistics


def _stat_sweep(spec: SweepSpec, command: str, names: list[str], evaluate) -> SweepResult:
    r = resolve(spec, command)
    columns = _lead_columns(r)
    for o in r.observables:
        sfx = _suffix(o)
        columns += [n + sfx for n in names] + [f"oracle_delta{sfx}", f"status{sfx}"]
    rows, clipped = [], []
    for s, x, p in r.points():
        row = _lead(r, s, x)
        for o in r.observables:
            try:
                cfg = _config(p, o)
            except DomainError as err:
                row += [None] * len(names) + [None, STATUS_OUT]
                _clip(clipped, r, s, x, o, err)
                continue
            try:
                values, refs = evaluate(cfg)
            except (ZeroMeanPhoton, NonPositiveNorm) as err:
                row += [None] * len(names) + [None, STATUS_UNDEFINED]
                _clip(clipped, r, s, x, o, err)
                continue
            row += [values[n] for n in names]
            try:
                brute = oracle.statistics(pointer_state(cfg), cfg.q)
            except DimensionOverflow:
                row += [None, STATUS_NO_ORACLE]
                continue
            row += [max(rel_delta(values[k], getattr(brute, a)) for k, a in refs.items()), STATUS_OK]
        rows.append(row)
    return SweepResult(columns, rows, _metadata(r, clipped))


def _mandel_values(cfg):
    aw = weak_value(cfg).value
    return (
        {"mandel_q": _mandel_closed(cfg, aw), "mean_photon": mean_photon(cfg, aw)},
        {"mandel_q": "mandel_q", "mean_photon": "mean_photon"},
    )


def _g2_values(cfg):
    aw = weak_value(cfg).value
    return (
        {"g2_zero": _g2_closed(cfg, aw), "mean_photon": mean_photon(cfg, aw)},
        {"g2_zero": "g2_zero", "mean_photon": "mean_photon"},
    )


QUADRATURE_COLUMNS = [
    "mean_x", "mean_p", "var_x", "var_p", "commutator_im", "half_commutator",
    "uncertainty_product", "uncertainty_bound", "squeezed_x", "squeezed_p",
]


def _quadrature_values(cfg):
    m = _moments_closed(cfg)
    values = {
        "mean_x": m.mean_x,
        "mean_p": m.mean_p,
        "var_x": m.var_x,
        "var_p": m.var_p,
        "second_x": m.second_x,
        "second_p": m.second_p,
        "commutator_im": m.commutator_expect.imag,
        "commutator": m.commutator_expect,
        "half_commutator": m.half_commutator,
        "uncertainty_product": m.uncertainty_product,
        "uncertainty_bound": m.uncertainty_bound,
        "squeezed_x": m.squeezed_x,
        "squeezed_p": m.squeezed_p,
    }
    refs = {"mean_x": "mean_x", "mean_p": "mean_p", "second_x": "second_x", "second_p": "second_p", "commutator": "commutator"}
    return values, refs


def run_mandel_sweep(spec: SweepSpec) -> SweepResult:
    return _stat_sweep(spec, "mandel", ["mandel_q", "mean_photon"], _mandel_values)


def run_g2_sweep(spec: SweepSpec) -> SweepResult:
    return _stat_sweep(spec, "g2", ["g2_zero", "mean_photon"], _g2_values)


def run_quadrature_sweep(spec: SweepSpec) -> SweepResult:
    return _stat_sweep(spec, "quadrature", QUADRATURE_COLUMNS, _quadrature_values)


RUNNERS = {
    "weak-value": run_weak_value_sweep,
    "photon-dist": run_photon_dist,
    "mandel": run_mandel_sweep,
    "g2": run_g2_sweep,
    "quadrature": run_quadrature_sweep,
}


# --------------------------------------------------------------- serialization


def format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    buf.write("# metadata: " + json.dumps(_json_safe(result.metadata), sort_keys=True, separators=(",", ":")) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(result.columns)
    for row in result.rows:
        w.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def to_json(result: SweepResult) -> str:
    doc = {"metadata": result.metadata, "columns": result.columns, "rows": result.rows}
    return json.dumps(_json_safe(doc), sort_keys=True, indent=1) + "\n"


def render(result: SweepResult, fmt: str = "csv") -> str:
    return to_csv(result) if fmt == "csv" else to_json(result)


def read_csv(path_or_text) -> SweepResult:
    """Parse a file written by :func:`to_csv`; cells stay strings, metadata is decoded."""
    text = Path(path_or_text).read_text(encoding="utf-8") if isinstance(path_or_text, Path) else str(path_or_text)
    lines = text.splitlines()
    meta = {}
    if lines and lines[0].startswith("# metadata: "):
        meta = json.loads(lines[0][len("# metadata: "):])
        lines = lines[1:]
    reader = csv.reader(lines)
    columns = next(reader)
    return SweepResult(columns, [list(r) for r in reader], meta)


def write(result: SweepResult, path: Path | None, fmt: str = "csv") -> str:
    text = render(result, fmt)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
