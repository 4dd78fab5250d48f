"""Randomized closed-form versus Fock-oracle agreement suite."""
from __future__ import annotations

import cmath
import json
import math

import numpy as np

from . import __version__, oracle
from .config import MeasurementConfig, Observable, make_config
from .errors import ConfigError, ZeroMeanPhoton
from .photonstats import closed_form_values, oracle_deltas, rel_delta
from .qspecial import convergence_radius
from .weakmeas import eigenvalue_scale, fidelity, normalization_check, pointer_state, weak_value

# |x|^2 <= SAMPLE_FRACTION * radius for every label
SAMPLE_FRACTION = 0.9
MAX_SQ_MODULUS = 4.0
Q_RANGE = (0.1, 1.0)
UNDEFORMED_FRACTION = 0.1
INVARIANT_ATOL = 1e-10
MAX_LISTED_FAILURES = 50


def sample_configs(seed: int, count: int) -> list[MeasurementConfig]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        q = 1.0 if rng.random() < UNDEFORMED_FRACTION else float(rng.uniform(*Q_RANGE))
        g = float(rng.uniform(0.0, 1.0))
        cap = min(SAMPLE_FRACTION * convergence_radius(q), MAX_SQ_MODULUS)
        mods = np.sqrt(rng.uniform(0.0, cap, size=3))
        phases = rng.uniform(0.0, 2 * math.pi, size=3)
        obs = Observable.X1 if rng.random() < 0.5 else Observable.X2
        out.append(
            make_config(q, g, mods[0], phases[0], mods[1], phases[1], mods[2], phases[2], obs)
        )
    return out


def describe(cfg: MeasurementConfig) -> dict:
    return {
        "q": cfg.q.q,
        "g": cfg.g,
        "z": [cfg.z.modulus, cfg.z.phase],
        "alpha": [cfg.alpha.modulus, cfg.alpha.phase],
        "beta": [cfg.beta.modulus, cfg.beta.phase],
        "observable": cfg.observable.value,
    }


def check_config(cfg: MeasurementConfig) -> tuple[dict, dict]:
    """Return ``(deltas, invariant_violations)`` for one configuration.

    Deltas are compared against the caller's tolerance; invariants carry their
    own fixed thresholds and are reported as the amount by which they fail.
    """
    deltas: dict[str, float] = {}
    bad: dict[str, float] = {}

    fid = fidelity(cfg.alpha, cfg.beta, cfg.q)
    deltas["fidelity"] = rel_delta(fid, oracle.fidelity(cfg.alpha, cfg.beta, cfg.q))
    if abs(fid) > 1 + INVARIANT_ATOL:
        bad["fidelity_modulus"] = abs(fid) - 1
    wv = weak_value(cfg).value
    deltas["weak_value"] = rel_delta(wv, oracle.weak_value(cfg.alpha, cfg.beta, cfg.q, cfg.observable))
    deltas["eigenvalue"] = rel_delta(eigenvalue_scale(cfg.z, cfg.q), oracle.eigenvalue_scale(cfg.z, cfg.q))
    deltas["normalization"] = normalization_check(cfg, wv).rel_delta

    state = pointer_state(cfg, wv)
    brute = oracle.statistics(state, cfg.q)
    if abs(state.norm_squared() - 1) > INVARIANT_ATOL:
        bad["pointer_norm"] = abs(state.norm_squared() - 1)
    try:
        closed = closed_form_values(cfg)
    except ZeroMeanPhoton:
        return deltas, bad
    deltas.update(oracle_deltas(cfg, closed, brute))

    total = math.fsum(closed["probabilities"])
    if abs(total - 1) > INVARIANT_ATOL:
        bad["probability_sum"] = abs(total - 1)
    m = closed["moments"]
    gap = m.uncertainty_bound - m.uncertainty_product
    if gap > INVARIANT_ATOL:
        bad["uncertainty"] = gap
    if abs(m.commutator_expect.real) > INVARIANT_ATOL:
        bad["commutator_real"] = abs(m.commutator_expect.real)
    if closed["mandel_q"] < -1 - INVARIANT_ATOL:
        bad["mandel_lower_bound"] = -1 - closed["mandel_q"]
    return deltas, bad


def run_verify(tolerance: float = 1e-8, seed: int = 42, count: int = 200) -> dict:
    if not tolerance > 0 or not math.isfinite(tolerance):
        raise ConfigError(f"tolerance must be positive, got {tolerance!r}")
    if count < 1:
        raise ConfigError(f"count must be >= 1, got {count!r}")
    max_deltas: dict[str, float] = {}
    failures = []
    checks = 0
    for i, cfg in enumerate(sample_configs(seed, count)):
        deltas, bad = check_config(cfg)
        checks += len(deltas)
        for name, d in deltas.items():
            if not d <= max_deltas.get(name, -1.0):
                max_deltas[name] = d
            if not d <= tolerance:
                failures.append({"index": i, "check": name, "value": d, "config": describe(cfg)})
        for name, amount in bad.items():
            failures.append({"index": i, "check": name, "value": amount, "config": describe(cfg)})
    return {
        "tool": "qpointer",
        "version": __version__,
        "seed": seed,
        "count": count,
        "tolerance": tolerance,
        "invariant_atol": INVARIANT_ATOL,
        "checks": checks,
        "max_deltas": max_deltas,
        "failure_count": len(failures),
        "failures": failures[:MAX_LISTED_FAILURES],
        "passed": not failures,
    }


def report_json(report: dict) -> str:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None
        if isinstance(v, complex):
            return [v.real, v.imag]
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, list):
            return [clean(x) for x in v]
        return v

    return json.dumps(clean(report), sort_keys=True, indent=1) + "\n"
