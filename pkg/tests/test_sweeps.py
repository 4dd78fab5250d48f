import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qpointer.errors import ConfigError
from qpointer.presets import PRESET_COMMAND, PRESETS, get_preset, linspace, parse_angle, parse_observables, parse_value
from qpointer.sweeps import (
    STATUS_OK,
    STATUS_OUT,
    SweepSpec,
    format_cell,
    read_csv,
    resolve,
    run_g2_sweep,
    run_mandel_sweep,
    run_photon_dist,
    run_quadrature_sweep,
    run_weak_value_sweep,
    to_csv,
    to_json,
)

PI = math.pi


# -------------------------------------------------------------------- parsing


@pytest.mark.parametrize(
    "text, value",
    [("pi", PI), ("7pi/8", 7 * PI / 8), ("-pi/4", -PI / 4), ("2*pi/3", 2 * PI / 3), ("0.25", 0.25), (" PI/2 ", PI / 2)],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, rel=1e-15)


def test_parse_angle_rejects_garbage():
    with pytest.raises(ConfigError):
        parse_angle("pie")


def test_parse_observables():
    assert [o.value for o in parse_observables("both")] == ["X1", "X2"]
    assert [o.value for o in parse_observables("x2")] == ["X2"]
    with pytest.raises(ConfigError):
        parse_observables("X3")


def test_parse_value_names_the_bad_key():
    with pytest.raises(ConfigError, match="gamma"):
        parse_value("gamma", "1")
    with pytest.raises(ConfigError, match="'g'"):
        parse_value("g", "abc")


@given(st.floats(-5, 5), st.floats(5.001, 20), st.integers(2, 200))
def test_linspace_endpoints_and_order(a, b, n):
    v = linspace(a, b, n)
    assert len(v) == n and v[0] == a and v[-1] == b
    assert all(y > x for x, y in zip(v, v[1:]))


# ------------------------------------------------------------------ SweepSpec


def test_spec_rejects_unknown_override():
    with pytest.raises(ConfigError, match="zeta"):
        SweepSpec(overrides={"zeta": "1"})


@pytest.mark.parametrize("values", [(), (0.1, 0.1), (0.3, 0.2), (0.1, float("nan"))])
def test_spec_rejects_bad_axis_values(values):
    with pytest.raises(ConfigError):
        SweepSpec(axis_values=values)


def test_spec_rejects_bad_axis_series_and_format():
    with pytest.raises(ConfigError):
        SweepSpec(sweep_axis="alpha_modulus")
    with pytest.raises(ConfigError):
        SweepSpec(series=("beta_modulus", (1.0,)))
    with pytest.raises(ConfigError):
        SweepSpec(series=("q", ()))
    with pytest.raises(ConfigError):
        SweepSpec(format="xml")


def test_unknown_preset():
    with pytest.raises(ConfigError):
        get_preset("fig9")


def test_resolve_precedence():
    r = resolve(SweepSpec(preset="fig3a", overrides={"q": "0.5", "g": "0.1"}), "mandel")
    # overriding the series key collapses the series to one curve
    assert r.series_key is None and r.params["q"] == 0.5 and r.params["g"] == 0.1
    r = resolve(SweepSpec(preset="fig3a", series=("g", (0.1, 0.2))), "mandel")
    assert r.series_key == "g" and r.series_values == (0.1, 0.2)


def test_resolve_rejects_out_of_range_parameters():
    with pytest.raises(ConfigError):
        resolve(SweepSpec(overrides={"q": "1.2"}), "mandel")
    with pytest.raises(ConfigError):
        resolve(SweepSpec(overrides={"g": "-0.1"}), "mandel")
    with pytest.raises(ConfigError):
        resolve(SweepSpec(sweep_axis="n"), "mandel")
    with pytest.raises(ConfigError):
        resolve(SweepSpec(sweep_axis="q"), "photon-dist")
    with pytest.raises(ConfigError):
        resolve(SweepSpec(axis_values=(0.5, 1.5)), "photon-dist")
    with pytest.raises(ConfigError, match="explicit values"):
        resolve(SweepSpec(sweep_axis="g"), "mandel")


def test_every_preset_maps_to_a_command():
    assert set(PRESETS) == set(PRESET_COMMAND)
    assert {"fig5_caption", "fig5_text"} <= set(PRESETS)


# ---------------------------------------------------------------- weak value


def test_fig1_columns():
    res = run_weak_value_sweep(SweepSpec(preset="fig1", axis_values=(0.5, 1.0)))
    for c in ("weak_value_re_x2", "weak_value_im_x2", "weak_value_abs_x2", "eigenvalue"):
        assert c in res.columns
    assert all(s == STATUS_OK for s in res.column("status_x2"))
    assert max(res.column("oracle_delta_x2")) <= 1e-8


def test_single_point_q1_x1_equals_x2():
    res = run_weak_value_sweep(SweepSpec(preset="fig1", overrides={"observable": "both"}, axis_values=(1.0,)))
    row = res.records()[0]
    assert row["weak_value_re_x2"] == pytest.approx(row["weak_value_re_x1"], abs=1e-12)
    assert row["weak_value_im_x2"] == pytest.approx(row["weak_value_im_x1"], abs=1e-12)


def test_weak_value_out_of_domain_rows_are_flagged():
    # |alpha beta*| = 2 sits on the radius at q = 0.5
    res = run_weak_value_sweep(
        SweepSpec(overrides={"alpha_modulus": "2", "beta_modulus": "1", "observable": "X2"}, axis_values=(0.5, 0.9))
    )
    rec = res.records()
    assert rec[0]["status_x2"] == STATUS_OUT and rec[0]["weak_value_re_x2"] is None
    assert rec[1]["status_x2"] == STATUS_OK
    assert len(res.metadata["clipped"]) == 1


# -------------------------------------------------------------- photon numbers


def test_fig2_flags_and_totals():
    res = run_photon_dist(SweepSpec(preset="fig2"))
    flagged = {r["q"] for r in res.records() if r["status"] == STATUS_OUT}
    assert flagged == {0.4, 0.5}
    for r in res.records():
        if r["status"] == STATUS_OUT:
            assert r["probability"] is None
    for t in res.metadata["total_probability"]:
        if t["total"] is not None:
            assert abs(t["total"] - 1) <= 1e-10


def test_photon_dist_poisson_column():
    res = run_photon_dist(SweepSpec(overrides={"g": "0", "q": "1", "z_modulus": "1.2"}))
    lam = 1.44
    for r in res.records():
        n = r["n"]
        assert r["probability"] == pytest.approx(math.exp(-lam) * lam**n / math.factorial(n), abs=1e-12)


def test_photon_dist_extends_past_adaptive_cutoff():
    res = run_photon_dist(SweepSpec(overrides={"z_modulus": "0.1"}, axis_values=tuple(range(40))))
    assert len(res.rows) == 40 and all(p >= 0 for p in res.column("probability"))


def test_photon_dist_rejects_two_observables():
    with pytest.raises(ConfigError):
        run_photon_dist(SweepSpec(overrides={"observable": "both"}))


# ---------------------------------------------------------------- statistics


def test_fig3a_zero_coupling_q1_row():
    res = run_mandel_sweep(SweepSpec(preset="fig3a", overrides={"g": "0"}, series=("q", (1.0,))))
    rec = res.records()
    # vacuum pointer at z = 0: Q is undefined, the row says so
    assert rec[0]["status_x1"] == "undefined" and rec[0]["mandel_q_x1"] is None
    assert max(abs(r["mandel_q_x1"]) for r in rec[1:]) <= 1e-10


def test_fig4a_zero_coupling_rows():
    res = run_g2_sweep(SweepSpec(preset="fig4a", overrides={"g": "0"}, series=("q", (1.0,)), axis_values=(0.5, 1.0, 1.5)))
    assert max(abs(v - 1) for v in res.column("g2_zero_x1")) <= 1e-10


def test_zero_pointer_amplitude_is_undefined_not_fabricated():
    res = run_mandel_sweep(SweepSpec(preset="fig3a", series=("q", (0.5,)), axis_values=(0.0, 0.5)))
    rec = res.records()
    # rows that cannot be evaluated carry a flag and no numbers
    assert rec[1]["status_x1"] == STATUS_OK
    for r in rec:
        if r["status_x1"] != STATUS_OK:
            assert r["mandel_q_x1"] is None


def test_in_domain_rows_are_finite():
    res = run_quadrature_sweep(SweepSpec(preset="fig5_caption"))
    for r in res.records():
        for o in ("x1", "x2"):
            if r[f"status_{o}"] == STATUS_OK:
                assert all(
                    isinstance(r[f"{c}_{o}"], bool) or math.isfinite(r[f"{c}_{o}"])
                    for c in ("var_x", "var_p", "uncertainty_product", "squeezed_p")
                )
                assert r[f"oracle_delta_{o}"] <= 1e-8


def test_metadata_records_resolved_parameters():
    res = run_quadrature_sweep(SweepSpec(preset="fig5_text", axis_values=(0.5,)))
    meta = res.metadata
    assert meta["parameters"]["g"] == 0.9 and meta["parameters"]["q"] == 0.8
    assert meta["parameters"]["observables"] == ["X1", "X2"]
    assert meta["axis_values"] == [0.5] and meta["preset"] == "fig5_text"
    assert set(meta["tolerances"]) >= {"oracle_relative", "domain_margin"}


# -------------------------------------------------------------- serialization


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(True) == "true"
    assert format_cell(3) == "3"
    assert format_cell(0.1) == "0.10000000000000001"


def test_csv_roundtrip_is_exact():
    res = run_mandel_sweep(SweepSpec(preset="fig3c", axis_values=(0.3, 0.7)))
    text = to_csv(res)
    assert text.startswith("# metadata: ") and "\r" not in text
    back = read_csv(text)
    assert back.columns == res.columns
    assert back.metadata["preset"] == "fig3c"
    for r0, r1 in zip(res.rows, back.rows):
        for a, b in zip(r0, r1):
            if isinstance(a, float):
                assert float(b) == a
            else:
                assert format_cell(a) == b


def test_json_has_no_nan():
    res = run_weak_value_sweep(SweepSpec(preset="fig1", axis_values=(0.3,)))
    doc = json.loads(to_json(res))
    assert doc["columns"] == res.columns and len(doc["rows"]) == 1


def test_rows_follow_axis_order():
    res = run_g2_sweep(SweepSpec(preset="fig4c", axis_values=(0.1, 0.2, 0.3)))
    for g in res.metadata["series"]["values"]:
        xs = [r["z_modulus"] for r in res.records() if r["g"] == g]
        assert xs == sorted(xs)
    assert np.all(np.diff(res.metadata["axis_values"]) > 0)
