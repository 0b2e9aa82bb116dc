"""Strict config parsing, overrides, presets, and table rendering."""

import json

import pytest

from omitcharge.config import (
    apply_overrides,
    list_presets,
    load_preset,
    parse_config,
)
from omitcharge.commands import run_command
from omitcharge.errors import ConfigError
from omitcharge.tables import (
    ResultTable,
    format_cell,
    make_provenance,
    parse_provenance_csv,
    render_csv,
    render_json,
    write_atomic,
)

from conftest import TWO_PI


def test_fig2_preset_matches_benchmark_parameters():
    cfg = parse_config(load_preset("fig2"))
    p = cfg.params.to_system_params()
    assert p.lambda_c == 1.064e-6
    assert p.cavity_length == 0.025
    assert p.m_eff == 1.45e-10
    assert p.omega_m == TWO_PI * 947e3
    assert p.gamma_m == TWO_PI * 141.0
    assert p.kappa == TWO_PI * 215e3
    assert p.r0 == 6.7e-5
    assert p.capacitance == 2.75e-8
    assert p.bias_voltage == 1.0
    assert p.pump_power == 1e-3
    assert p.n_charge == 0
    assert p.delta_c_policy == "resonant_at_zero_charge"


def test_presets_available():
    assert "fig2" in list_presets()
    assert "light_mr" in list_presets()
    with pytest.raises(ConfigError, match="unknown preset"):
        load_preset("nope")


def test_light_mr_preset_parses_with_explicit_detuning():
    cfg = parse_config(load_preset("light_mr"))
    p = cfg.params.to_system_params()
    assert p.m_eff == 1.45e-12
    assert p.bias_voltage == 0.1
    assert p.delta_c_policy == "explicit"
    assert p.delta_c_explicit == 0.0


def test_unknown_key_is_named():
    doc = load_preset("fig2")
    doc["params"]["omega_m_rad"] = 1.0
    with pytest.raises(ConfigError, match="unknown key 'params.omega_m_rad'"):
        parse_config(doc)


def test_unknown_top_level_block_rejected():
    doc = load_preset("fig2")
    doc["plotting"] = {}
    with pytest.raises(ConfigError, match="unknown key 'plotting'"):
        parse_config(doc)


def test_empty_document_lists_required_fields():
    with pytest.raises(ConfigError) as excinfo:
        parse_config({})
    message = str(excinfo.value)
    for key in ("lambda_c_m", "omega_m_hz", "kappa_hz", "pump_power_w"):
        assert key in message


def test_missing_single_key_named():
    doc = load_preset("fig2")
    del doc["params"]["gamma_m_hz"]
    with pytest.raises(ConfigError, match="missing required key 'params.gamma_m_hz'"):
        parse_config(doc)


def test_non_numeric_value_named():
    doc = load_preset("fig2")
    doc["params"]["omega_m_hz"] = "fast"
    with pytest.raises(ConfigError, match="params.omega_m_hz"):
        parse_config(doc)
    doc["params"]["omega_m_hz"] = "947000.0"  # strings are not numbers
    with pytest.raises(ConfigError, match="params.omega_m_hz"):
        parse_config(doc)


def test_policy_pairing_enforced():
    doc = load_preset("fig2")
    doc["params"]["delta_c_policy"] = "explicit"
    with pytest.raises(ConfigError, match="delta_c_hz"):
        parse_config(doc)
    doc = load_preset("fig2")
    doc["params"]["delta_c_hz"] = 1.0
    with pytest.raises(ConfigError, match="delta_c_hz"):
        parse_config(doc)


def test_config_not_json_object():
    with pytest.raises(ConfigError, match="JSON object"):
        parse_config("[1, 2]")
    with pytest.raises(ConfigError, match="not valid JSON"):
        parse_config("{nope")


def test_spectrum_bounds_validation():
    doc = load_preset("fig2")
    doc["spectrum"] = {"x_min_rad_s": 1.0}
    with pytest.raises(ConfigError, match="x_min_rad_s and x_max_rad_s"):
        parse_config(doc)
    doc["spectrum"] = {"x_min_rad_s": 2.0, "x_max_rad_s": 1.0}
    with pytest.raises(ConfigError, match="below"):
        parse_config(doc)


def test_apply_overrides():
    doc = load_preset("fig2")
    out = apply_overrides(
        doc,
        ["params.bias_voltage_v=0.1", "sweep.n_max=12", "output.format=json"],
    )
    assert out["params"]["bias_voltage_v"] == 0.1
    assert out["sweep"] == {"n_max": 12}
    assert out["output"] == {"format": "json"}
    assert doc.get("sweep") is None  # original untouched
    with pytest.raises(ConfigError, match="key.path=value"):
        apply_overrides(doc, ["params.bias_voltage_v"])


def test_format_cell():
    assert format_cell(True) == "true"
    assert format_cell(False) == "false"
    assert format_cell(5) == "5"
    assert format_cell(0.1) == "0.1"
    assert format_cell(1e22) == "1e+22"
    assert format_cell("monotone_increasing") == "monotone_increasing"
    with pytest.raises(ValueError):
        format_cell("a,b")
    with pytest.raises(TypeError):
        format_cell(object())


def test_render_csv_layout():
    table = ResultTable(
        columns=("a", "b[m]"),
        rows=((1, 2.5), (3, -0.125)),
        provenance=make_provenance("demo", {"params": {}}),
    )
    text = render_csv(table)
    lines = text.split("\n")
    assert lines[0] == "# tool: omitcharge"
    assert lines[2] == "# command: demo"
    assert lines[5] == "a,b[m]"
    assert lines[6] == "1,2.5"
    assert lines[7] == "3,-0.125"
    assert text.endswith("\n")
    assert "\r" not in text


def test_render_json_roundtrip():
    table = ResultTable(
        columns=("a",),
        rows=((0.1,), (2,)),
        provenance=make_provenance("demo", {"params": {}}),
    )
    doc = json.loads(render_json(table))
    assert doc["columns"] == ["a"]
    assert doc["rows"] == [[0.1], [2]]
    assert doc["provenance"]["tool"] == "omitcharge"


def test_provenance_closure_reproduces_output():
    cfg = parse_config(apply_overrides(load_preset("fig2"), ["sweep.n_max=3"]))
    first = render_csv(run_command("sweep-n", cfg))
    prov = parse_provenance_csv(first)
    again = render_csv(run_command(prov["command"], parse_config(prov["config"])))
    assert again == first


def test_write_atomic(tmp_path):
    target = tmp_path / "sub" / "table.csv"
    write_atomic(str(target), "x\n1\n")
    assert target.read_text() == "x\n1\n"
    leftovers = [p for p in target.parent.iterdir() if p.name != "table.csv"]
    assert leftovers == []


def test_invert_command_requires_block():
    cfg = parse_config(load_preset("fig2"))
    with pytest.raises(ConfigError, match="invert"):
        run_command("invert", cfg)


def test_unknown_command_rejected():
    cfg = parse_config(load_preset("fig2"))
    with pytest.raises(ConfigError, match="unknown command"):
        run_command("render", cfg)
