"""HTTP service surface: same documents, same tables, mapped errors."""

import pytest
from fastapi.testclient import TestClient

from omitcharge.commands import run_command
from omitcharge.config import load_preset, parse_config
from omitcharge.service import ResultTableModel, app
from omitcharge.tables import render_csv

client = TestClient(app)


def test_health():
    reply = client.get("/health")
    assert reply.status_code == 200
    body = reply.json()
    assert body["status"] == "ok"
    assert body["version"]


def test_presets_listing_and_fetch():
    names = client.get("/v1/presets").json()["presets"]
    assert "fig2" in names
    doc = client.get("/v1/presets/fig2").json()
    assert doc["params"]["omega_m_hz"] == 947000.0
    missing = client.get("/v1/presets/nope")
    assert missing.status_code == 422


def test_metrics_endpoint_values():
    doc = load_preset("fig2")
    doc["params"]["bias_voltage_v"] = 0.1
    reply = client.post("/v1/run/metrics", json=doc)
    assert reply.status_code == 200
    body = reply.json()
    assert body["columns"] == ["min_force[N]", "surface_density_sensitivity[cm-2]"]
    force, density = body["rows"][0]
    assert force == pytest.approx(0.88e-9, rel=0.01)
    assert density == pytest.approx(2.2e6, rel=0.05)


def test_remote_table_matches_local_bytes():
    doc = load_preset("fig2")
    doc["sweep"] = {"n_max": 3}
    reply = client.post("/v1/run/sweep-n", json=doc)
    assert reply.status_code == 200
    remote = ResultTableModel.model_validate(reply.json()).to_table()
    local = run_command("sweep-n", parse_config(doc))
    assert render_csv(remote) == render_csv(local)


def test_unknown_key_is_a_422_naming_the_key():
    doc = load_preset("fig2")
    doc["params"]["omega_m_rad"] = 1.0
    reply = client.post("/v1/run/derive", json=doc)
    assert reply.status_code == 422
    detail = reply.json()["detail"]
    assert any("omega_m_rad" in str(item["loc"]) for item in detail)


def test_domain_error_is_a_400_with_machine_record():
    doc = load_preset("fig2")
    doc["invert"] = {"width_rad_s": 1.0, "n_min": 0, "n_max": 10}
    reply = client.post("/v1/run/invert", json=doc)
    assert reply.status_code == 400
    body = reply.json()
    assert body["error_type"] == "domain"
    lo, hi = body["data"]["attainable"]
    assert 0 < lo < hi


def test_unknown_command_rejected():
    reply = client.post("/v1/run/render", json=load_preset("fig2"))
    assert reply.status_code == 422


def test_config_block_error_mapped():
    doc = load_preset("fig2")
    doc["params"]["delta_c_policy"] = "explicit"  # missing delta_c_hz
    reply = client.post("/v1/run/derive", json=doc)
    assert reply.status_code == 422
