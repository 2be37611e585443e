import numpy as np
import pytest
from fastapi.testclient import TestClient

from waveheatnet import transfer as tf
from waveheatnet import verify as vf
from waveheatnet.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_transfer_scan_matches_direct_evaluation(client):
    body = {"betas": [1.0, 2.0, 3.0], "num_points": 6,
            "s_min": 2.0, "s_max": 50.0}
    resp = client.post("/transfer/scan", json=body)
    assert resp.status_code == 200
    data = resp.json()
    assert len(data["rows"]) == 6
    row = data["rows"][0]
    s = row["s"]
    assert s == pytest.approx(2.0)
    assert row["eta"] == pytest.approx(tf.eta_lower_bound(s, (1, 2, 3)))
    assert row["mu"] == pytest.approx(tf.mu(s, (1, 2, 3)))
    p2 = tf.network_transfer_P2(1j * s, (1, 2, 3)).entries
    assert np.allclose(row["p2_real"], p2.real)
    assert np.allclose(row["p2_imag"], p2.imag)
    assert data["eta_fit"] is not None


def test_transfer_scan_few_points_has_no_fit(client):
    resp = client.post("/transfer/scan", json={"num_points": 2})
    assert resp.status_code == 200
    assert resp.json()["eta_fit"] is None


def test_resolvent_scan_variants(client):
    body = {"n": 16, "num_points": 6}
    full = client.post("/resolvent/scan", json=body,
                       params={"variant": "full"}).json()
    assert full["bound"] is not None and len(full["bound"]) == 6
    assert full["kernel"]["invertible"]
    wave = client.post("/resolvent/scan", json=body,
                       params={"variant": "wave-damped"}).json()
    assert wave["bound"] is None
    assert all(np.isfinite(r["norm"]) for r in wave["rows"])


def test_simulate_both_kinds(client):
    body = {"n": 16, "T": 2.0, "dt": 0.01, "t_window": [0.5, 2.0]}
    resp = client.post("/simulate", json=body, params={"data": "both"})
    assert resp.status_code == 200
    runs = resp.json()["runs"]
    assert set(runs) == {"classical", "mild"}
    for run in runs.values():
        es = run["trace"]["energies"]
        assert es[0] == pytest.approx(1.0)
        assert run["final_energy_ratio"] < 1.0


def test_validation_errors(client):
    assert client.post("/transfer/scan",
                       json={"betas": [1, -1, 1]}).status_code == 422
    assert client.post("/transfer/scan",
                       json={"s_min": 5.0, "s_max": 1.0}).status_code == 422
    assert client.post("/transfer/scan", json={"n": 2}).status_code == 422
    assert client.post("/simulate", json={"dt": 2.0, "T": 1.0}).status_code == 422
    assert client.post("/resolvent/scan", json={},
                       params={"variant": "plate"}).status_code == 422


def test_verify_endpoint_schema(client, monkeypatch):
    canned = [vf.CriterionResult("A0", "canned", True, {"x": 1.0})]
    monkeypatch.setattr(vf, "run_all", lambda scale: canned)
    resp = client.post("/verify", json={"quick": True})
    assert resp.status_code == 200
    data = resp.json()
    assert data["all_passed"] is True
    assert data["results"][0]["name"] == "A0"
    assert data["results"][0]["measured"] == {"x": 1.0}
