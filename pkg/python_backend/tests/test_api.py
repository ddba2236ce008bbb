import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"success": True, "data": {"status": "ok"}}


def test_config_status(client):
    body = client.get("/api/config/status").json()
    assert body["success"] is True
    assert body["data"]["system"]["threads"] >= 1


def test_list_data(client):
    body = client.get("/api/data").json()
    names = [item["name"] for item in body["data"]]
    assert names == ["compact", "gaussian-odd", "gaussian-skew"]
    odd = body["data"][1]
    assert odd["t0"] == pytest.approx(-1.0)
    assert odd["beta"]["3"] == pytest.approx(1.0)


def test_profiles(client):
    request = {"fields": ["u0", "u10"], "grid": {"t_values": [-0.5], "x_values": [0.0, 0.5]}}
    response = client.post("/api/profiles", json=request)
    assert response.status_code == 200
    data = response.json()["data"]
    assert data["columns"] == ["t", "x", "field", "value"]
    assert [row[2] for row in data["rows"]] == ["u0", "u0", "u10", "u10"]
    assert data["rows"][0][3] == pytest.approx(0.0, abs=1e-14)


def test_profiles_numerical_error(client):
    request = {"fields": ["u1"], "grid": {"t_values": [0.0], "x_values": [0.1]}}
    response = client.post("/api/profiles", json=request)
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "INVALID_INPUT"


def test_profiles_unknown_datum(client):
    request = {"datum": "sawtooth", "fields": ["u0"], "grid": {"t_values": [-0.5]}}
    response = client.post("/api/profiles", json=request)
    assert response.status_code == 400
    assert response.json()["detail"]["code"] == "CONFIG_ERROR"


def test_profiles_invalid_body(client):
    response = client.post("/api/profiles", json={"fields": []})
    assert response.status_code == 422


def test_sweep(client):
    request = {
        "nus": [1e-2, 5e-3],
        "targets": ["u0"],
        "norms": ["linf", "l1"],
        "grid": {"x_halfwidth": 1.0, "x_points": 5, "t_slices": 2, "cluster": False},
    }
    response = client.post("/api/sweeps", json=request)
    assert response.status_code == 200
    data = response.json()["data"]
    assert data["columns"] == ["nu", "alpha", "u0_linf", "u0_l1"]
    assert len(data["rows"]) == 2
    assert data["datum"]["name"] == "gaussian-odd"
    assert data["report"]["rates"] == {}
