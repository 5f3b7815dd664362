import math

import pytest
from fastapi.testclient import TestClient

from polybergman.api import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "healthy" and body["config_valid"]


def test_root_lists_endpoints(client):
    endpoints = client.get("/").json()["endpoints"]
    assert {"/eval", "/gram", "/kernel", "/project", "/ledger"} <= set(endpoints)


def test_eval(client):
    response = client.post("/eval", json={"gamma": 0.0, "m": 1, "n": 1, "points": [[0.5, 0.0]], "reps": ["jacobi", "sum"]})
    assert response.status_code == 200
    report = response.json()
    assert report["command"] == "eval" and report["schema_version"] == 1
    assert report["values"][0]["sum"][0] == pytest.approx(-0.5)
    assert report["max_deviation"] < 1e-12


@pytest.mark.parametrize("payload", [
    {"gamma": -2.0, "m": 1, "n": 1},
    {"m": 1, "n": 1, "points": [[1.5, 0.0]]},
    {"reps": ["legendre"]},
])
def test_eval_rejects_bad_requests(client, payload):
    response = client.post("/eval", json=payload)
    assert response.status_code == 400
    assert response.json()["detail"]


def test_gram(client):
    report = client.post("/gram", json={"gamma": 2.0, "max_m": 3, "max_n": 3}).json()
    assert report["passed"]
    assert report["diagonal"][0]["value"] == pytest.approx(math.pi / 3, rel=1e-12)


def test_kernel(client):
    report = client.post("/kernel", json={"gamma": 0.0, "n": 2, "grid": [2, 3]}).json()
    assert report["passed"] and report["exit_code"] == 0
    assert report["origin"]["expected"] == pytest.approx(5 / math.pi)


def test_project(client):
    response = client.post("/project", json={"gamma": 0.5, "input": "z^2 + 3*zbar^2", "n": 0})
    assert response.status_code == 200
    report = response.json()
    assert report["passed"]
    assert [m["member"] for m in report["membership"]] == [False, False, True]


def test_project_bad_expression(client):
    response = client.post("/project", json={"input": "log(z)"})
    assert response.status_code == 400


def test_project_requires_input(client):
    assert client.post("/project", json={"gamma": 0.0}).status_code == 422
