"""Reward service tests: HTTP endpoints and the NDJSON stdio loop."""

import json
import subprocess
import sys

import pytest
from fastapi.testclient import TestClient

from dscore.config import build_group_config, build_score_config
from dscore.service import create_app

from conftest import fixture_src


@pytest.fixture(scope="module")
def client():
    app = create_app(build_score_config({}), build_group_config({}))
    return TestClient(app)


def test_health(client):
    data = client.get("/health").json()
    assert data["status"] == "ok"
    assert data["compiler_found"] in (True, False)
    assert "solver" in data


def test_score_endpoint(client):
    resp = client.post("/score", json={
        "reference": fixture_src("fig9_original"),
        "candidate": fixture_src("fig9_baseline")})
    assert resp.status_code == 200
    data = resp.json()
    assert data["kind"] == "sem-ret-fail" and data["value"] == -2


def test_score_group_endpoint(client):
    resp = client.post("/score_group", json={
        "reference": fixture_src("fig10_original"),
        "candidates": [fixture_src("fig10_baseline"),
                       fixture_src("fig10_finetuned"),
                       fixture_src("fig10_original")]})
    assert resp.status_code == 200
    data = resp.json()
    assert len(data["rewards"]) == 3
    assert data["rewards"][1] > data["rewards"][0] > data["rewards"][2] == 0
    assert data["unscorable_mask"] == [False, False, False]


def test_malformed_request_is_422(client):
    assert client.post("/score", json={"reference": 5}).status_code == 422
    assert client.post("/score", json={}).status_code == 422
    assert client.post("/score_group",
                       json={"reference": "int f(void){return 0;}",
                             "candidates": "nope"}).status_code == 422


def test_unscorable_still_200(client):
    resp = client.post("/score", json={
        "reference": "int f(int a) { return a; }",
        "candidate": "float f(float x) { return x; }"})
    assert resp.status_code == 200
    assert resp.json()["kind"] == "unscorable"


def _stdio_roundtrip(requests):
    text = "".join(json.dumps(r) + "\n" for r in requests)
    proc = subprocess.run([sys.executable, "-m", "dscore.cli", "serve",
                           "--stdio"],
                          input=text, capture_output=True, text=True,
                          timeout=180)
    assert proc.returncode == 0, proc.stderr
    return [json.loads(line) for line in proc.stdout.splitlines()]


def test_stdio_loop():
    ref = fixture_src("fig9_original")
    replies = _stdio_roundtrip([
        {"op": "health", "request_id": "a"},
        {"op": "score", "request_id": "b", "reference": ref,
         "candidate": fixture_src("fig9_finetuned")},
        {"op": "score_group", "request_id": "c", "reference": ref,
         "candidates": [fixture_src("fig9_baseline"), ref]},
        {"op": "no-such-op", "request_id": "d"},
        {"op": "exit"},
    ])
    by_id = {r.get("request_id"): r for r in replies}
    assert by_id["a"]["status"] == "ok"
    assert by_id["b"]["kind"] == "pass" and 0 < by_id["b"]["value"] < 1
    assert by_id["c"]["rewards"] == [-2, 0]
    assert "error" in by_id["d"]


def test_stdio_malformed_line_reports_error():
    replies = _stdio_roundtrip([{"op": "health"}])
    # also feed a garbage line directly
    proc = subprocess.run([sys.executable, "-m", "dscore.cli", "serve",
                           "--stdio"],
                          input="this is not json\n",
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    reply = json.loads(proc.stdout.splitlines()[0])
    assert "error" in reply
    assert replies and replies[0]["status"] == "ok"
