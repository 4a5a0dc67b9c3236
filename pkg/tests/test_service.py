"""Service endpoint tests over the in-process ASGI transport."""

from __future__ import annotations

import base64

import pytest
from fastapi.testclient import TestClient

from xtno.serial import load_state
from xtno.service import create_app

PATH3 = "3 2 directed\n1 2\n2 3\n"
UPATH4 = "4 3 undirected\n1 2\n2 3\n3 4\n"


@pytest.fixture
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


def test_health(client):
    res = client.get("/health").json()
    assert res["status"] == "ok"


def test_kpath_roundtrip(client):
    res = client.post(
        "/kpath/preprocess",
        json=dict(graph=PATH3, k=3, mode="det", seed=1, include_state=True),
    ).json()
    assert res["answer"] is True and res["oracle_id"]
    blob = base64.b64decode(res["state_b64"])
    assert load_state(blob).static_answer

    q = client.post(
        "/kpath/query",
        json=dict(oracle_id=res["oracle_id"], updates="- 2 3\n", brute_force=True),
    ).json()
    assert q["answer"] is False and q["match"] is True

    q2 = client.post(
        "/kpath/query", json=dict(state_b64=res["state_b64"], updates="")
    ).json()
    assert q2["answer"] is True


def test_kpath_updated_pairs(client):
    res = client.post(
        "/kpath/preprocess", json=dict(graph="3 1 directed\n1 2\n", k=3, mode="det")
    ).json()
    pairs = client.post(
        "/kpath/updated-pairs",
        json=dict(oracle_id=res["oracle_id"], updates="+ 2 3\n", vertices=[1]),
    ).json()["pairs"]
    table = {(p["u"], p["v"]): p["path_lengths"] for p in pairs}
    assert 3 in table[(1, 3)]


def test_counting_endpoints(client):
    k4 = "4 12 directed\n" + "\n".join(
        f"{u} {v}" for u in range(1, 5) for v in range(1, 5) if u != v
    ) + "\n"
    res = client.post(
        "/kpath/count/preprocess",
        json=dict(graph=k4, k=3, epsilon=0.5, seed=4, vertex_failures=True),
    ).json()
    assert 12 <= res["estimate"] <= 36
    q = client.post(
        "/kpath/count/query", json=dict(oracle_id=res["oracle_id"], updates="x 1\n")
    ).json()
    assert 2 <= q["estimate"] <= 10  # removing one K4 vertex leaves 6 paths


def test_undirected_endpoints(client):
    res = client.post(
        "/undirected/preprocess",
        json=dict(graph=UPATH4, k=4, trials=100, seed=2, include_state=True),
    ).json()
    assert res["answer"] is True
    q = client.post(
        "/undirected/query",
        json=dict(oracle_id=res["oracle_id"], updates="- 2 3\n", brute_force=True),
    ).json()
    assert q["answer"] is False and q["match"] is True

    bip = client.post(
        "/undirected/preprocess",
        json=dict(graph=UPATH4, k=4, seed=2, sides="1 3\n2 4\n"),
    ).json()
    assert bip["answer"] is True and bip["trials"] == 1


def test_state_transport(client):
    res = client.post(
        "/kpath/preprocess", json=dict(graph=PATH3, k=3, mode="rand", seed=9)
    ).json()
    raw = client.get(f"/oracles/{res['oracle_id']}/state")
    assert raw.status_code == 200
    loaded = client.post(
        "/oracles/load", json=dict(state_b64=base64.b64encode(raw.content).decode())
    ).json()
    assert loaded["kind"] == "KPathOracle"
    dropped = client.delete(f"/oracles/{res['oracle_id']}").json()
    assert dropped["dropped"] == res["oracle_id"]
    missing = client.post(
        "/kpath/query", json=dict(oracle_id=res["oracle_id"], updates="")
    )
    assert missing.status_code == 404


def test_dynamic_session_endpoints(client):
    sid = client.post(
        "/dynamic/sessions",
        json=dict(problem="exact-cover", mode="deterministic", seed=1),
    ).json()["session_id"]
    out = client.post(
        f"/dynamic/sessions/{sid}/lines",
        json=dict(lines=["4 3", "+ 1 2", "+ 3", "?", "- 2", "?"]),
    ).json()["outputs"]
    assert out == ["1", "2", "YES", "NO"]
    one_shot = client.post(
        "/dynamic/run",
        json=dict(problem="matching", mode="deterministic", d=2,
                  script="9 1\n+ 1 1\n?\n"),
    ).json()["outputs"]
    assert one_shot == ["1", "YES"]


def test_constrained_endpoints(client):
    cyc = "3 3 directed\n1 2\n2 3\n3 1\n"
    res = client.post("/constrained/kwalk-repeat", json=dict(graph=cyc, k=4)).json()
    assert res["answer"] is True
    occ = client.post(
        "/constrained/occupancy",
        json=dict(graph="3 2 directed\n1 2\n2 3\nV1: 2\nV2:\n0 0\n", k=3),
    ).json()
    assert occ["answer"] is False


def test_error_codes(client):
    bad = client.post("/kpath/preprocess", json=dict(graph="junk", k=3))
    assert bad.status_code == 400
    assert bad.json()["detail"]["code"] == "parse"
    cap = client.post("/kpath/preprocess", json=dict(graph=PATH3, k=99))
    assert cap.json()["detail"]["code"] == "capability"
    undirected_in_directed = client.post(
        "/kpath/preprocess", json=dict(graph=UPATH4, k=2)
    )
    assert undirected_in_directed.json()["detail"]["code"] == "parse"
    corrupt = client.post(
        "/oracles/load", json=dict(state_b64=base64.b64encode(b"XTNOjunk").decode())
    )
    assert corrupt.json()["detail"]["code"] == "state"
