"""Session API: lifecycle, errors, determinism."""

import json

import pytest
from fastapi.testclient import TestClient

from bypasscalc.arcs import classify_arc, enumerate_arcs
from bypasscalc.dividing import single_circle
from bypasscalc.moves import MoveSequence, bypass, braid_move
from bypasscalc.service import create_app
from bypasscalc.surgery import attach_triangle

CIRCLE = single_circle().to_json_obj()


@pytest.fixture()
def client():
    return TestClient(create_app())


def new_session(client, initial=None, moves=()):
    body = {"initial": initial or CIRCLE}
    if moves:
        body["moves"] = list(moves)
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 201, resp.text
    return resp.json()


def triangle_arcs():
    ds = single_circle()
    ot = next(
        a for a in enumerate_arcs(ds) if classify_arc(ds, a)["is_overtwisted"]
    )
    return attach_triangle(ds, ot).arcs


class TestLifecycle:
    def test_create_gives_single_state_trace(self, client):
        summary = new_session(client)
        assert summary["moves"] == 0
        assert summary["circles"] == 1
        assert len(summary["trace"]) == 1

    def test_ids_distinct(self, client):
        assert new_session(client)["id"] != new_session(client)["id"]

    def test_invalid_state_rejected(self, client):
        # both sides of the circle positive: signs cannot alternate
        bad = {
            "faces": [{"id": "f0", "sign": "+"}, {"id": "f1", "sign": "+"}],
            "circles": [{"id": "c0", "faces": ["f0", "f1"]}],
        }
        resp = client.post("/sessions", json={"initial": bad})
        assert resp.status_code == 422
        assert resp.json()["error"]["code"] == "invalid_dividing_set"

    def test_unknown_session(self, client):
        resp = client.get("/sessions/nope")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "unknown_session"


class TestArcs:
    def test_fresh_circle_has_two_arcs(self, client):
        sid = new_session(client)["id"]
        arcs = client.get(f"/sessions/{sid}/arcs").json()["arcs"]
        assert len(arcs) == 2
        flags = sorted((a["is_trivial"], a["is_overtwisted"]) for a in arcs)
        assert flags == [(False, True), (True, False)]

    def test_palette_follows_state(self, client):
        sid = new_session(client)["id"]
        first = triangle_arcs()[0]
        client.post(f"/sessions/{sid}/moves", json=bypass(first).to_json_obj())
        arcs = client.get(f"/sessions/{sid}/arcs").json()["arcs"]
        assert len(arcs) > 2
        assert arcs == sorted(arcs, key=lambda a: a["code"])


class TestMoves:
    def test_attach_and_undo_round_trip(self, client):
        sid = new_session(client)["id"]
        before = client.get(f"/sessions/{sid}").json()
        t = triangle_arcs()
        after = client.post(
            f"/sessions/{sid}/moves", json=bypass(t[0]).to_json_obj()
        ).json()
        assert after["circles"] == 3
        undone = client.post(f"/sessions/{sid}/undo").json()
        assert undone == before
        redone = client.post(f"/sessions/{sid}/redo").json()
        assert redone == after

    def test_inadmissible_move_rejected_with_index(self, client):
        sid = new_session(client)["id"]
        t = triangle_arcs()
        resp = client.post(
            f"/sessions/{sid}/moves", json=bypass(t[1]).to_json_obj()
        )
        assert resp.status_code == 422
        assert resp.json()["error"]["move_index"] == 0

    def test_undo_empty_stack(self, client):
        sid = new_session(client)["id"]
        resp = client.post(f"/sessions/{sid}/undo")
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "empty_undo_stack"

    def test_braid_updates_ledger(self, client):
        initial = {
            "faces": [
                {"id": "f0", "sign": "+"},
                {"id": "f1", "sign": "-"},
                {"id": "f2", "sign": "-"},
            ],
            "circles": [
                {"id": "c0", "faces": ["f0", "f1"]},
                {"id": "c1", "faces": ["f0", "f2"]},
            ],
        }
        sid = new_session(client, initial=initial)["id"]
        mv = braid_move("f0", ["c0"], {"c1": 1})
        summary = client.post(
            f"/sessions/{sid}/moves", json=mv.to_json_obj()
        ).json()
        assert summary["triangle_ledger"] == 2
        assert summary["state"] == new_session(client, initial=initial)["state"]


class TestNormalize:
    def test_fresh_session_is_zero(self, client):
        sid = new_session(client)["id"]
        report = client.post(f"/sessions/{sid}/normalize").json()
        assert report == {"n": 0, "r": 0, "steps": 0}

    def test_full_triangle_counts_one(self, client):
        sid = new_session(client)["id"]
        for spec in triangle_arcs():
            resp = client.post(
                f"/sessions/{sid}/moves", json=bypass(spec).to_json_obj()
            )
            assert resp.status_code == 200
        report = client.post(f"/sessions/{sid}/normalize").json()
        assert report["n"] == 1
        cert = client.get(f"/sessions/{sid}/certificate")
        assert cert.status_code == 200
        for line in cert.text.splitlines():
            json.loads(line)

    def test_open_endpoint_precondition(self, client):
        sid = new_session(client)["id"]
        client.post(
            f"/sessions/{sid}/moves",
            json=bypass(triangle_arcs()[0]).to_json_obj(),
        )
        resp = client.post(f"/sessions/{sid}/normalize")
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "endpoint_mismatch"

    def test_certificate_requires_normalize(self, client):
        sid = new_session(client)["id"]
        assert client.get(f"/sessions/{sid}/certificate").status_code == 404


class TestDeterminism:
    def test_replay_into_new_instance(self, client):
        sid = new_session(client)["id"]
        for spec in triangle_arcs():
            client.post(f"/sessions/{sid}/moves", json=bypass(spec).to_json_obj())
        exported = client.get(f"/sessions/{sid}/export").json()
        other = TestClient(create_app())
        replayed = other.post("/sessions", json=exported)
        assert replayed.status_code == 201
        a = client.get(f"/sessions/{sid}").json()
        b = replayed.json()
        a.pop("id")
        b.pop("id")
        assert a == b

    def test_identical_requests_identical_bytes(self, client):
        sid = new_session(client)["id"]
        first = client.get(f"/sessions/{sid}/arcs").content
        second = client.get(f"/sessions/{sid}/arcs").content
        assert first == second
        svg1 = client.get(f"/sessions/{sid}/render.svg")
        assert svg1.headers["content-type"].startswith("image/svg+xml")
        assert svg1.content == client.get(f"/sessions/{sid}/render.svg").content
