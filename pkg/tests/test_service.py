"""HTTP session service tests.

Exercises the JSON API end to end with the in-process test client:
session lifecycle, pending-protection staging, stepping, hints, error
status mapping, trace export (validated by replay), TTL eviction, a
seeded fuzz of request sequences, and lock serialization under
concurrent steps.
"""

from __future__ import annotations

import json
import threading
import time
from random import Random

import pytest
from fastapi.testclient import TestClient

from firecontain.service import create_app
from firecontain.trace import parse_trace, validate_trace

Z2 = {"kind": "group", "group": "free-abelian", "params": {"rank": 2}}
Z1 = {"kind": "group", "group": "free-abelian", "params": {"rank": 1}}

# Two-turn containment script for the origin fire on the rank-2 lattice
# with budget 3: wall off three neighbors, then the three ways out of
# the one vertex that caught.
TURN1 = ["-1,0", "0,1", "1,0"]
TURN2 = ["-1,-1", "0,-2", "1,-1"]


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def make_session(client, graph=Z2, fire=None, schedule=None, **extra):
    body = {
        "graph": graph,
        "fire": ["0,0"] if fire is None else fire,
        "schedule": {"C": 3, "d": 0} if schedule is None else schedule,
    }
    body.update(extra)
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 201, resp.text
    return resp.json()


def view_of(client, sid, radius=None):
    params = {} if radius is None else {"radius": radius}
    resp = client.get(f"/sessions/{sid}/view", params=params)
    assert resp.status_code == 200, resp.text
    return resp.json()


def burning_ids(view):
    return sorted(v["id"] for v in view["vertices"] if v["status"] == "burning")


# --- session creation ------------------------------------------------------------


class TestCreate:
    def test_initial_view(self, client):
        created = make_session(client)
        view = created["view"]
        assert view["session"] == created["id"]
        assert view["time"] == 0
        assert view["budget"] == 3
        assert view["contained"] is False
        assert view["contained_at"] is None
        assert view["fire_size"] == 1
        assert view["total_protected"] == 0
        assert view["pending"] == []
        assert view["radius"] == 6
        assert burning_ids(view) == ["0,0"]

    def test_lattice_layout_uses_coordinates(self, client):
        view = make_session(client)["view"]
        by_id = {v["id"]: v for v in view["vertices"]}
        assert by_id["0,0"]["layout"] == [0.0, 0.0]
        assert by_id["1,0"]["layout"] == [1.0, 0.0]
        assert by_id["-2,3"]["layout"] == [-2.0, 3.0]

    def test_layout_fallback_when_graph_has_none(self, client):
        free = {"kind": "group", "group": "free", "params": {"rank": 2}}
        view = make_session(client, graph=free, fire=["e"], view_radius=2)["view"]
        assert all(v["layout"] is not None for v in view["vertices"])
        by_id = {v["id"]: v for v in view["vertices"]}
        assert by_id["e"]["layout"] == [0.0, 0.0]

    def test_edges_reference_vertex_indices(self, client):
        view = make_session(client, view_radius=2)["view"]
        n = len(view["vertices"])
        assert n == 13
        for i, j in view["edges"]:
            assert 0 <= i < n and 0 <= j < n

    def test_ball_fire_spec(self, client):
        view = make_session(client, fire={"ball": 1})["view"]
        assert view["fire_size"] == 5
        assert burning_ids(view) == sorted(["0,0", "1,0", "-1,0", "0,1", "0,-1"])

    def test_budget_is_next_turn_budget(self, client):
        created = make_session(client, schedule={"C": 1, "d": 1})
        sid = created["id"]
        assert created["view"]["budget"] == 1
        client.post(f"/sessions/{sid}/protect", json={"protect": ["1,0"]})
        client.post(f"/sessions/{sid}/step")
        assert view_of(client, sid)["budget"] == 2

    def test_view_radius_override(self, client):
        created = make_session(client, view_radius=2)
        sid = created["id"]
        assert created["view"]["radius"] == 2
        assert len(created["view"]["vertices"]) == 13
        narrow = view_of(client, sid, radius=1)
        assert narrow["radius"] == 1
        assert len(narrow["vertices"]) == 5
        # one-shot override; the session keeps its configured radius
        assert view_of(client, sid)["radius"] == 2


# --- protect staging -------------------------------------------------------------


class TestProtect:
    def test_stage_returns_sorted_pending(self, client):
        sid = make_session(client)["id"]
        resp = client.post(f"/sessions/{sid}/protect", json={"protect": ["0,1", "-1,0"]})
        assert resp.status_code == 200
        assert resp.json()["pending"] == ["-1,0", "0,1"]
        assert view_of(client, sid)["pending"] == ["-1,0", "0,1"]

    def test_pending_vertices_stay_open_until_step(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": ["1,0"]})
        view = view_of(client, sid)
        by_id = {v["id"]: v for v in view["vertices"]}
        assert by_id["1,0"]["status"] == "open"
        assert view["total_protected"] == 0

    def test_accumulate_and_swap(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": ["0,1"]})
        resp = client.post(f"/sessions/{sid}/protect", json={"protect": ["1,0"]})
        assert resp.json()["pending"] == ["0,1", "1,0"]
        resp = client.post(
            f"/sessions/{sid}/protect",
            json={"protect": ["-1,0"], "unprotect": ["0,1"]},
        )
        assert resp.json()["pending"] == ["-1,0", "1,0"]

    def test_unprotect_all(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": ["0,1", "1,0"]})
        resp = client.post(f"/sessions/{sid}/protect", json={"unprotect": ["0,1", "1,0"]})
        assert resp.json()["pending"] == []

    def test_over_budget_rejected_and_nothing_staged(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": ["0,1"]})
        before = view_of(client, sid)
        resp = client.post(
            f"/sessions/{sid}/protect", json={"protect": ["1,0", "2,0", "3,0"]}
        )
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "budget-exceeded"
        assert body["offending"] == ["0,1", "1,0", "2,0", "3,0"]
        assert "budget 3" in body["detail"]
        assert view_of(client, sid) == before

    def test_unprotect_not_pending_is_atomic(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": ["0,1"]})
        resp = client.post(
            f"/sessions/{sid}/protect", json={"unprotect": ["0,1", "99,99"]}
        )
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "not-pending"
        assert body["offending"] == ["99,99"]
        # the staged pick it also named must survive the failed request
        assert view_of(client, sid)["pending"] == ["0,1"]

    def test_duplicate_in_request(self, client):
        sid = make_session(client)["id"]
        resp = client.post(f"/sessions/{sid}/protect", json={"protect": ["1,0", "1,0"]})
        assert resp.status_code == 422
        assert resp.json()["code"] == "double-protection"
        assert resp.json()["offending"] == ["1,0"]

    def test_protect_burning_vertex(self, client):
        sid = make_session(client)["id"]
        resp = client.post(f"/sessions/{sid}/protect", json={"protect": ["0,0"]})
        assert resp.status_code == 422
        assert resp.json()["code"] == "protecting-burning-vertex"
        assert resp.json()["offending"] == ["0,0"]

    def test_protect_already_committed_vertex(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": ["1,0"]})
        client.post(f"/sessions/{sid}/step")
        resp = client.post(f"/sessions/{sid}/protect", json={"protect": ["1,0"]})
        assert resp.status_code == 422
        assert resp.json()["code"] == "double-protection"

    def test_unknown_vertex(self, client):
        sid = make_session(client)["id"]
        resp = client.post(f"/sessions/{sid}/protect", json={"protect": ["zebra"]})
        assert resp.status_code == 422
        assert resp.json()["code"] == "unknown-vertex"
        assert "zebra" in resp.json()["detail"]


# --- stepping and containment ----------------------------------------------------


class TestStep:
    def test_two_turn_containment_script(self, client):
        sid = make_session(client)["id"]

        client.post(f"/sessions/{sid}/protect", json={"protect": TURN1})
        view = client.post(f"/sessions/{sid}/step").json()
        assert view["time"] == 1
        assert view["pending"] == []
        assert view["fire_size"] == 2
        assert view["total_protected"] == 3
        assert view["contained"] is False
        assert burning_ids(view) == ["0,-1", "0,0"]

        client.post(f"/sessions/{sid}/protect", json={"protect": TURN2})
        view = client.post(f"/sessions/{sid}/step").json()
        assert view["time"] == 2
        assert view["contained"] is True
        assert view["contained_at"] == 2
        assert view["fire_size"] == 2
        assert view["total_protected"] == 6

    def test_step_commits_pending_as_protected(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": ["1,0"]})
        view = client.post(f"/sessions/{sid}/step").json()
        by_id = {v["id"]: v for v in view["vertices"]}
        assert by_id["1,0"]["status"] == "protected"
        assert view["total_protected"] == 1
        # the other three neighbors caught fire
        assert view["fire_size"] == 4

    def test_step_with_nothing_pending(self, client):
        sid = make_session(client)["id"]
        view = client.post(f"/sessions/{sid}/step").json()
        assert view["time"] == 1
        assert view["fire_size"] == 5

    def test_step_after_containment_is_noop(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": TURN1})
        client.post(f"/sessions/{sid}/step")
        client.post(f"/sessions/{sid}/protect", json={"protect": TURN2})
        client.post(f"/sessions/{sid}/step")
        view = client.post(f"/sessions/{sid}/step").json()
        assert view["time"] == 3
        assert view["contained_at"] == 2
        assert view["fire_size"] == 2


# --- hints -----------------------------------------------------------------------


class TestHint:
    def test_hint_is_greedy_frontier(self, client):
        sid = make_session(client)["id"]
        resp = client.get(f"/sessions/{sid}/hint")
        assert resp.status_code == 200
        body = resp.json()
        assert body["advisory"] is True
        # four frontier vertices tie on burning neighbors; smaller ids win
        assert body["hint"] == ["-1,0", "0,-1", "0,1"]

    def test_hint_respects_pending(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": ["0,1"]})
        hint = client.get(f"/sessions/{sid}/hint").json()["hint"]
        assert hint == ["-1,0", "0,-1"]

    def test_hint_empty_when_budget_spent(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": TURN1})
        assert client.get(f"/sessions/{sid}/hint").json()["hint"] == []

    def test_hint_empty_after_containment(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": TURN1})
        client.post(f"/sessions/{sid}/step")
        client.post(f"/sessions/{sid}/protect", json={"protect": TURN2})
        client.post(f"/sessions/{sid}/step")
        assert client.get(f"/sessions/{sid}/hint").json()["hint"] == []

    def test_hint_stages_nothing(self, client):
        sid = make_session(client)["id"]
        client.get(f"/sessions/{sid}/hint")
        assert view_of(client, sid)["pending"] == []


# --- error mapping ---------------------------------------------------------------


class TestErrorMapping:
    @pytest.mark.parametrize(
        "method,path",
        [
            ("GET", "/sessions/nope/view"),
            ("POST", "/sessions/nope/protect"),
            ("POST", "/sessions/nope/step"),
            ("GET", "/sessions/nope/hint"),
            ("GET", "/sessions/nope/trace"),
        ],
    )
    def test_unknown_session_is_404(self, client, method, path):
        if method == "POST":
            resp = client.post(path, json={"protect": []})
        else:
            resp = client.get(path)
        assert resp.status_code == 404
        body = resp.json()
        assert body["code"] == "unknown-session"
        assert "nope" in body["detail"]

    def test_bad_graph_config_is_400(self, client):
        resp = client.post(
            "/sessions",
            json={
                "graph": {"kind": "group", "group": "mystery"},
                "fire": ["0,0"],
                "schedule": {"C": 1},
            },
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "config-error"
        assert "mystery" in resp.json()["detail"]

    def test_bad_fire_vertex_is_400(self, client):
        resp = client.post(
            "/sessions",
            json={"graph": Z2, "fire": ["zebra"], "schedule": {"C": 1}},
        )
        assert resp.status_code == 400
        body = resp.json()
        assert body["code"] == "config-error"
        assert "at fire" in body["detail"]

    def test_negative_budget_constant_is_400(self, client):
        resp = client.post(
            "/sessions",
            json={"graph": Z2, "fire": ["0,0"], "schedule": {"C": -1}},
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "config-error"

    def test_missing_body_fields_are_422(self, client):
        resp = client.post("/sessions", json={"graph": Z2})
        assert resp.status_code == 422
        assert "detail" in resp.json()

    @pytest.mark.parametrize("radius", [0, 31])
    def test_view_radius_out_of_range_is_422(self, client, radius):
        sid = make_session(client)["id"]
        resp = client.get(f"/sessions/{sid}/view", params={"radius": radius})
        assert resp.status_code == 422

    def test_create_view_radius_out_of_range_is_422(self, client):
        resp = client.post(
            "/sessions",
            json={"graph": Z2, "fire": ["0,0"], "schedule": {"C": 1}, "view_radius": 0},
        )
        assert resp.status_code == 422


# --- trace export ----------------------------------------------------------------


class TestTrace:
    def play_contained(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": TURN1})
        client.post(f"/sessions/{sid}/step")
        client.post(f"/sessions/{sid}/protect", json={"protect": TURN2})
        client.post(f"/sessions/{sid}/step")
        return sid

    def test_contained_game_trace_validates(self, client):
        sid = self.play_contained(client)
        resp = client.get(f"/sessions/{sid}/trace")
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("application/x-ndjson")
        text = resp.text

        records = parse_trace(text)
        assert [r["type"] for r in records] == ["header", "turn", "turn", "result"]
        header = records[0]
        assert header["horizon"] == 2
        assert header["fire"] == ["0,0"]
        assert header["schedule"] == {"C": "3", "d": 0}
        assert header["strategy"] == {"name": "interactive", "parameters": {}}
        assert len(header["config_hash"]) == 16
        assert records[1]["protected"] == TURN1
        assert records[2]["protected"] == TURN2
        result = records[3]
        assert result["outcome"] == "contained"
        assert result["contained_at"] == 2
        assert result["final_fire_size"] == 2
        assert result["total_protected"] == 6

        report = validate_trace(text)
        assert report.valid is True
        assert report.turns == 2

    def test_trace_lines_are_canonical_json(self, client):
        sid = self.play_contained(client)
        text = client.get(f"/sessions/{sid}/trace").text
        for line in text.splitlines():
            rec = json.loads(line)
            assert line == json.dumps(rec, sort_keys=True, separators=(",", ":"))

    def test_midgame_trace_is_undetermined_but_valid(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": TURN1})
        client.post(f"/sessions/{sid}/step")
        records = parse_trace(client.get(f"/sessions/{sid}/trace").text)
        assert records[0]["horizon"] == 1
        assert records[-1]["outcome"] == "undetermined"
        assert records[-1]["contained_at"] is None
        report = validate_trace(records)
        assert report.valid is True
        assert report.turns == 1

    def test_trace_before_any_step(self, client):
        sid = make_session(client)["id"]
        records = parse_trace(client.get(f"/sessions/{sid}/trace").text)
        assert [r["type"] for r in records] == ["header", "result"]
        assert records[0]["horizon"] == 0
        report = validate_trace(records)
        assert report.valid is True
        assert report.turns == 0

    def test_pending_picks_are_not_in_the_trace(self, client):
        sid = make_session(client)["id"]
        client.post(f"/sessions/{sid}/protect", json={"protect": ["1,0"]})
        records = parse_trace(client.get(f"/sessions/{sid}/trace").text)
        assert [r["type"] for r in records] == ["header", "result"]
        assert records[-1]["total_protected"] == 0

    def test_noop_rounds_after_containment_still_validate(self, client):
        sid = self.play_contained(client)
        client.post(f"/sessions/{sid}/step")
        text = client.get(f"/sessions/{sid}/trace").text
        report = validate_trace(text)
        assert report.valid is True
        assert report.turns == 3

    def test_trace_bytes_are_stable(self, client):
        sid = self.play_contained(client)
        a = client.get(f"/sessions/{sid}/trace").content
        b = client.get(f"/sessions/{sid}/trace").content
        assert a == b and a


# --- TTL eviction ----------------------------------------------------------------


class TestEviction:
    def test_idle_session_evicted(self):
        with TestClient(create_app(session_ttl=0.05)) as client:
            sid = make_session(client)["id"]
            assert view_of(client, sid)["time"] == 0
            time.sleep(0.12)
            resp = client.get(f"/sessions/{sid}/view")
            assert resp.status_code == 404
            assert resp.json()["code"] == "unknown-session"

    def test_activity_keeps_session_alive(self):
        with TestClient(create_app(session_ttl=0.25)) as client:
            sid = make_session(client)["id"]
            for _ in range(4):
                time.sleep(0.1)
                assert client.get(f"/sessions/{sid}/view").status_code == 200


# --- fuzz: random request sequences ----------------------------------------------


class TestFuzz:
    BUDGET = 2

    def check_invariants(self, client, sid, steps_done):
        view = view_of(client, sid)
        assert view["time"] == steps_done
        assert view["budget"] == self.BUDGET
        assert len(burning_ids(view)) == view["fire_size"]
        assert view["contained"] == (view["contained_at"] is not None)
        assert len(view["pending"]) <= self.BUDGET
        assert view["pending"] == sorted(view["pending"])
        return view

    def test_random_request_sequences(self, client):
        rng = Random(0x5EED)
        sid = make_session(
            client, schedule={"C": self.BUDGET, "d": 0}, view_radius=3
        )["id"]
        steps_done = 0

        for _ in range(60):
            view = self.check_invariants(client, sid, steps_done)
            open_ids = sorted(
                v["id"]
                for v in view["vertices"]
                if v["status"] == "open" and v["id"] not in view["pending"]
            )
            op = rng.choice(
                ["protect", "protect", "overfill", "dupes", "burning",
                 "unknown", "not-pending", "unprotect", "step", "hint", "lost"]
            )
            if op == "step" and steps_done >= 10:
                op = "hint"

            if op == "protect":
                room = self.BUDGET - len(view["pending"])
                k = rng.randint(0, min(room, len(open_ids)))
                picks = rng.sample(open_ids, k)
                resp = client.post(f"/sessions/{sid}/protect", json={"protect": picks})
                assert resp.status_code == 200
                assert set(picks) <= set(resp.json()["pending"])
            elif op == "overfill":
                need = self.BUDGET - len(view["pending"]) + 1
                if len(open_ids) < need:
                    continue
                picks = rng.sample(open_ids, need)
                resp = client.post(f"/sessions/{sid}/protect", json={"protect": picks})
                assert resp.status_code == 422
                assert resp.json()["code"] == "budget-exceeded"
                assert view_of(client, sid)["pending"] == view["pending"]
            elif op == "dupes":
                if not open_ids:
                    continue
                v = rng.choice(open_ids)
                resp = client.post(f"/sessions/{sid}/protect", json={"protect": [v, v]})
                assert resp.status_code == 422
                assert resp.json()["code"] == "double-protection"
            elif op == "burning":
                v = rng.choice(burning_ids(view))
                resp = client.post(f"/sessions/{sid}/protect", json={"protect": [v]})
                assert resp.status_code == 422
                assert resp.json()["code"] == "protecting-burning-vertex"
                assert view_of(client, sid)["pending"] == view["pending"]
            elif op == "unknown":
                resp = client.post(f"/sessions/{sid}/protect", json={"protect": ["zebra"]})
                assert resp.status_code == 422
                assert resp.json()["code"] == "unknown-vertex"
            elif op == "not-pending":
                resp = client.post(
                    f"/sessions/{sid}/protect", json={"unprotect": ["99,99"]}
                )
                assert resp.status_code == 422
                assert resp.json()["code"] == "not-pending"
                assert view_of(client, sid)["pending"] == view["pending"]
            elif op == "unprotect":
                if not view["pending"]:
                    continue
                v = rng.choice(view["pending"])
                resp = client.post(f"/sessions/{sid}/protect", json={"unprotect": [v]})
                assert resp.status_code == 200
                assert v not in resp.json()["pending"]
            elif op == "step":
                resp = client.post(f"/sessions/{sid}/step")
                assert resp.status_code == 200
                assert resp.json()["pending"] == []
                steps_done += 1
            elif op == "hint":
                resp = client.get(f"/sessions/{sid}/hint")
                assert resp.status_code == 200
                hint = resp.json()["hint"]
                assert len(hint) + len(view["pending"]) <= self.BUDGET
                assert not set(hint) & set(view["pending"])
            elif op == "lost":
                resp = client.get("/sessions/no-such-session/view")
                assert resp.status_code == 404

        final = self.check_invariants(client, sid, steps_done)
        report = validate_trace(client.get(f"/sessions/{sid}/trace").text)
        assert report.valid is True
        assert report.turns == steps_done == final["time"]


# --- concurrency -----------------------------------------------------------------


class TestConcurrency:
    def test_parallel_steps_serialize(self):
        app = create_app()
        with TestClient(app) as client:
            sid = make_session(
                client, graph=Z1, fire=["0"], schedule={"C": 0, "d": 0}
            )["id"]

        threads, errors = [], []
        barrier = threading.Barrier(4)

        def worker():
            with TestClient(app) as c:
                barrier.wait()
                for _ in range(5):
                    resp = c.post(f"/sessions/{sid}/step")
                    if resp.status_code != 200:
                        errors.append(resp.status_code)

        for _ in range(4):
            t = threading.Thread(target=worker)
            t.start()
            threads.append(t)
        for t in threads:
            t.join()

        assert errors == []
        with TestClient(app) as client:
            view = view_of(client, sid)
        # 20 committed rounds, each spreading one vertex per end of the line
        assert view["time"] == 20
        assert view["fire_size"] == 41
        report = validate_trace(client.get(f"/sessions/{sid}/trace").text)
        assert report.valid is True
        assert report.turns == 20
