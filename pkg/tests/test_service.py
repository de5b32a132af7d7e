import json

import pytest
from fastapi.testclient import TestClient

from belex.cli import main
from belex.service import create_app

from conftest import fixture_path


@pytest.fixture()
def client():
    return TestClient(create_app())


@pytest.fixture()
def session_id(client, sample_network_doc):
    response = client.post("/api/sessions", json=sample_network_doc)
    assert response.status_code == 201
    return response.json()["session_id"]


def ground(client, session_id, node, state):
    return client.post(
        f"/api/sessions/{session_id}/ground", json={"node": node, "state": state}
    )


class TestSessions:
    def test_create_returns_initial_snapshot(self, client, sample_network_doc):
        response = client.post("/api/sessions", json=sample_network_doc)
        assert response.status_code == 201
        body = response.json()
        assert body["snapshot"]["t"] == 0
        assert body["snapshot"]["nodes"]["B"]["bel"] == pytest.approx(
            [0.30, 0.38, 0.32], abs=1e-9
        )

    def test_invalid_network_is_400(self, client):
        response = client.post(
            "/api/sessions",
            json={"nodes": [{"id": "X", "states": ["a"], "prior": [1.0]}]},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_network"

    def test_unknown_session_is_404(self, client):
        response = client.get("/api/sessions/nope/history")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_session"

    def test_delete(self, client, session_id):
        assert client.delete(f"/api/sessions/{session_id}").status_code == 204
        assert client.get(f"/api/sessions/{session_id}/history").status_code == 404
        assert client.delete(f"/api/sessions/{session_id}").status_code == 404


class TestGroundAndPreview:
    def test_ground_advances_history(self, client, session_id):
        response = ground(client, session_id, "C", "c_1")
        assert response.status_code == 200
        snap = response.json()
        assert snap["t"] == 1
        assert snap["nodes"]["B"]["lambda"] == pytest.approx(
            [0.95, 0.9, 0.01], abs=1e-9
        )

    def test_regrounding_is_409(self, client, session_id):
        ground(client, session_id, "C", "c_1")
        response = ground(client, session_id, "C", "c_2")
        assert response.status_code == 409
        assert response.json()["code"] == "already_grounded"

    def test_zero_probability_evidence_is_422(self, client):
        doc = {"nodes": [{"id": "R", "states": ["r1", "r2"], "prior": [1.0, 0.0]}]}
        sid = client.post("/api/sessions", json=doc).json()["session_id"]
        response = ground(client, sid, "R", "r2")
        assert response.status_code == 422
        assert response.json()["code"] == "contradictory_evidence"

    def test_unknown_node_is_400(self, client, session_id):
        assert ground(client, session_id, "Z", "z1").status_code == 400

    def test_missing_body_field_is_400(self, client, session_id):
        response = client.post(
            f"/api/sessions/{session_id}/ground", json={"node": "C"}
        )
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_request"

    def test_preview_does_not_commit(self, client, session_id):
        ground(client, session_id, "C", "c_1")
        history_before = client.get(f"/api/sessions/{session_id}/history").json()
        preview = client.post(
            f"/api/sessions/{session_id}/preview", json={"node": "D", "state": "d_1"}
        )
        assert preview.status_code == 200
        history_after = client.get(f"/api/sessions/{session_id}/history").json()
        assert history_after == history_before
        assert len(history_after["snapshots"]) == 2
        # The previewed snapshot equals what ground would produce.
        real = ground(client, session_id, "D", "d_1")
        assert preview.json() == real.json()


class TestExplainEndpoint:
    def _explain(self, client, session_id, **params):
        query = {
            "focal": "B.b1",
            "from": 1,
            "to": 2,
            "support": "causal",
        }
        query.update(params)
        return client.get(f"/api/sessions/{session_id}/explain", params=query)

    def test_plan_and_text(self, client, session_id):
        ground(client, session_id, "C", "c_1")
        ground(client, session_id, "D", "d_1")
        response = self._explain(client, session_id)
        assert response.status_code == 200
        body = response.json()
        assert body["plan"]["case"] == "reduce_to_binary"
        assert body["plan"]["partition"]["out"] == ["b_3"]
        assert "10%" in body["text"]

    def test_history_export_matches_cli_run(self, client, session_id, capsys):
        ground(client, session_id, "C", "c_1")
        ground(client, session_id, "D", "d_1")
        exported = client.get(f"/api/sessions/{session_id}/history").json()
        code = main(
            [
                "run",
                "--network", fixture_path("sample_network.json"),
                "--scenario", fixture_path("sample_scenario.json"),
                "--format", "json",
            ]
        )
        assert code == 0
        assert json.loads(capsys.readouterr().out) == exported

    def test_parity_with_cli(self, client, session_id, capsys):
        ground(client, session_id, "C", "c_1")
        ground(client, session_id, "D", "d_1")
        api_text = self._explain(client, session_id).json()["text"]
        code = main(
            [
                "explain",
                "--network", fixture_path("sample_network.json"),
                "--scenario", fixture_path("sample_scenario.json"),
                "--focal", "B=b1",
                "--from", "1",
                "--to", "2",
                "--support", "causal",
                "--format", "text",
            ]
        )
        assert code == 0
        cli_text = capsys.readouterr().out
        assert cli_text == api_text + "\n"

    def test_auto_equals_causal_on_pure_window(self, client, session_id):
        ground(client, session_id, "C", "c_1")
        ground(client, session_id, "D", "d_1")
        auto = self._explain(client, session_id, support="auto").json()
        causal = self._explain(client, session_id, support="causal").json()
        assert auto["text"] == causal["text"]
        assert auto["plan"] == causal["plan"]

    def test_rho_knob_changes_the_case(self, client, session_id):
        ground(client, session_id, "C", "c_1")
        ground(client, session_id, "D", "d_1")
        moderated = self._explain(client, session_id, rho=0.005).json()
        assert moderated["plan"]["case"] == "eliminate_and_reinstate"
        assert "rules out b_3" in moderated["text"]

    def test_eps_bel_knob(self, client, session_id):
        ground(client, session_id, "C", "c_1")
        ground(client, session_id, "D", "d_1")
        body = self._explain(client, session_id, eps_bel=0.2).json()
        assert body["plan"]["settings"]["eps_bel"] == 0.2

    def test_bad_support_is_400(self, client, session_id):
        ground(client, session_id, "C", "c_1")
        ground(client, session_id, "D", "d_1")
        response = self._explain(client, session_id, support="psychic")
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_request"

    def test_bad_focal_is_400(self, client, session_id):
        ground(client, session_id, "C", "c_1")
        ground(client, session_id, "D", "d_1")
        assert self._explain(client, session_id, focal="Bb1").status_code == 400

    def test_bad_window_is_400(self, client, session_id):
        response = self._explain(client, session_id)
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_window"


class TestConcurrency:
    def test_concurrent_grounds_serialize(self, sample_network_doc):
        from concurrent.futures import ThreadPoolExecutor

        app = create_app()
        setup = TestClient(app)
        sid = setup.post("/api/sessions", json=sample_network_doc).json()["session_id"]

        def ground_from_own_client(node, state):
            return TestClient(app).post(
                f"/api/sessions/{sid}/ground", json={"node": node, "state": state}
            )

        with ThreadPoolExecutor(max_workers=2) as pool:
            futures = [
                pool.submit(ground_from_own_client, "C", "c_1"),
                pool.submit(ground_from_own_client, "D", "d_1"),
            ]
            statuses = sorted(f.result().status_code for f in futures)
        assert statuses == [200, 200]
        history = setup.get(f"/api/sessions/{sid}/history").json()
        assert len(history["snapshots"]) == 3
        final = history["snapshots"][-1]["grounded"]
        assert {(g["node"], g["state"]) for g in final} == {("C", "c_1"), ("D", "d_1")}
        for snapshot in history["snapshots"]:
            assert len(snapshot["grounded"]) == snapshot["t"]


class TestPersistence:
    def test_sessions_survive_restart(self, tmp_path, sample_network_doc):
        first = TestClient(create_app(str(tmp_path)))
        sid = first.post("/api/sessions", json=sample_network_doc).json()["session_id"]
        first.post(f"/api/sessions/{sid}/ground", json={"node": "C", "state": "c_1"})

        second = TestClient(create_app(str(tmp_path)))
        history = second.get(f"/api/sessions/{sid}/history")
        assert history.status_code == 200
        assert len(history.json()["snapshots"]) == 2

        assert second.delete(f"/api/sessions/{sid}").status_code == 204
        assert not list(tmp_path.glob("*.json"))

    def test_corrupt_session_files_are_skipped(self, tmp_path, sample_network_doc):
        (tmp_path / "junk.json").write_text("{not json")
        client = TestClient(create_app(str(tmp_path)))
        assert client.get("/api/health").status_code == 200


def test_health(client):
    body = client.get("/api/health").json()
    assert body["status"] == "ok"
