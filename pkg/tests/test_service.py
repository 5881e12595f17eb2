from __future__ import annotations

import json
from pathlib import Path

import pytest
from starlette.testclient import TestClient

from followgen.interface.service import create_app
from followgen.pipeline import PipelineConfig


@pytest.fixture
def client(fixture_backends):
    app = create_app(PipelineConfig(), fixture_backends)
    with TestClient(app) as test_client:
        yield test_client


QUESTION = "Why is the speed of sound constant?"


def create_session(client) -> str:
    response = client.post("/sessions")
    assert response.status_code == 200
    return response.json()["id"]


class TestSessionFlow:
    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}

    def test_ask_returns_answer_and_followups(self, client):
        sid = create_session(client)
        response = client.post(f"/sessions/{sid}/ask", json={"question": QUESTION})
        assert response.status_code == 200
        data = response.json()
        assert data["turn"] == 0
        assert data["answer"]
        assert len(data["followups"]) >= 1
        assert all(f["text"].endswith("?") for f in data["followups"])
        assert data["trace_summary"]["topic_page_title"] == "Speed of sound"

    def test_choose_promotes_followup_verbatim(self, client):
        sid = create_session(client)
        asked = client.post(f"/sessions/{sid}/ask", json={"question": QUESTION}).json()
        chosen_index = min(1, len(asked["followups"]) - 1)
        chosen_text = asked["followups"][chosen_index]["text"]
        response = client.post(f"/sessions/{sid}/choose", json={"index": chosen_index})
        assert response.status_code == 200
        assert response.json()["question"] == chosen_text
        session = client.get(f"/sessions/{sid}").json()
        assert session["turns"][0]["chosen"] == chosen_index
        assert session["turns"][1]["question"] == chosen_text

    def test_choose_before_ask_is_409(self, client):
        sid = create_session(client)
        assert client.post(f"/sessions/{sid}/choose", json={"index": 0}).status_code == 409

    def test_choose_out_of_range_is_422(self, client):
        sid = create_session(client)
        client.post(f"/sessions/{sid}/ask", json={"question": QUESTION})
        assert client.post(f"/sessions/{sid}/choose", json={"index": 99}).status_code == 422

    def test_unknown_session_is_404(self, client):
        assert client.post("/sessions/nope/ask", json={"question": "x?"}).status_code == 404
        assert client.get("/sessions/nope/trace/0").status_code == 404

    def test_invalid_body_is_422(self, client):
        sid = create_session(client)
        assert client.post(f"/sessions/{sid}/ask", json={}).status_code == 422
        assert client.post(f"/sessions/{sid}/ask", json={"question": "  "}).status_code == 422

    def test_trace_has_full_graph(self, client):
        sid = create_session(client)
        client.post(f"/sessions/{sid}/ask", json={"question": QUESTION})
        trace = client.get(f"/sessions/{sid}/trace/0")
        assert trace.status_code == 200
        body = trace.json()
        assert body["status"] == "ok"
        graph = body["trace"]["graph"]
        assert graph["center"]
        assert len(graph["nodes"]) > 1
        assert all("score" in node for node in graph["nodes"])

    def test_unknown_turn_is_404(self, client):
        sid = create_session(client)
        assert client.get(f"/sessions/{sid}/trace/3").status_code == 404


class TestBetaPatch:
    def test_patch_before_ask_is_409(self, client):
        sid = create_session(client)
        assert client.patch(f"/sessions/{sid}/config", json={"beta": 0.5}).status_code == 409

    def test_patch_recomputes_scores_with_graph_unchanged(self, client):
        sid = create_session(client)
        client.post(f"/sessions/{sid}/ask", json={"question": QUESTION})
        before = client.get(f"/sessions/{sid}/trace/0").json()["trace"]
        response = client.patch(f"/sessions/{sid}/config", json={"beta": 0.0})
        assert response.status_code == 200
        after = client.get(f"/sessions/{sid}/trace/0").json()["trace"]
        assert [n["id"] for n in after["graph"]["nodes"]] == [
            n["id"] for n in before["graph"]["nodes"]
        ]
        assert after["graph"]["edges"] == before["graph"]["edges"]
        scores_before = {s["node_id"]: s for s in before["node_scores"]}
        scores_after = {s["node_id"]: s for s in after["node_scores"]}
        for node_id, score in scores_after.items():
            assert score["w"] == scores_before[node_id]["w"]
            assert score["n"] == scores_before[node_id]["n"]
            assert score["R"] == pytest.approx(score["I_norm"])  # beta = 0

    def test_beta_endpoints_match_trace_argmaxes(self, client):
        sid = create_session(client)
        client.post(f"/sessions/{sid}/ask", json={"question": QUESTION})

        client.patch(f"/sessions/{sid}/config", json={"beta": 0.0})
        trace = client.get(f"/sessions/{sid}/trace/0").json()["trace"]
        center = trace["graph"]["center"]
        candidates = [s for s in trace["node_scores"] if s["node_id"] != center]
        best_importance = max(candidates, key=lambda s: (s["I_norm"], s["S"]))
        assert trace["selected_node"]["id"] == best_importance["node_id"]

        client.patch(f"/sessions/{sid}/config", json={"beta": "inf"})
        trace = client.get(f"/sessions/{sid}/trace/0").json()["trace"]
        candidates = [s for s in trace["node_scores"] if s["node_id"] != center]
        best_similarity = max(candidates, key=lambda s: (s["S"], s["node_id"]))
        selected_id = trace["selected_node"]["id"]
        selected_score = next(s for s in candidates if s["node_id"] == selected_id)
        assert selected_score["S"] == pytest.approx(best_similarity["S"])

    def test_invalid_beta_is_422(self, client):
        sid = create_session(client)
        client.post(f"/sessions/{sid}/ask", json={"question": QUESTION})
        assert client.patch(f"/sessions/{sid}/config", json={"beta": "wild"}).status_code == 422
        assert client.patch(f"/sessions/{sid}/config", json={"beta": -1}).status_code == 422

    def test_patch_only_latest_turn_mutates(self, client):
        sid = create_session(client)
        client.post(f"/sessions/{sid}/ask", json={"question": QUESTION})
        client.post(f"/sessions/{sid}/choose", json={"index": 0})
        turn0_before = client.get(f"/sessions/{sid}/trace/0").json()
        client.patch(f"/sessions/{sid}/config", json={"beta": 2.0})
        turn0_after = client.get(f"/sessions/{sid}/trace/0").json()
        assert turn0_before["trace"]["selected_node"] == turn0_after["trace"]["selected_node"]
        assert turn0_before["trace"]["node_scores"] == turn0_after["trace"]["node_scores"]


class TestSnapshots:
    def test_snapshot_written(self, fixture_backends, tmp_path):
        app = create_app(PipelineConfig(), fixture_backends, snapshot_dir=tmp_path)
        with TestClient(app) as client:
            sid = create_session(client)
            client.post(f"/sessions/{sid}/ask", json={"question": QUESTION})
        snapshot = json.loads((tmp_path / f"{sid}.json").read_text(encoding="utf-8"))
        assert snapshot["id"] == sid
        assert len(snapshot["turns"]) == 1
        assert snapshot["turns"][0]["question"] == QUESTION


class TestSchemaGolden:
    def test_openapi_matches_published_schema(self, client):
        published = Path("src/followgen/interface/schema.json")
        live = client.app.openapi()
        assert published.exists(), "published schema file missing"
        assert json.loads(published.read_text(encoding="utf-8")) == live
