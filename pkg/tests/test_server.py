from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

import insightloom as il
from insightloom.pipeline import PipelineOptions, run_pipeline
from insightloom.server import build_app


@pytest.fixture(scope="module")
def client() -> TestClient:
    bundle = run_pipeline(str(il.FIXTURE_PATH), PipelineOptions(stub=True))
    return TestClient(build_app(bundle))


def test_dashboard_endpoint(client):
    doc = client.get("/api/dashboard").json()
    assert doc["id"] == "callcenter-oct"
    assert [p["panelId"] for p in doc["panels"]] == ["A", "B", "C", "D", "E"]


def test_insights_endpoint(client):
    insights = client.get("/api/insights").json()
    assert len(insights) >= 40
    assert any(i["id"] == "BCW-SK" for i in insights)


def test_network_filtering(client):
    full = client.get("/api/network").json()
    assert full["scores"]
    filtered = client.get("/api/network", params={"kinds": "SharedMetric"}).json()
    assert {l["kind"] for l in filtered["links"]} == {"SharedMetric"}
    assert len(filtered["links"]) < len(full["links"])


def test_network_gatekeepers(client):
    payload = client.get(
        "/api/network", params={"kinds": "SharedMetric", "gatekeepers": "TopicBased"}
    ).json()
    nodes = payload["gatekeepers"]["gatekeeperNodes"]
    metric_hub = next(n for n in nodes if n["id"] == "metric:Calls")
    assert metric_hub["degree"] == len(metric_hub["members"])


def test_matrix_restricted_symmetric(client):
    payload = client.get("/api/matrix", params={"kinds": "SharedMetric"}).json()
    counts = payload["counts"]
    for i in range(len(counts)):
        assert counts[i][i] == 0
        for j in range(len(counts)):
            assert counts[i][j] == counts[j][i]


def test_matrix_empty_kinds_is_zero(client):
    payload = client.get("/api/matrix", params={"kinds": ""}).json()
    assert all(v == 0 for row in payload["counts"] for v in row)


def test_matrix_unknown_kind_400(client):
    assert client.get("/api/matrix", params={"kinds": "Nope"}).status_code == 400


def test_clusters_endpoint(client):
    payload = client.get(
        "/api/clusters", params={"row": "SamePanelRow", "col": "SamePanelCol"}
    ).json()
    occupied = {(c["row"], c["col"]) for c in payload["cells"] if c["ids"]}
    assert occupied == {("0", "0"), ("0", "1"), ("0", "2"), ("1", "0"), ("1", "1")}


def test_clusters_too_many_keys_400(client):
    bad = client.get(
        "/api/clusters",
        params={"row": "SamePanelRow,SamePanelCol,SharedMetric", "col": ""},
    )
    assert bad.status_code == 400


def test_scores_and_selection(client):
    scores = client.get("/api/scores").json()
    selection = client.get("/api/selection").json()
    for iid in selection["scoreOrder"]:
        card = scores[iid]
        assert card["priority"] == pytest.approx(
            0.3 * card["layoutScore"] + 0.7 * card["valueScore"], abs=1e-9
        )


def test_session_select_appends_story(client):
    sid = client.post("/api/sessions").json()["sessionId"]
    first = client.post(f"/api/sessions/{sid}/select", json={"insightId": "LC--DE"}).json()
    assert first["story"].endswith(
        "declining by 10% from 1,170 to 1,054."
    )
    assert first["component"]["insightId"] == "LC--DE"
    second = client.post(f"/api/sessions/{sid}/select", json={"insightId": "BCW-SK"}).json()
    assert second["selected"] == ["LC--DE", "BCW-SK"]
    # story equals the baseline concatenation in click order
    insights = {i["id"]: i["text"] for i in client.get("/api/insights").json()}
    expected = insights["LC--DE"] + ". " + insights["BCW-SK"] + "."
    assert second["story"] == expected


def test_session_duplicate_select_is_noop(client):
    sid = client.post("/api/sessions").json()["sessionId"]
    client.post(f"/api/sessions/{sid}/select", json={"insightId": "BCW-SK"})
    again = client.post(f"/api/sessions/{sid}/select", json={"insightId": "BCW-SK"}).json()
    assert again["selected"] == ["BCW-SK"]


def test_session_deselect_preserves_order(client):
    sid = client.post("/api/sessions").json()["sessionId"]
    for iid in ("LC--DE", "BCW-SK", "DCS-MX"):
        client.post(f"/api/sessions/{sid}/select", json={"insightId": iid})
    after = client.delete(f"/api/sessions/{sid}/select/BCW-SK").json()
    assert after["selected"] == ["LC--DE", "DCS-MX"]


def test_session_isolation(client):
    a = client.post("/api/sessions").json()["sessionId"]
    b = client.post("/api/sessions").json()["sessionId"]
    client.post(f"/api/sessions/{a}/select", json={"insightId": "BCW-SK"})
    assert client.get(f"/api/sessions/{b}").json()["selected"] == []


def test_unknown_ids_404(client):
    sid = client.post("/api/sessions").json()["sessionId"]
    assert client.post(f"/api/sessions/{sid}/select", json={"insightId": "ZZZ"}).status_code == 404
    assert client.get("/api/story/ZZZ").status_code == 404
    assert client.post("/api/sessions/badsid/select", json={"insightId": "BCW-SK"}).status_code == 404


def test_malformed_body_400(client):
    sid = client.post("/api/sessions").json()["sessionId"]
    response = client.post(f"/api/sessions/{sid}/select", json={"wrong": 1})
    assert response.status_code == 422  # FastAPI validation error for bad bodies


def test_summarize_endpoint_stub(client):
    payload = client.post("/api/summarize", json={}).json()
    assert payload["summary"]
    assert payload["grounding"]["unsupportedCount"] == 0
    dry = client.post("/api/summarize", json={"dryRun": True}).json()
    assert dry["summary"] == "" and dry["grounding"] is None


def test_root_serves_page(client):
    response = client.get("/")
    assert response.status_code == 200
    assert "insightloom" in response.text


def test_byte_stable_across_apps():
    bundle_a = run_pipeline(str(il.FIXTURE_PATH), PipelineOptions(stub=True))
    bundle_b = run_pipeline(str(il.FIXTURE_PATH), PipelineOptions(stub=True))
    for path in ("/api/insights", "/api/scores", "/api/selection", "/api/matrix"):
        ra = TestClient(build_app(bundle_a)).get(path)
        rb = TestClient(build_app(bundle_b)).get(path)
        assert ra.content == rb.content
