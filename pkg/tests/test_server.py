import json

import pytest
from fastapi.testclient import TestClient

from conftest import DEMO
from safepipe.project import Manifest
from safepipe.server import create_app

CLEAN_SOURCE = (DEMO / "pipelines" / "titanic.sdspipe").read_text()


@pytest.fixture(scope="module")
def client():
    app = create_app(Manifest.load(DEMO / "safepipe.json"))
    # raise_server_exceptions=False lets the E060 handler produce the 400
    return TestClient(app, raise_server_exceptions=False)


def test_check_clean_source(client):
    response = client.post("/check", json={"source": CLEAN_SOURCE})
    assert response.status_code == 200
    assert response.json() == {"version": 1, "diagnostics": []}


def test_check_reports_fault_with_position(client):
    source = (DEMO / "faults" / "e031.sdspipe").read_text()
    response = client.post("/check", json={"source": source})
    assert response.status_code == 200
    (diag,) = response.json()["diagnostics"]
    assert diag["code"] == "E031"
    assert diag["startLine"] == 8


def test_check_missing_source_is_400(client):
    response = client.post("/check", json={"not_source": 1})
    assert response.status_code == 400
    assert response.json()["diagnostics"][0]["code"] == "E003"


def test_check_is_referentially_transparent(client):
    body = {"source": (DEMO / "faults" / "e040.sdspipe").read_text()}
    first = client.post("/check", json=body)
    second = client.post("/check", json=body)
    assert first.json() == second.json()


def test_from_text_returns_graph(client):
    response = client.post("/graph/from-text", json={"source": CLEAN_SOURCE})
    assert response.status_code == 200
    payload = response.json()
    graph = payload["graph"]
    assert graph["pipelineName"] == "predictTitanicSurvival"
    assert len(graph["nodes"]) == 9
    assert payload["diagnostics"] == []


def test_from_text_rejects_dirty_source(client):
    response = client.post(
        "/graph/from-text",
        json={"source": "pipeline p { x = loadDataset(1) }"})
    assert response.status_code == 400
    assert response.json()["diagnostics"][0]["code"] == "E020"


def test_text_graph_text_roundtrip(client):
    exported = client.post(
        "/graph/from-text", json={"source": CLEAN_SOURCE}).json()
    back = client.post("/graph/to-text", json={"graph": exported["graph"]})
    assert back.status_code == 200
    # graphs carry no comments, so the leading comment block is dropped
    assert back.json()["source"] == CLEAN_SOURCE.split("\n\n", 1)[1]


def test_to_text_rejects_malformed_graph(client):
    response = client.post("/graph/to-text", json={"graph": {"version": 1}})
    assert response.status_code == 400
    assert response.json()["diagnostics"][0]["code"] == "E074"


def test_to_text_rejects_cyclic_graph(client):
    graph = {
        "version": 1, "pipelineName": "p",
        "nodes": [
            {"id": "n0", "processName": "loadDataset", "kind": "function",
             "index": 0, "literals": {"name": "Titanic"}},
            {"id": "n1", "processName": "removeColumns", "kind": "method",
             "index": 1, "literals": {"columnNames": ["name"]}},
        ],
        "edges": [
            {"from": {"node": "n0", "port": "result"},
             "to": {"node": "n1", "port": "self"}, "varName": "a"},
            {"from": {"node": "n1", "port": "result"},
             "to": {"node": "n0", "port": "name"}, "varName": "b"},
        ],
        "outputs": [],
    }
    response = client.post("/graph/to-text", json={"graph": graph})
    assert response.status_code == 400
    assert "E071" in [d["code"] for d in response.json()["diagnostics"]]


def test_stubs_palette_shape(client):
    payload = client.get("/stubs").json()
    assert payload["diagnostics"] == []
    by_name = {e["name"]: e for e in payload["stubs"]}
    assert list(by_name) == sorted(by_name)
    tree = by_name["DecisionTree"]
    assert tree["kind"] == "class"
    assert tree["protocol"] == "fit predict*"
    fit = by_name["DecisionTree.fit"]
    assert fit["kind"] == "method"
    assert [p["name"] for p in fit["params"]] == ["features", "target"]
    split = by_name["Table.splitRows"]
    assert split["params"][0]["refined"] is True
    assert [r["name"] for r in split["results"]] == ["train", "test"]
    load = by_name["loadDataset"]
    assert load["schemaEffects"] == ["result = external(name)"]


def test_reload_rebuilds_snapshot(tmp_path):
    stubs = tmp_path / "stubs"
    stubs.mkdir()
    stub_file = stubs / "m.sdsstub"
    stub_file.write_text("fun one() -> result: Int\n")
    manifest = tmp_path / "safepipe.json"
    manifest.write_text(json.dumps({
        "name": "reloadable", "stubPaths": ["stubs"],
        "pipelinePaths": [], "datasets": {}}))
    client = TestClient(create_app(Manifest.load(manifest)))
    assert [e["name"] for e in client.get("/stubs").json()["stubs"]] == ["one"]
    stub_file.write_text("fun one() -> result: Int\n\nfun two()\n")
    # snapshot is immutable until an explicit reload
    assert [e["name"] for e in client.get("/stubs").json()["stubs"]] == ["one"]
    reload_response = client.post("/reload")
    assert reload_response.status_code == 200
    assert [e["name"] for e in client.get("/stubs").json()["stubs"]] == [
        "one", "two"]


def test_stub_diagnostics_surface_in_stubs_endpoint(tmp_path):
    stubs = tmp_path / "stubs"
    stubs.mkdir()
    (stubs / "bad.sdsstub").write_text("fun fun fun\n")
    manifest = tmp_path / "safepipe.json"
    manifest.write_text(json.dumps({
        "name": "broken", "stubPaths": ["stubs"],
        "pipelinePaths": [], "datasets": {}}))
    client = TestClient(create_app(Manifest.load(manifest)))
    payload = client.get("/stubs").json()
    assert any(d["code"] == "E003" for d in payload["diagnostics"])


def test_internal_failure_maps_to_e060(client, monkeypatch):
    import safepipe.server as server_mod

    def boom(source, snapshot):
        raise RuntimeError("boom")

    monkeypatch.setattr(server_mod, "check_source", boom)
    response = client.post("/check", json={"source": CLEAN_SOURCE})
    assert response.status_code == 400
    (diag,) = response.json()["diagnostics"]
    assert diag["code"] == "E060"
    assert "boom" in diag["message"]
