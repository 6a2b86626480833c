"""The HTTP API against replay fixtures and a local archive server."""

from __future__ import annotations

import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from pharmaharvest.fetch import PolitenessPolicy
from pharmaharvest.service import ServiceConfig, create_app

from conftest import SESSIONS


def wait_for(client, job_id, *, states=("done", "failed", "needs_human"),
             timeout=10.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        job = client.get(f"/api/jobs/{job_id}").json()
        if job["state"] in states:
            return job
        time.sleep(0.02)
    raise AssertionError(f"job {job_id} did not settle: {job}")


@pytest.fixture
def client(tmp_path):
    config = ServiceConfig(
        data_root=tmp_path / "data",
        replay_root=SESSIONS,
        default_driver="replay",
        policy=PolitenessPolicy(min_interhost_delay=0.01,
                                per_step_settle_delay=0.0,
                                user_agent="pharmaharvest-tests/0.1 (+local)"),
    )
    app = create_app(config)
    with TestClient(app) as test_client:
        yield test_client


def test_sources_lists_seven_in_stable_order(client):
    response = client.get("/api/sources")
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("application/json")
    ids = [s["id"] for s in response.json()]
    assert len(ids) == 7
    assert ids == sorted(ids)
    assert client.get("/api/sources").json() == response.json()


def test_search_job_reaches_done_with_published_counts(client):
    response = client.post("/api/search", json={"source": "dma", "term": "Alfuzosin"})
    assert response.status_code == 202
    job = wait_for(client, response.json()["id"])
    assert job["state"] == "done"
    counts = {r["reaction"]: r["count"] for r in job["result"]["records"]}
    assert counts == {"Dizziness": 32, "Syncope": 11, "Fatigue": 10, "Headache": 9}
    assert job["result"]["result_ref"]["file_path"].startswith("dma/")
    assert job["progress"] == 1.0


def test_search_on_bulk_source_is_400(client):
    response = client.post("/api/search", json={"source": "faers", "term": "x"})
    assert response.status_code == 400
    body = response.json()
    assert body["code"] == "bulk_source"
    assert set(body) == {"code", "message", "detail"}


def test_search_empty_term_is_422(client):
    response = client.post("/api/search", json={"source": "dma", "term": "   "})
    assert response.status_code == 422
    assert response.json()["code"] == "empty_term"


def test_search_unknown_source_is_400(client):
    response = client.post("/api/search", json={"source": "nope", "term": "x"})
    assert response.status_code == 400
    assert response.json()["code"] == "unknown_source"


def test_search_drug_not_found_fails_with_code(client):
    response = client.post("/api/search", json={"source": "dma", "term": "Zzzqx"})
    job = wait_for(client, response.json()["id"])
    assert job["state"] == "failed"
    assert job["error_code"] == "drug_not_found"


def test_unknown_job_is_404(client):
    response = client.get("/api/jobs/doesnotexist")
    assert response.status_code == 404
    assert response.json()["code"] == "unknown_job"


def test_faers_quarters_from_replay_fixture(client):
    response = client.get("/api/faers/quarters", params={"driver": "replay"})
    assert response.status_code == 200
    quarters = response.json()
    assert quarters[0]["label"] == "January - March 2025"
    assert quarters[0]["code"] == "2025Q1"
    assert len(quarters) == 3


def test_vaers_download_job_reaches_needs_human(client):
    response = client.post("/api/download", json={"source": "vaers", "year": 2024})
    assert response.status_code == 202
    job = wait_for(client, response.json()["id"])
    assert job["state"] == "needs_human"
    handoff = job["result"]["handoff"]
    assert "2024VAERSData.zip" in handoff["expected_filename"]
    assert handoff["url"].startswith("https://vaers.hhs.gov/")
    assert "verification" in handoff["notes"]


def test_download_on_search_source_is_400(client):
    response = client.post("/api/download", json={"source": "dma", "quarter": "x"})
    assert response.status_code == 400
    assert response.json()["code"] == "not_bulk"


def test_faers_download_roundtrip_against_local_server(tmp_path, http_server,
                                                       fixtures_dir):
    payload = (fixtures_dir / "faers" / "faers_ascii_2025q1.zip").read_bytes()
    index = (SESSIONS / "faers" / "index.html").read_text()
    http_server.routes["/robots.txt"] = None
    http_server.routes["/index.html"] = (200, "text/html", index.encode())
    http_server.routes["/content/Exports/faers_ascii_2025q1.zip"] = (
        200, "application/zip", payload)

    config = ServiceConfig(
        data_root=tmp_path / "data",
        replay_root=SESSIONS,
        default_driver="live",
        faers_index_url=http_server.url("/index.html"),
        policy=PolitenessPolicy(min_interhost_delay=0.01,
                                user_agent="pharmaharvest-tests/0.1 (+local)"),
    )
    with TestClient(create_app(config)) as client:
        response = client.post("/api/download",
                               json={"source": "faers", "quarter": "2025Q1"})
        job = wait_for(client, response.json()["id"])
        assert job["state"] == "done", job
        ref = job["result"]["result_ref"]
        stored = tmp_path / "data" / ref["file_path"]
        assert stored.read_bytes() == payload

        datasets = client.get("/api/datasets").json()
        assert [d["file_path"] for d in datasets] == [ref["file_path"]]

        # tabulate straight from the stored archive
        response = client.post("/api/tabulate", json={
            "datasets": [ref["file_path"]],
            "mode": "drug_based",
            "drugs": ["Atorvastatin", "Simvastatin", "Rosuvastatin"],
            "class_members": ["Atorvastatin", "Simvastatin", "Rosuvastatin"],
        })
        assert response.status_code == 200
        table = response.json()
        assert table["drug_labels"] == ["Atorvastatin", "Simvastatin", "Rosuvastatin"]
        assert len(table["other_drugs"]) == len(table["ae_labels"])


def test_tabulate_from_inline_records(client):
    records = [
        {"source": "dma", "drug": "Alfuzosin", "soc": None, "reaction": "Dizziness",
         "count": 32, "retrieved_at": "2025-06-02T09:15:00Z",
         "adapter_version": "1.0.0"},
        {"source": "dma", "drug": "Doxazosin", "soc": None, "reaction": "Dizziness",
         "count": 9, "retrieved_at": "2025-06-02T09:15:00Z",
         "adapter_version": "1.0.0"},
    ]
    response = client.post("/api/tabulate", json={"records": records})
    assert response.status_code == 200
    table = response.json()
    assert table["ae_labels"] == ["Dizziness"]
    assert table["cells"] == [[32, 9]]


def test_tabulate_empty_input_is_400(client):
    response = client.post("/api/tabulate", json={})
    assert response.status_code == 400
    assert response.json()["code"] == "no_input"


def test_tabulate_missing_dataset_is_404(client):
    response = client.post("/api/tabulate", json={"datasets": ["faers/nope.zip"]})
    assert response.status_code == 404
    assert response.json()["code"] == "missing_dataset"


def test_tabulate_class_missing_target_is_400(client):
    records = [
        {"source": "dma", "drug": "Alfuzosin", "soc": None, "reaction": "Dizziness",
         "count": 32, "retrieved_at": "2025-06-02T09:15:00Z",
         "adapter_version": "1.0.0"},
    ]
    response = client.post("/api/tabulate", json={
        "records": records, "mode": "drug_based",
        "drugs": ["Alfuzosin"], "class_members": ["Doxazosin"],
    })
    assert response.status_code == 400
    assert response.json()["code"] == "class_missing_target"


def test_config_get_put_roundtrip(client, tmp_path):
    new_root = tmp_path / "elsewhere"
    response = client.put("/api/config", json={"data_root": str(new_root)})
    assert response.status_code == 200
    assert client.get("/api/config").json() == {"data_root": str(new_root)}
    names = {p.name for p in new_root.iterdir() if p.is_dir()}
    assert len(names) == 7


def test_config_put_unwritable_is_409(client, tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("file, not dir")
    response = client.put("/api/config", json={"data_root": str(blocker)})
    assert response.status_code == 409
    assert response.json()["code"] == "not_writable"


def test_api_spec_document_is_served(client):
    response = client.get("/api/spec")
    assert response.status_code == 200
    assert "openapi" in response.json()


def test_jobs_processed_serially_in_submission_order(client):
    ids = []
    for term in ("Alfuzosin", "Doxazosin", "Prazosin"):
        response = client.post("/api/search", json={"source": "dma", "term": term})
        ids.append(response.json()["id"])
    jobs = [wait_for(client, job_id) for job_id in ids]
    assert all(j["state"] == "done" for j in jobs)
    listed = client.get("/api/jobs").json()
    assert [j["id"] for j in listed] == ids


def test_restart_with_same_root_relists_datasets(tmp_path):
    policy = PolitenessPolicy(min_interhost_delay=0.01,
                              user_agent="pharmaharvest-tests/0.1 (+local)")
    config = ServiceConfig(data_root=tmp_path / "data", replay_root=SESSIONS,
                           default_driver="replay", policy=policy)
    with TestClient(create_app(config)) as client:
        response = client.post("/api/search",
                               json={"source": "dma", "term": "Alfuzosin"})
        wait_for(client, response.json()["id"])
        before = client.get("/api/datasets").json()
    assert len(before) == 1

    with TestClient(create_app(config)) as client:
        after = client.get("/api/datasets").json()
    assert after == before


def test_shutdown_drains_running_job(tmp_path, monkeypatch):
    # The worker must finish the in-flight job before the service exits.
    import pharmaharvest.service as service_mod

    config = ServiceConfig(data_root=tmp_path / "data", replay_root=SESSIONS,
                           default_driver="replay")
    app = create_app(config)

    original = service_mod._State._run_search_job

    def slow_search(self, job):
        time.sleep(0.3)
        return original(self, job)

    monkeypatch.setattr(service_mod._State, "_run_search_job", slow_search)
    client = TestClient(app)
    with client:
        response = client.post("/api/search",
                               json={"source": "dma", "term": "Alfuzosin"})
        job_id = response.json()["id"]
        time.sleep(0.05)   # let the worker pick it up
    state = app.state.harvest
    job = state.jobs.get(job_id)
    assert job.state.value == "done"


def test_tabulate_csv_format_matches_class_layout(client):
    records = [
        {"source": "dma", "drug": "Alfuzosin", "soc": None, "reaction": "Dizziness",
         "count": 32, "retrieved_at": "2025-06-02T09:15:00Z",
         "adapter_version": "1.0.0"},
        {"source": "dma", "drug": "Doxazosin", "soc": None, "reaction": "Dizziness",
         "count": 9, "retrieved_at": "2025-06-02T09:15:00Z",
         "adapter_version": "1.0.0"},
    ]
    response = client.post("/api/tabulate?format=csv", json={
        "records": records, "mode": "drug_based",
        "drugs": ["Alfuzosin"], "class_members": ["Alfuzosin"],
    })
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/csv")
    lines = response.content.decode().splitlines()
    assert lines[0] == "PT,Alfuzosin,Other Drugs"
    assert lines[1] == "Dizziness,32,9"


def test_files_endpoint_serves_manifested_datasets(client):
    job = client.post("/api/search", json={"source": "dma", "term": "Alfuzosin"})
    done = wait_for(client, job.json()["id"])
    path = done["result"]["result_ref"]["file_path"]
    response = client.get(f"/api/files/{path}")
    assert response.status_code == 200
    assert b"Dizziness,32" in response.content
    assert client.get("/api/files/dma/nope.csv").status_code == 404
    # only manifested files are served, even if something else is on disk
    stray = client.app.state.harvest.layout.root / "dma" / "stray.csv"
    stray.write_text("x")
    assert client.get("/api/files/dma/stray.csv").status_code == 404
