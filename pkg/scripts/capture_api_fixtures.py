#!/usr/bin/env python3
"""Capture JSON responses from the replay-backed service for the UI tests.

The frontend test suite mocks ``fetch`` with these exact payloads, so the
UI is exercised against what the service actually returns, not against
hand-written approximations. Re-run after changing the API surface.
"""

from __future__ import annotations

import json
import sys
import tempfile
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from pharmaharvest.fetch import PolitenessPolicy  # noqa: E402
from pharmaharvest.service import ServiceConfig, create_app  # noqa: E402

OUT = REPO / "frontend" / "tests" / "fixtures"
SESSIONS = REPO / "fixtures" / "sessions"


class _ArchiveHandler(BaseHTTPRequestHandler):
    payload = b""
    index = b""

    def do_GET(self):
        if self.path.endswith(".zip"):
            body, ctype = self.payload, "application/zip"
        elif self.path == "/index.html":
            body, ctype = self.index, "text/html"
        else:
            self.send_response(404)
            self.end_headers()
            return
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


def wait_done(client, job_id, states=("done", "failed", "needs_human")):
    for _ in range(400):
        job = client.get(f"/api/jobs/{job_id}").json()
        if job["state"] in states:
            return job
        time.sleep(0.02)
    raise RuntimeError(f"job never settled: {job}")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)

    _ArchiveHandler.payload = (REPO / "fixtures" / "faers" /
                               "faers_ascii_2025q1.zip").read_bytes()
    _ArchiveHandler.index = (SESSIONS / "faers" / "index.html").read_bytes()
    httpd = ThreadingHTTPServer(("127.0.0.1", 0), _ArchiveHandler)
    threading.Thread(target=httpd.serve_forever, daemon=True).start()
    port = httpd.server_address[1]

    with tempfile.TemporaryDirectory() as tmp:
        config = ServiceConfig(
            data_root=Path(tmp) / "data",
            replay_root=SESSIONS,
            default_driver="replay",
            faers_index_url=f"http://127.0.0.1:{port}/index.html",
            policy=PolitenessPolicy(min_interhost_delay=0.01,
                                    user_agent="pharmaharvest-capture/0.1 (+local)"),
        )
        captured: dict[str, object] = {}
        with TestClient(create_app(config)) as client:
            captured["sources"] = client.get("/api/sources").json()
            captured["config"] = client.get("/api/config").json()
            captured["quarters"] = client.get(
                "/api/faers/quarters", params={"driver": "replay"}).json()
            captured["vaers_files"] = client.get(
                "/api/vaers/files", params={"driver": "replay"}).json()

            queued = client.post("/api/search",
                                 json={"source": "dma", "term": "Alfuzosin"}).json()
            captured["search_job_queued"] = queued
            captured["search_job_done"] = wait_done(client, queued["id"])

            missing = client.post("/api/search",
                                  json={"source": "dma", "term": "Zzzqx"}).json()
            captured["search_job_not_found"] = wait_done(client, missing["id"])

            vaers = client.post("/api/download",
                                json={"source": "vaers", "year": 2024}).json()
            captured["vaers_job_needs_human"] = wait_done(client, vaers["id"])

            faers_dl = client.post(
                "/api/download", json={"source": "faers", "quarter": "2025Q1"},
                params={"driver": "live"}).json()
            captured["download_job_queued"] = faers_dl
            captured["download_job_done"] = wait_done(client, faers_dl["id"])

            captured["datasets"] = client.get("/api/datasets").json()

            records = captured["search_job_done"]["result"]["records"]
            for drug in ("Doxazosin", "Prazosin", "Tamsulosin", "Terazosin"):
                job = client.post("/api/search",
                                  json={"source": "dma", "term": drug}).json()
                done = wait_done(client, job["id"])
                records = records + done["result"]["records"]
            captured["tabulate_alpha_blockers"] = client.post(
                "/api/tabulate", json={"records": records}).json()

            error = client.post("/api/search", json={"source": "faers", "term": "x"})
            captured["error_bulk_source"] = error.json()

    httpd.shutdown()
    for name, payload in captured.items():
        (OUT / f"{name}.json").write_text(json.dumps(payload, indent=2) + "\n")
    print(f"captured {len(captured)} fixtures -> {OUT}")


if __name__ == "__main__":
    main()
