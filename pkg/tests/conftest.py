"""Shared test fixtures: repo paths, a scriptable local HTTP server, clocks."""

from __future__ import annotations

import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
SESSIONS = FIXTURES / "sessions"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def sessions_dir() -> Path:
    return SESSIONS


class ScriptedServer:
    """Local HTTP server whose responses are scripted per path.

    ``routes[path]`` is either a (status, content_type, body) tuple served
    on every hit, or a list of such tuples consumed one per hit (the last
    one repeats). Every request lands in ``hits``.
    """

    def __init__(self):
        self.routes: dict[str, object] = {}
        self.hits: list[str] = []
        self._lock = threading.Lock()

        server = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self):   # noqa: N802 (stdlib naming)
                with server._lock:
                    server.hits.append(self.path)
                    spec = server.routes.get(self.path)
                    if isinstance(spec, list):
                        entry = spec.pop(0) if len(spec) > 1 else spec[0]
                    else:
                        entry = spec
                if entry is None:
                    self.send_response(404)
                    self.send_header("Content-Type", "text/plain")
                    self.end_headers()
                    self.wfile.write(b"not found")
                    return
                status, ctype, body = entry
                self.send_response(status)
                self.send_header("Content-Type", ctype)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *args):
                pass

        self.httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.port = self.httpd.server_address[1]
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)

    def url(self, path: str) -> str:
        return f"http://127.0.0.1:{self.port}{path}"

    def hit_count(self, path: str) -> int:
        with self._lock:
            return sum(1 for h in self.hits if h == path)

    def start(self) -> "ScriptedServer":
        self.thread.start()
        return self

    def stop(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()


@pytest.fixture
def http_server():
    server = ScriptedServer().start()
    yield server
    server.stop()


@pytest.fixture
def fast_policy():
    from pharmaharvest.fetch import PolitenessPolicy

    return PolitenessPolicy(min_interhost_delay=0.01, per_step_settle_delay=0.0,
                            max_retries=3, request_timeout=5.0,
                            user_agent="pharmaharvest-tests/0.1 (+local)")
