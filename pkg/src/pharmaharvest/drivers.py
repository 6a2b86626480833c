"""Document drivers: how adapters obtain page snapshots.

Two implementations ship here. ``ReplayDriver`` replays a recorded session
directory and is fully deterministic: the same directory always yields the
same document sequence, with no network access at all. ``FetchDriver`` is a
static live driver built on the polite fetch layer: it can load pages and
follow links but cannot execute scripts, so sources that render content
dynamically will surface ``DomDrift`` under it. Browser-engine drivers are
deliberately out of scope; anything implementing the three-method protocol
can be plugged in.

Recorded session directory layout (a public fixture format):

    session.json        {"format_version": 1, "source": ..., "term": ...,
                         "recorded_at": RFC3339,
                         "steps": [{"step": N, "action": "load|click|export",
                                    "url"/"selector": ..., "file": NAME}]}
    NN_<action>.html    page snapshot after the action (load/click)
    NN_export.bin       exported bytes (export)

Steps are consumed strictly in order; an action that does not match the
next recorded step raises ``DomDrift``.
"""

from __future__ import annotations

import json
from datetime import datetime
from pathlib import Path
from typing import Protocol, runtime_checkable
from urllib.parse import urljoin

from .core_types import format_rfc3339, parse_rfc3339
from .errors import DomDrift
from .fetch import PoliteFetcher
from .htmldoc import Document

SESSION_FILE = "session.json"
SESSION_FORMAT_VERSION = 1


@runtime_checkable
class DocumentDriver(Protocol):
    def load(self, url: str) -> Document: ...

    def click(self, selector: str) -> Document: ...

    def export(self, selector: str) -> bytes: ...

    @property
    def retrieved_at(self) -> datetime: ...


class ReplayDriver:
    """Replays a recorded session; deterministic and offline by construction."""

    is_replay = True

    def __init__(self, session_dir: str | Path, *, clock=None, settle_delay: float = 0.0):
        self.session_dir = Path(session_dir)
        manifest_path = self.session_dir / SESSION_FILE
        if not manifest_path.is_file():
            raise DomDrift(SESSION_FILE, f"no recorded session at {self.session_dir}")
        manifest = json.loads(manifest_path.read_text("utf-8"))
        self.meta = {k: v for k, v in manifest.items() if k != "steps"}
        self._steps = manifest["steps"]
        self._cursor = 0
        self._current_url = ""
        self._recorded_at = parse_rfc3339(manifest["recorded_at"])
        self._clock = clock
        self._settle_delay = settle_delay

    @property
    def retrieved_at(self) -> datetime:
        return self._recorded_at

    def load(self, url: str) -> Document:
        step = self._next_step("load", url)
        self._current_url = url
        return Document(url, self._read_text(step))

    def click(self, selector: str) -> Document:
        step = self._next_step("click", selector)
        return Document(self._current_url, self._read_text(step))

    def export(self, selector: str) -> bytes:
        step = self._next_step("export", selector)
        path = self.session_dir / step["file"]
        if not path.is_file():
            raise DomDrift(selector, f"recorded export {step['file']} missing")
        return path.read_bytes()

    def _next_step(self, action: str, target: str) -> dict:
        if self._clock is not None and self._settle_delay:
            self._clock.sleep(self._settle_delay)
        if self._cursor >= len(self._steps):
            raise DomDrift(target, f"session ended before {action} step")
        step = self._steps[self._cursor]
        key = "url" if action == "load" else "selector"
        if step["action"] != action or step.get(key) != target:
            raise DomDrift(
                target,
                f"recorded step {self._cursor} is "
                f"{step['action']} {step.get('url') or step.get('selector')!r}",
            )
        self._cursor += 1
        return step

    def _read_text(self, step: dict) -> str:
        path = self.session_dir / step["file"]
        if not path.is_file():
            raise DomDrift(step.get("selector") or step.get("url") or step["file"],
                           f"recorded snapshot {step['file']} missing")
        return path.read_text("utf-8")


class SessionWriter:
    """Records a session directory in the replay format."""

    def __init__(self, session_dir: str | Path, *, source: str, term: str,
                 recorded_at: datetime):
        self.session_dir = Path(session_dir)
        self.session_dir.mkdir(parents=True, exist_ok=True)
        self.meta = {
            "format_version": SESSION_FORMAT_VERSION,
            "source": source,
            "term": term,
            "recorded_at": format_rfc3339(recorded_at),
        }
        self._steps: list[dict] = []

    def load(self, url: str, html: str) -> None:
        self._add("load", {"url": url}, html.encode("utf-8"), "html")

    def click(self, selector: str, html: str) -> None:
        self._add("click", {"selector": selector}, html.encode("utf-8"), "html")

    def export(self, selector: str, data: bytes) -> None:
        self._add("export", {"selector": selector}, data, "bin")

    def _add(self, action: str, target: dict, data: bytes, ext: str) -> None:
        n = len(self._steps)
        filename = f"{n:02d}_{action}.{ext}"
        (self.session_dir / filename).write_bytes(data)
        self._steps.append({"step": n, "action": action, **target, "file": filename})

    def finish(self) -> Path:
        manifest = dict(self.meta, steps=self._steps)
        path = self.session_dir / SESSION_FILE
        path.write_text(json.dumps(manifest, indent=2) + "\n", "utf-8")
        return path


class FetchDriver:
    """Static live driver: polite page loads and link following, no scripting."""

    is_replay = False

    def __init__(self, fetcher: PoliteFetcher | None = None):
        self.fetcher = fetcher or PoliteFetcher()
        self._current: Document | None = None

    @property
    def retrieved_at(self) -> datetime:
        return self.fetcher.clock.now()

    def _settle(self) -> None:
        self.fetcher.clock.sleep(self.fetcher.policy.per_step_settle_delay)

    def load(self, url: str) -> Document:
        self._settle()
        result = self.fetcher.fetch(url)
        self._current = Document(url, result.body.decode("utf-8", "replace"))
        return self._current

    def click(self, selector: str) -> Document:
        self._settle()
        target = self._resolve_href(selector)
        return self.load(target)

    def export(self, selector: str) -> bytes:
        self._settle()
        target = self._resolve_href(selector)
        return self.fetcher.fetch(target).body

    def _resolve_href(self, selector: str) -> str:
        if self._current is None:
            raise DomDrift(selector, "no page loaded")
        node = self._current.select_one(selector)
        if node is None:
            raise DomDrift(selector)
        href = node.get("href") or node.get("data-href")
        if not href:
            raise DomDrift(selector, "static driver can only follow links")
        return urljoin(self._current.url, href)
