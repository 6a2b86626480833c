"""Polite network layer: robots compliance, per-host pacing, bounded retries.

Every request goes through the same contract: the host's robots rules are
checked first (and cached for the process), consecutive requests to one host
are spaced by a mandatory delay and never overlap, and transient failures
are retried a bounded number of times. Time is injected through a clock
interface so schedulers are testable on a virtual clock.
"""

from __future__ import annotations

import os
import re
import threading
import time as _time
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from urllib.parse import urlsplit

from .errors import ExhaustedRetries, FetchTimeout, RobotsDisallowed

DEFAULT_USER_AGENT = "pharmaharvest/0.1 (+https://pharmaharvest.invalid/contact)"
USER_AGENT_ENV_VAR = "PHARMAHARVEST_USER_AGENT"


def default_user_agent() -> str:
    return os.environ.get(USER_AGENT_ENV_VAR) or DEFAULT_USER_AGENT


# -- clocks --------------------------------------------------------------------

class SystemClock:
    """Wall time; the production clock."""

    def monotonic(self) -> float:
        return _time.monotonic()

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            _time.sleep(seconds)

    def now(self) -> datetime:
        return datetime.now(timezone.utc)


class VirtualClock:
    """Deterministic clock: sleeping advances time instantly."""

    def __init__(self, start: float = 0.0,
                 epoch: datetime = datetime(2025, 1, 1, tzinfo=timezone.utc)):
        self._t = start
        self._epoch = epoch
        self._lock = threading.Lock()

    def monotonic(self) -> float:
        with self._lock:
            return self._t

    def sleep(self, seconds: float) -> None:
        with self._lock:
            self._t += max(0.0, seconds)

    def advance(self, seconds: float) -> None:
        self.sleep(seconds)

    def now(self) -> datetime:
        return self._epoch + timedelta(seconds=self.monotonic())


# -- policy and results ----------------------------------------------------------

@dataclass(frozen=True)
class PolitenessPolicy:
    """Responsible-use knobs applied to all traffic.

    The defaults are deliberate choices; sources publish no numbers, only
    the requirement that access stays slow, serial, and identifiable.
    """

    min_interhost_delay: float = 2.0
    per_step_settle_delay: float = 1.0
    max_retries: int = 3
    request_timeout: float = 30.0
    user_agent: str = field(default_factory=default_user_agent)

    def __post_init__(self):
        if self.min_interhost_delay <= 0:
            raise ValueError("min_interhost_delay must be > 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    @property
    def agent_token(self) -> str:
        """Product token used for robots group matching."""
        return self.user_agent.split("/")[0].split()[0]


@dataclass(frozen=True)
class RobotsVerdict:
    allowed: bool
    matched_rule: str | None = None
    robots_present: bool = True

    def __post_init__(self):
        if not self.robots_present and not self.allowed:
            raise ValueError("absent robots.txt cannot disallow")


@dataclass(frozen=True)
class FetchResult:
    url: str
    status: int
    body: bytes
    content_type: str
    started_at: datetime
    finished_at: datetime
    attempt: int


# -- robots exclusion ------------------------------------------------------------

_RULE_FIELDS = {"allow", "disallow"}


def _rule_matches(rule_path: str, path: str) -> bool:
    # '*' is a wildcard, a trailing '$' anchors the end; otherwise prefix match.
    pattern = re.escape(rule_path).replace(r"\*", ".*")
    if pattern.endswith(r"\$"):
        pattern = pattern[:-2] + "$"
    return re.match(pattern, path) is not None


def _parse_groups(document: str) -> list[tuple[list[str], list[tuple[str, str]]]]:
    """Split a robots document into (agent tokens, rules) groups."""
    groups: list[tuple[list[str], list[tuple[str, str]]]] = []
    agents: list[str] = []
    rules: list[tuple[str, str]] = []
    expecting_agents = True
    for raw in document.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or ":" not in line:
            continue
        name, _, value = line.partition(":")
        name = name.strip().lower()
        value = value.strip()
        if name == "user-agent":
            if not expecting_agents and agents:
                groups.append((agents, rules))
                agents, rules = [], []
            agents.append(value.lower())
            expecting_agents = True
        elif name in _RULE_FIELDS:
            if agents:
                rules.append((name, value))
                expecting_agents = False
        # other fields (crawl-delay, sitemap, malformed) are skipped
    if agents:
        groups.append((agents, rules))
    return groups


def check_robots(robots_document: str | None, user_agent: str, path: str) -> RobotsVerdict:
    """Apply robots exclusion semantics to one path.

    The group with the most specific matching agent token wins ('*' only when
    nothing else matches); within it, the longest matching rule decides, with
    allow winning length ties. An absent document permits everything.
    """
    if not path.startswith("/"):
        raise ValueError(f"path must start with '/', got {path!r}")
    if robots_document is None:
        return RobotsVerdict(allowed=True, matched_rule=None, robots_present=False)

    token = user_agent.split("/")[0].split()[0].lower()
    groups = _parse_groups(robots_document)

    chosen_rules: list[tuple[str, str]] | None = None
    chosen_specificity = -1
    for agents, rules in groups:
        for agent in agents:
            if agent == "*":
                specificity = 0
            elif agent and agent in token:
                specificity = len(agent)
            else:
                continue
            if specificity > chosen_specificity:
                chosen_specificity = specificity
                chosen_rules = rules
    if chosen_rules is None:
        return RobotsVerdict(allowed=True, matched_rule=None, robots_present=True)

    best: tuple[int, int, str, str] | None = None   # (length, allow-priority, kind, path)
    for kind, rule_path in chosen_rules:
        if not rule_path:
            continue   # empty Disallow permits everything; empty Allow is a no-op
        if not _rule_matches(rule_path, path):
            continue
        key = (len(rule_path), 1 if kind == "allow" else 0)
        if best is None or key > (best[0], best[1]):
            best = (key[0], key[1], kind, rule_path)
    if best is None:
        return RobotsVerdict(allowed=True, matched_rule=None, robots_present=True)
    kind, rule_path = best[2], best[3]
    rule_text = f"{kind.capitalize()}: {rule_path}"
    return RobotsVerdict(allowed=(kind == "allow"), matched_rule=rule_text,
                         robots_present=True)


# -- per-host scheduling -----------------------------------------------------------

class HostLedger:
    """Single authoritative record of per-host schedule and in-flight state."""

    def __init__(self):
        self._lock = threading.Lock()
        self._next_free: dict[str, float] = {}
        self._inflight: dict[str, threading.Lock] = {}

    def inflight_lock(self, host: str) -> threading.Lock:
        with self._lock:
            return self._inflight.setdefault(host, threading.Lock())

    def reserve(self, host: str, now: float, min_delay: float) -> float:
        """Assign the next dispatch slot for ``host``; returns seconds to wait."""
        with self._lock:
            earliest = self._next_free.get(host, now)
            send_at = max(now, earliest)
            self._next_free[host] = send_at + min_delay
            return send_at - now

    def last_scheduled(self, host: str) -> float | None:
        with self._lock:
            nxt = self._next_free.get(host)
            return nxt


def acquire_slot(host: str, now: float, policy: PolitenessPolicy,
                 ledger: HostLedger) -> float:
    """Return how long to sleep so requests to ``host`` stay spaced apart."""
    return ledger.reserve(host, now, policy.min_interhost_delay)


# -- transports ---------------------------------------------------------------------

@dataclass(frozen=True)
class TransportResponse:
    status: int
    body: bytes
    content_type: str


class TransportTimeout(Exception):
    pass


class TransportFailure(Exception):
    """Connection-level failure; treated as transient."""


def requests_transport(url: str, timeout: float, headers: dict) -> TransportResponse:
    import requests

    try:
        resp = requests.get(url, timeout=timeout, headers=headers)
    except requests.Timeout as exc:
        raise TransportTimeout(str(exc)) from exc
    except requests.RequestException as exc:
        raise TransportFailure(str(exc)) from exc
    return TransportResponse(
        status=resp.status_code,
        body=resp.content,
        content_type=resp.headers.get("Content-Type", ""),
    )


# -- the fetcher ----------------------------------------------------------------------

class PoliteFetcher:
    """Issues HTTP GETs under the politeness contract.

    Thread-safe: the ledger serializes same-host traffic no matter how many
    threads call in. robots.txt is fetched at most once per host per process
    and the politeness delay applies to that fetch too.
    """

    def __init__(self, policy: PolitenessPolicy | None = None, *,
                 clock=None, transport=None, ledger: HostLedger | None = None):
        self.policy = policy or PolitenessPolicy()
        self.clock = clock or SystemClock()
        self.transport = transport or requests_transport
        self.ledger = ledger or HostLedger()
        self._robots_docs: dict[str, str | None] = {}
        self._robots_lock = threading.Lock()

    # robots ------------------------------------------------------------------

    def robots_verdict(self, url: str) -> RobotsVerdict:
        parts = urlsplit(url)
        host = parts.netloc
        doc = self._robots_document(parts.scheme, host)
        path = parts.path or "/"
        if parts.query:
            path += "?" + parts.query
        return check_robots(doc, self.policy.agent_token, path)

    def _robots_document(self, scheme: str, host: str) -> str | None:
        with self._robots_lock:
            if host in self._robots_docs:
                return self._robots_docs[host]
        robots_url = f"{scheme}://{host}/robots.txt"
        try:
            result = self._request(robots_url, host)
            doc = result.body.decode("utf-8", "replace") if result.status < 300 else None
        except (ExhaustedRetries, FetchTimeout):
            doc = None   # unreachable robots is treated as absent
        with self._robots_lock:
            self._robots_docs.setdefault(host, doc)
            return self._robots_docs[host]

    def prime_robots(self, host: str, document: str | None) -> None:
        """Seed the robots cache (used by tests and offline runs)."""
        with self._robots_lock:
            self._robots_docs[host] = document

    # fetching ----------------------------------------------------------------

    def fetch(self, url: str) -> FetchResult:
        parts = urlsplit(url)
        if parts.scheme not in ("http", "https"):
            raise ValueError(f"unsupported URL scheme in {url!r}")
        host = parts.netloc
        verdict = self.robots_verdict(url)
        if not verdict.allowed:
            raise RobotsDisallowed(url, verdict.matched_rule)
        return self._request(url, host)

    def _request(self, url: str, host: str) -> FetchResult:
        headers = {"User-Agent": self.policy.user_agent}
        attempts = self.policy.max_retries + 1
        last_status: int | None = None
        timed_out = False
        for attempt in range(1, attempts + 1):
            wait = acquire_slot(host, self.clock.monotonic(), self.policy, self.ledger)
            self.clock.sleep(wait)
            with self.ledger.inflight_lock(host):
                started = self.clock.now()
                try:
                    resp = self.transport(url, self.policy.request_timeout, headers)
                except TransportTimeout:
                    timed_out = True
                    last_status = None
                    continue
                except TransportFailure:
                    timed_out = False
                    last_status = None
                    continue
                finished = self.clock.now()
            last_status = resp.status
            if resp.status >= 500:
                continue   # transient; retry under the same pacing
            if resp.status >= 400:
                raise ExhaustedRetries(url, resp.status, attempt)
            return FetchResult(
                url=url, status=resp.status, body=resp.body,
                content_type=resp.content_type,
                started_at=started, finished_at=finished, attempt=attempt,
            )
        if timed_out and last_status is None:
            raise FetchTimeout(url, attempts)
        raise ExhaustedRetries(url, last_status, attempts)
