"""Timing harness: repeated retrievals summarized as mean/SD/median/quartiles.

Live numbers depend on network and page conditions and are reported, never
asserted. Quartiles use linear interpolation between order statistics (the
same convention as numpy's default); SD uses the sample (n-1) denominator
and is reported as 0 for a single repetition.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass
from typing import Callable, Sequence

from .core_types import DrugQuery, SourceId


@dataclass(frozen=True)
class TimingSummary:
    source: SourceId
    n: int
    mean_s: float
    sd_s: float
    median_s: float
    q1_s: float
    q3_s: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.sd_s < 0:
            raise ValueError("sd must be >= 0")
        if not (self.q1_s <= self.median_s <= self.q3_s):
            raise ValueError("quartiles out of order")

    def to_dict(self) -> dict:
        return {
            "source": self.source.value, "n": self.n,
            "mean_s": self.mean_s, "sd_s": self.sd_s,
            "median_s": self.median_s, "q1_s": self.q1_s, "q3_s": self.q3_s,
        }


def _quantile(sorted_xs: Sequence[float], q: float) -> float:
    # Linear interpolation between order statistics.
    pos = (len(sorted_xs) - 1) * q
    lo = math.floor(pos)
    hi = math.ceil(pos)
    frac = pos - lo
    return sorted_xs[lo] * (1.0 - frac) + sorted_xs[hi] * frac


def summarize(source: SourceId, durations: Sequence[float]) -> TimingSummary:
    """Summary statistics over one run's wall-clock durations."""
    if not durations:
        raise ValueError("at least one duration is required")
    xs = sorted(float(d) for d in durations)
    n = len(xs)
    return TimingSummary(
        source=source,
        n=n,
        mean_s=statistics.fmean(xs),
        sd_s=statistics.stdev(xs) if n > 1 else 0.0,
        median_s=_quantile(xs, 0.5),
        q1_s=_quantile(xs, 0.25),
        q3_s=_quantile(xs, 0.75),
    )


def time_retrieval(source: SourceId, term: str, repetitions: int,
                   driver_factory: Callable[[], object], *,
                   clock=None, runner=None) -> TimingSummary:
    """Run the source's adapter end to end ``repetitions`` times and time each.

    ``driver_factory`` must produce a fresh driver per repetition (a replayed
    session is consumed by a run). ``runner`` overrides the adapter dispatch,
    which lets tests inject synthetic workloads on a virtual clock.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    from .adapters import run_search
    from .fetch import SystemClock

    clock = clock or SystemClock()
    run = runner or (lambda query, driver: run_search(query, driver))

    durations = []
    completed = 0
    try:
        for _ in range(repetitions):
            driver = driver_factory()
            query = DrugQuery(term=term, source=source)
            started = clock.monotonic()
            run(query, driver)
            durations.append(clock.monotonic() - started)
            completed += 1
    except Exception as exc:
        # Partial runs are not silently summarized; mark how far we got.
        raise PartialRun(source, completed, repetitions) from exc
    return summarize(source, durations)


class PartialRun(Exception):
    """An adapter failed mid-benchmark; carries how many repetitions finished."""

    def __init__(self, source: SourceId, completed: int, requested: int):
        self.source = source
        self.completed = completed
        self.requested = requested
        super().__init__(f"{source.value}: run failed after "
                         f"{completed}/{requested} repetitions")


# -- report formatting ------------------------------------------------------------

TEXT_COLUMNS = ("Database", "Mean (SD)", "Median [Q1, Q3]")


def format_text(summaries: Sequence[TimingSummary]) -> str:
    """Fixed-width text table in the retrieval-time report layout."""
    rows = [
        (
            s.source.value,
            f"{s.mean_s:.2f} ({s.sd_s:.2f})",
            f"{s.median_s:.2f} [{s.q1_s:.2f}, {s.q3_s:.2f}]",
        )
        for s in summaries
    ]
    widths = [
        max(len(TEXT_COLUMNS[c]), *(len(r[c]) for r in rows)) if rows else len(TEXT_COLUMNS[c])
        for c in range(3)
    ]
    lines = [
        "  ".join(TEXT_COLUMNS[c].ljust(widths[c]) for c in range(3)).rstrip(),
        "  ".join("-" * widths[c] for c in range(3)).rstrip(),
    ]
    for r in rows:
        lines.append("  ".join(r[c].ljust(widths[c]) for c in range(3)).rstrip())
    return "\n".join(lines) + "\n"


def format_csv(summaries: Sequence[TimingSummary]) -> bytes:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["source", "n", "mean_s", "sd_s", "median_s", "q1_s", "q3_s"])
    for s in summaries:
        writer.writerow([s.source.value, s.n,
                         repr(s.mean_s), repr(s.sd_s), repr(s.median_s),
                         repr(s.q1_s), repr(s.q3_s)])
    return buf.getvalue().encode("utf-8")
