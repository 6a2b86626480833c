"""Shared parsing helpers for the search adapters."""

from __future__ import annotations

import re
from datetime import datetime

from ..core_types import (
    CountRecord,
    DrugQuery,
    SourceId,
    normalize_drug_label,
    normalize_reaction_label,
)
from ..errors import DomDrift

_TERM_COUNT = re.compile(r"^(?P<term>.*\S)\s*\((?P<count>[\d,]+)\)$")


def split_term_count(text: str) -> tuple[str, int]:
    """Split ``"Dizziness (32)"`` into the term and its report count."""
    m = _TERM_COUNT.match(text.strip())
    if not m:
        raise DomDrift("term-count text", f"cannot parse {text!r}")
    return m.group("term").strip(), int(m.group("count").replace(",", ""))


def parse_count(text: str) -> int:
    return int(text.strip().replace(",", ""))


def require(node, selector: str, detail: str = ""):
    """select_one that raises DomDrift instead of returning None."""
    found = node.select_one(selector)
    if found is None:
        raise DomDrift(selector, detail)
    return found


def expect_source(query: DrugQuery, source: SourceId) -> None:
    if query.source != source:
        raise ValueError(f"query targets {query.source.value}, "
                         f"adapter handles {source.value}")


def make_record(*, source: SourceId, query: DrugQuery, soc: str | None,
                reaction: str, count: int, retrieved_at: datetime,
                adapter_version: str) -> CountRecord:
    normalized = normalize_drug_label(query.term)
    return CountRecord(
        source=source,
        drug=normalized,
        soc=normalize_reaction_label(soc) if soc else None,
        reaction=normalize_reaction_label(reaction),
        count=count,
        retrieved_at=retrieved_at,
        adapter_version=adapter_version,
        raw_drug=query.term if query.term != normalized else None,
    )
