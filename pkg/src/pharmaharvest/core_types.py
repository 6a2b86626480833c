"""Shared domain vocabulary: sources, queries, count records, matrices, manifests.

All types here are immutable value objects and safe to share between threads.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Mapping, Sequence


class SourceId(Enum):
    """The seven supported safety databases. Serialized names are stable."""

    DAEN = "daen"
    DMA = "dma"
    LAREB = "lareb"
    MEDSAFE = "medsafe"
    FAERS = "faers"
    VAERS = "vaers"
    VIGIACCESS = "vigiaccess"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: str) -> "SourceId":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown source {name!r}; expected one of "
                             + ", ".join(s.value for s in cls)) from None


class AccessMode(Enum):
    SEARCH_AGGREGATE = "search_aggregate"
    BULK_QUARTERLY = "bulk_quarterly"
    BULK_ANNUAL_HUMAN_ASSISTED = "bulk_annual_human_assisted"


class AccessLevel(Enum):
    HIGH = "high"
    MEDIUM = "medium"
    LIMITED = "limited"


class NativeFormat(Enum):
    CSV = "csv"
    XLSX = "xlsx"
    ZIP = "zip"


@dataclass(frozen=True)
class SourceDescriptor:
    """Static metadata for one safety database."""

    id: SourceId
    display_name: str
    access_mode: AccessMode
    access_level: AccessLevel
    native_format: NativeFormat
    base_url: str
    robots_url: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id.value,
            "display_name": self.display_name,
            "access_mode": self.access_mode.value,
            "access_level": self.access_level.value,
            "native_format": self.native_format.value,
            "base_url": self.base_url,
            "robots_url": self.robots_url,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "SourceDescriptor":
        return cls(
            id=SourceId(d["id"]),
            display_name=d["display_name"],
            access_mode=AccessMode(d["access_mode"]),
            access_level=AccessLevel(d["access_level"]),
            native_format=NativeFormat(d["native_format"]),
            base_url=d["base_url"],
            robots_url=d.get("robots_url"),
        )


@dataclass(frozen=True)
class DrugQuery:
    """A user-entered drug or vaccine name aimed at one source."""

    term: str
    source: SourceId

    def __post_init__(self):
        if not self.term.strip():
            raise ValueError("query term must be nonempty")


_WS = re.compile(r"\s+")


def normalize_drug_label(raw: str) -> str:
    """Trim, collapse internal whitespace, and title-case a drug label.

    Sources disagree on casing (FAERS ships ATORVASTATIN, DMA ships
    Atorvastatin); the normalized form is what count records carry.
    """
    return _WS.sub(" ", raw.strip()).title()


def normalize_reaction_label(raw: str) -> str:
    """Trim and collapse whitespace; reaction terms keep the source's casing."""
    return _WS.sub(" ", raw.strip())


def format_rfc3339(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def parse_rfc3339(text: str) -> datetime:
    return datetime.fromisoformat(text.replace("Z", "+00:00")).astimezone(timezone.utc)


@dataclass(frozen=True)
class CountRecord:
    """One (source, drug, reaction) report-count observation with provenance.

    ``soc`` is optional: Medsafe and FAERS rows carry the reaction term only,
    while grouped displays always provide the organ-class heading.
    ``raw_drug`` preserves the source's verbatim label when it differs from
    the normalized ``drug``.
    """

    source: SourceId
    drug: str
    soc: str | None
    reaction: str
    count: int
    retrieved_at: datetime
    adapter_version: str
    raw_drug: str | None = None

    def __post_init__(self):
        if self.count < 0:
            raise ValueError(f"count must be >= 0, got {self.count}")
        if not self.reaction:
            raise ValueError("reaction must be nonempty")

    def to_dict(self) -> dict:
        return {
            "source": self.source.value,
            "drug": self.drug,
            "soc": self.soc,
            "reaction": self.reaction,
            "count": self.count,
            "retrieved_at": format_rfc3339(self.retrieved_at),
            "adapter_version": self.adapter_version,
            "raw_drug": self.raw_drug,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CountRecord":
        return cls(
            source=SourceId(d["source"]),
            drug=d["drug"],
            soc=d.get("soc"),
            reaction=d["reaction"],
            count=int(d["count"]),
            retrieved_at=parse_rfc3339(d["retrieved_at"]),
            adapter_version=d["adapter_version"],
            raw_drug=d.get("raw_drug"),
        )


#: Canonical CSV column order for CountRecord exports.
CSV_COLUMNS = ("source", "drug", "soc", "reaction", "count",
               "retrieved_at", "adapter_version")


def records_to_csv(records: Iterable[CountRecord]) -> bytes:
    """Serialize records to the canonical CSV schema (UTF-8, RFC 4180)."""
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            r.source.value,
            r.drug,
            "" if r.soc is None else r.soc,
            r.reaction,
            r.count,
            format_rfc3339(r.retrieved_at),
            r.adapter_version,
        ])
    return buf.getvalue().encode("utf-8")


def records_from_csv(data: bytes) -> list[CountRecord]:
    """Parse the canonical CSV schema back into records."""
    text = data.decode("utf-8")
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        return []
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header!r}")
    out = []
    for row in reader:
        if not row:
            continue
        source, drug, soc, reaction, count, retrieved_at, version = row
        out.append(CountRecord(
            source=SourceId(source),
            drug=drug,
            soc=soc or None,
            reaction=reaction,
            count=int(count),
            retrieved_at=parse_rfc3339(retrieved_at),
            adapter_version=version,
        ))
    return out


@dataclass(frozen=True)
class CountMatrix:
    """An I x J matrix of report counts with AE row labels and drug column labels.

    Row and column marginals and the grand total are computed once at
    construction, so per-pair contingency cells are O(1).
    """

    ae_labels: tuple[str, ...]
    drug_labels: tuple[str, ...]
    cells: tuple[tuple[int, ...], ...]
    row_totals: tuple[int, ...] = field(init=False, repr=False, compare=False)
    col_totals: tuple[int, ...] = field(init=False, repr=False, compare=False)
    grand_total: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.ae_labels)) != len(self.ae_labels):
            raise ValueError("duplicate AE labels")
        if len(set(self.drug_labels)) != len(self.drug_labels):
            raise ValueError("duplicate drug labels")
        if len(self.cells) != len(self.ae_labels):
            raise ValueError("row count does not match AE labels")
        ncols = len(self.drug_labels)
        col = [0] * ncols
        rows = []
        for r in self.cells:
            if len(r) != ncols:
                raise ValueError("row width does not match drug labels")
            s = 0
            for j, v in enumerate(r):
                if v < 0:
                    raise ValueError("cell counts must be >= 0")
                s += v
                col[j] += v
            rows.append(s)
        object.__setattr__(self, "row_totals", tuple(rows))
        object.__setattr__(self, "col_totals", tuple(col))
        object.__setattr__(self, "grand_total", sum(rows))

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.ae_labels), len(self.drug_labels))

    def ae_index(self, ae: str) -> int:
        try:
            return self.ae_labels.index(ae)
        except ValueError:
            from .errors import UnknownLabel
            raise UnknownLabel(ae) from None

    def drug_index(self, drug: str) -> int:
        try:
            return self.drug_labels.index(drug)
        except ValueError:
            from .errors import UnknownLabel
            raise UnknownLabel(drug) from None

    def cell(self, ae: str, drug: str) -> int:
        return self.cells[self.ae_index(ae)][self.drug_index(drug)]

    def to_dict(self) -> dict:
        return {
            "ae_labels": list(self.ae_labels),
            "drug_labels": list(self.drug_labels),
            "cells": [list(r) for r in self.cells],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CountMatrix":
        return cls(
            ae_labels=tuple(d["ae_labels"]),
            drug_labels=tuple(d["drug_labels"]),
            cells=tuple(tuple(int(v) for v in row) for row in d["cells"]),
        )


@dataclass(frozen=True)
class TwoByTwo:
    """A single 2x2 contingency table for one (AE, drug) pair.

    a: reports of the AE with the drug; b: the AE with comparator drugs;
    c: other AEs with the drug; d: other AEs with comparator drugs.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            if getattr(self, name) < 0:
                raise ValueError(f"cell {name} must be >= 0")

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}

    @classmethod
    def from_dict(cls, d: Mapping) -> "TwoByTwo":
        return cls(a=int(d["a"]), b=int(d["b"]), c=int(d["c"]), d=int(d["d"]))


@dataclass(frozen=True)
class ManifestEntry:
    """One persisted file: what was downloaded, when, from where."""

    source: SourceId
    query_or_quarter: str
    file_path: str           # relative to the layout root, posix separators
    format: NativeFormat
    byte_size: int
    checksum: str            # sha256 hex digest
    retrieved_at: datetime
    source_url: str

    def __post_init__(self):
        parts = self.file_path.split("/")
        if not parts or parts[0] != self.source.value:
            raise ValueError(
                f"file_path {self.file_path!r} must live under {self.source.value}/")

    def to_dict(self) -> dict:
        return {
            "source": self.source.value,
            "query_or_quarter": self.query_or_quarter,
            "file_path": self.file_path,
            "format": self.format.value,
            "byte_size": self.byte_size,
            "checksum": self.checksum,
            "retrieved_at": format_rfc3339(self.retrieved_at),
            "source_url": self.source_url,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ManifestEntry":
        return cls(
            source=SourceId(d["source"]),
            query_or_quarter=d["query_or_quarter"],
            file_path=d["file_path"],
            format=NativeFormat(d["format"]),
            byte_size=int(d["byte_size"]),
            checksum=d["checksum"],
            retrieved_at=parse_rfc3339(d["retrieved_at"]),
            source_url=d["source_url"],
        )


MANIFEST_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class DatasetManifest:
    """The full persisted-dataset record for one storage layout."""

    entries: tuple[ManifestEntry, ...] = ()
    schema_version: int = MANIFEST_SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "DatasetManifest":
        return cls(
            entries=tuple(ManifestEntry.from_dict(e) for e in d.get("entries", ())),
            schema_version=int(d.get("schema_version", MANIFEST_SCHEMA_VERSION)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "DatasetManifest":
        return cls.from_dict(json.loads(text))
