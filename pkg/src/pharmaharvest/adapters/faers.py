"""FAERS quarterly extracts: index listing, archive download, flat-file ETL.

The quarterly archives are dollar-delimited ASCII files. Counting joins the
DRUG and REAC files on report id and counts distinct reports per
(drug, reaction term) pair: one report contributes at most 1 to a cell even
when it lists the same drug on several lines.
"""

from __future__ import annotations

import re
import zipfile
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from io import BytesIO
from pathlib import Path
from urllib.parse import urljoin

from ..core_types import CountRecord, SourceId, normalize_drug_label, normalize_reaction_label
from ..errors import DomDrift, EmptyFile, MalformedExport
from ..htmldoc import parse_html

ADAPTER_VERSION = "1.0.0"

FAERS_FIRST_YEAR = 2004
VAERS_FIRST_YEAR = 1990


class Quarter(Enum):
    Q1 = 1
    Q2 = 2
    Q3 = 3
    Q4 = 4

    @property
    def months_label(self) -> str:
        return {
            Quarter.Q1: "January - March",
            Quarter.Q2: "April - June",
            Quarter.Q3: "July - September",
            Quarter.Q4: "October - December",
        }[self]


@dataclass(frozen=True)
class QuarterRef:
    """One downloadable quarterly archive."""

    year: int
    quarter: Quarter
    archive_url: str
    label: str

    def __post_init__(self):
        current_year = datetime.now(timezone.utc).year
        if not FAERS_FIRST_YEAR <= self.year <= current_year:
            raise ValueError(f"quarter year {self.year} outside "
                             f"[{FAERS_FIRST_YEAR}, {current_year}]")

    @property
    def code(self) -> str:
        """Compact form like ``2025Q1``."""
        return f"{self.year}Q{self.quarter.value}"

    def to_dict(self) -> dict:
        return {"year": self.year, "quarter": self.quarter.name,
                "archive_url": self.archive_url, "label": self.label}


_ARCHIVE_NAME = re.compile(r"faers_ascii_(\d{4})[qQ]([1-4])\.zip")
_LABEL_PARENS = re.compile(r"\(([^)]+)\)")


def list_faers_quarters(index_document: str, base_url: str = "") -> list[QuarterRef]:
    """Parse the quarterly index page into refs, newest first."""
    root = parse_html(index_document)
    refs: dict[str, QuarterRef] = {}
    for link in root.select("a"):
        href = link.get("href") or ""
        m = _ARCHIVE_NAME.search(href)
        if not m:
            continue
        year, qnum = int(m.group(1)), int(m.group(2))
        quarter = Quarter(qnum)
        text = link.text()
        parens = _LABEL_PARENS.search(text)
        label = parens.group(1).strip() if parens else f"{quarter.months_label} {year}"
        url = urljoin(base_url, href) if base_url else href
        refs.setdefault(f"{year}q{qnum}", QuarterRef(
            year=year, quarter=quarter, archive_url=url, label=label))
    if not refs:
        raise DomDrift("a[href*=faers_ascii]", "no quarterly archives on index page")
    return sorted(refs.values(), key=lambda r: (r.year, r.quarter.value), reverse=True)


def find_quarter(refs: list[QuarterRef], code: str) -> QuarterRef | None:
    code = code.strip().upper().replace(" ", "")
    for ref in refs:
        if ref.code == code:
            return ref
    return None


def download_archive(ref: QuarterRef, layout, fetcher):
    """Download one quarterly archive into the layout; idempotent on re-call.

    A manifested archive whose on-disk checksum still matches is returned
    without touching the network again; a conflicting file is an error, and
    a missing one is re-fetched.
    """
    from ..core_types import NativeFormat
    from ..errors import ChecksumMismatch

    existing = layout.find_entry(SourceId.FAERS, ref.label)
    if existing is not None:
        state = layout.entry_state(existing)
        if state == "ok":
            return existing
        if state == "corrupted":
            path = layout.root / existing.file_path
            raise ChecksumMismatch(path, existing.checksum,
                                   _file_sha256(path))
    result = fetcher.fetch(ref.archive_url)
    return layout.write_blob(
        SourceId.FAERS, ref.label, result.body, NativeFormat.ZIP,
        source_url=ref.archive_url, retrieved_at=result.finished_at,
    )


def _file_sha256(path: Path) -> str:
    import hashlib

    return hashlib.sha256(path.read_bytes()).hexdigest()


# -- flat files ------------------------------------------------------------------

@dataclass(frozen=True)
class DrugRow:
    primaryid: str
    drug_name: str
    role: str


@dataclass(frozen=True)
class ReacRow:
    primaryid: str
    pt: str


@dataclass(frozen=True)
class ParsedFile:
    rows: tuple
    skipped: int


def _split_header(content: str, required: tuple[str, ...]) -> tuple[list[str], dict[str, int], list[str]]:
    lines = content.splitlines()
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        raise EmptyFile("flat file has no header line")
    header = [h.strip().lower() for h in lines[0].split("$")]
    index = {name: i for i, name in enumerate(header)}
    missing = [c for c in required if c not in index]
    if missing:
        raise MalformedExport(f"flat file header lacks columns {missing}")
    return header, index, lines[1:]


def parse_faers_drug_file(content: str) -> ParsedFile:
    """Parse a DRUGyyQq file; malformed lines are skipped and counted."""
    header, index, lines = _split_header(content, ("primaryid", "drugname", "role_cod"))
    width = len(header)
    rows: list[DrugRow] = []
    skipped = 0
    for line in lines:
        if not line.strip():
            continue
        fields = line.split("$")
        if len(fields) != width:
            skipped += 1
            continue
        rows.append(DrugRow(
            primaryid=fields[index["primaryid"]].strip(),
            drug_name=fields[index["drugname"]].strip(),
            role=fields[index["role_cod"]].strip(),
        ))
    return ParsedFile(rows=tuple(rows), skipped=skipped)


def parse_faers_reac_file(content: str) -> ParsedFile:
    """Parse a REACyyQq file; duplicates are preserved (dedup happens in the join)."""
    header, index, lines = _split_header(content, ("primaryid", "pt"))
    width = len(header)
    rows: list[ReacRow] = []
    skipped = 0
    for line in lines:
        if not line.strip():
            continue
        fields = line.split("$")
        if len(fields) != width:
            skipped += 1
            continue
        rows.append(ReacRow(
            primaryid=fields[index["primaryid"]].strip(),
            pt=fields[index["pt"]].strip(),
        ))
    return ParsedFile(rows=tuple(rows), skipped=skipped)


def join_faers(drugs: ParsedFile | tuple, reactions: ParsedFile | tuple, *,
               retrieved_at: datetime | None = None) -> list[CountRecord]:
    """Inner-join DRUG and REAC rows on report id into per-pair report counts."""
    drug_rows = drugs.rows if isinstance(drugs, ParsedFile) else tuple(drugs)
    reac_rows = reactions.rows if isinstance(reactions, ParsedFile) else tuple(reactions)
    when = retrieved_at or datetime.now(timezone.utc)

    by_report_drugs: dict[str, set[str]] = {}
    for row in drug_rows:
        if row.drug_name:
            by_report_drugs.setdefault(row.primaryid, set()).add(
                normalize_drug_label(row.drug_name))
    by_report_pts: dict[str, set[str]] = {}
    for row in reac_rows:
        if row.pt:
            by_report_pts.setdefault(row.primaryid, set()).add(
                normalize_reaction_label(row.pt))

    reports: dict[tuple[str, str], set[str]] = {}
    for primaryid, drug_names in by_report_drugs.items():
        pts = by_report_pts.get(primaryid)
        if not pts:
            continue
        for drug in drug_names:
            for pt in pts:
                reports.setdefault((drug, pt), set()).add(primaryid)

    return [
        CountRecord(
            source=SourceId.FAERS, drug=drug, soc=None, reaction=pt,
            count=len(ids), retrieved_at=when, adapter_version=ADAPTER_VERSION,
        )
        for (drug, pt), ids in sorted(reports.items())
    ]


_DRUG_MEMBER = re.compile(r"(^|/)drug\w*\.txt$", re.IGNORECASE)
_REAC_MEMBER = re.compile(r"(^|/)reac\w*\.txt$", re.IGNORECASE)


def extract_quarter_records(archive: bytes | str | Path, *,
                            retrieved_at: datetime | None = None) -> list[CountRecord]:
    """Open a quarterly zip, locate the DRUG/REAC members, parse, and join."""
    if isinstance(archive, (str, Path)):
        data = Path(archive).read_bytes()
    else:
        data = archive
    try:
        zf = zipfile.ZipFile(BytesIO(data))
    except zipfile.BadZipFile as exc:
        raise MalformedExport(f"not a quarterly archive: {exc}") from exc
    with zf:
        drug_name = _find_member(zf, _DRUG_MEMBER)
        reac_name = _find_member(zf, _REAC_MEMBER)
        drugs = parse_faers_drug_file(zf.read(drug_name).decode("utf-8", "replace"))
        reactions = parse_faers_reac_file(zf.read(reac_name).decode("utf-8", "replace"))
    return join_faers(drugs, reactions, retrieved_at=retrieved_at)


def _find_member(zf: zipfile.ZipFile, pattern: re.Pattern) -> str:
    for name in zf.namelist():
        if pattern.search(name):
            return name
    raise MalformedExport(f"archive has no member matching {pattern.pattern}")
