"""VAERS annual files: index listing plus a human-assisted download flow.

The download page is protected by a verification step that we do not try to
bypass. The adapter produces instructions for a person to complete the
download, then validates and manifests the file they bring back.
"""

from __future__ import annotations

import re
import zipfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from urllib.parse import urljoin

from ..core_types import NativeFormat, SourceId
from ..errors import DomDrift, NotAZip
from ..htmldoc import parse_html
from .faers import VAERS_FIRST_YEAR

ADAPTER_VERSION = "1.0.0"


@dataclass(frozen=True)
class VaersFileRef:
    """One downloadable annual data file."""

    year: int
    filename: str
    url: str
    label: str

    def __post_init__(self):
        current_year = datetime.now(timezone.utc).year
        if not VAERS_FIRST_YEAR <= self.year <= current_year:
            raise ValueError(f"year {self.year} outside "
                             f"[{VAERS_FIRST_YEAR}, {current_year}]")

    def to_dict(self) -> dict:
        return {"year": self.year, "filename": self.filename,
                "url": self.url, "label": self.label}


@dataclass(frozen=True)
class HandoffInstruction:
    """What a person must do to complete a protected download."""

    url: str
    expected_filename: str
    dest_path: str
    notes: str

    def to_dict(self) -> dict:
        return {"url": self.url, "expected_filename": self.expected_filename,
                "dest_path": self.dest_path, "notes": self.notes}


_DATA_FILE = re.compile(r"(\d{4})VAERSData\.zip")


def list_vaers_files(index_document: str, base_url: str = "") -> list[VaersFileRef]:
    """Parse the datasets page into annual file refs, newest first."""
    root = parse_html(index_document)
    refs: dict[int, VaersFileRef] = {}
    for link in root.select("a"):
        href = link.get("href") or ""
        m = _DATA_FILE.search(href)
        if not m:
            continue
        year = int(m.group(1))
        filename = f"{year}VAERSData.zip"
        url = urljoin(base_url, href) if base_url else href
        refs.setdefault(year, VaersFileRef(
            year=year, filename=filename, url=url,
            label=link.text() or f"{year} VAERS Data"))
    if not refs:
        raise DomDrift("a[href*=VAERSData]", "no annual data files on index page")
    return [refs[y] for y in sorted(refs, reverse=True)]


def vaers_manual_handoff(ref: VaersFileRef, layout) -> HandoffInstruction:
    """Instructions for completing the download by hand; never automated."""
    dest = layout.source_dir(SourceId.VAERS) / ref.filename
    return HandoffInstruction(
        url=ref.url,
        expected_filename=ref.filename,
        dest_path=str(dest),
        notes=("Open the URL in a browser, complete the verification step, "
               f"save the file, then import it with: pharmaharvest vaers import "
               f"--year {ref.year} FILE"),
    )


def import_external_file(layout, ref: VaersFileRef, path: str | Path):
    """Validate a hand-downloaded file and write its manifest entry."""
    path = Path(path)
    if not zipfile.is_zipfile(path):
        raise NotAZip(path)
    return layout.write_blob(
        SourceId.VAERS, ref.label, path.read_bytes(), NativeFormat.ZIP,
        source_url=ref.url, retrieved_at=datetime.now(timezone.utc),
        filename=ref.filename,
    )
