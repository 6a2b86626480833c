"""Persistence: per-database subfolders, native formats, a verifiable manifest.

Layout on disk:

    <root>/
      manifest.json        versioned record of every persisted file
      daen/ dma/ lareb/ medsafe/ faers/ vaers/ vigiaccess/

Search results are stored as canonical CSV, spreadsheet exports as .xlsx,
and whole-database archives as .zip, mirroring each source's native format.
Writes happen data-file-first, manifest-second, each atomically: a crash in
between leaves an orphan file, never a manifest entry without its file.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from filelock import FileLock

from .core_types import (
    CountRecord,
    DatasetManifest,
    ManifestEntry,
    NativeFormat,
    SourceId,
    records_to_csv,
)
from .errors import ChecksumMismatch, FormatMismatch, NotWritable

MANIFEST_NAME = "manifest.json"
LOCK_NAME = ".pharmaharvest.lock"


def slugify(text: str) -> str:
    """Lowercase ASCII with hyphens; used for stored filenames."""
    slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
    return slug or "untitled"


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass
class VerifyReport:
    ok: list[str] = field(default_factory=list)
    missing: list[str] = field(default_factory=list)
    corrupted: list[str] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return not self.missing and not self.corrupted

    def to_dict(self) -> dict:
        return {"ok": self.ok, "missing": self.missing, "corrupted": self.corrupted}


class Layout:
    """Handle on one storage root. One writer at a time (advisory lock)."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.manifest_path = self.root / MANIFEST_NAME
        self._lock = FileLock(str(self.root / LOCK_NAME))

    def source_dir(self, source: SourceId) -> Path:
        return self.root / source.value

    # -- manifest ----------------------------------------------------------

    def manifest(self) -> DatasetManifest:
        if not self.manifest_path.is_file():
            return DatasetManifest()
        return DatasetManifest.from_json(self.manifest_path.read_text("utf-8"))

    def _write_manifest(self, manifest: DatasetManifest) -> None:
        tmp = self.manifest_path.with_suffix(".json.tmp")
        tmp.write_text(manifest.to_json() + "\n", "utf-8")
        tmp.replace(self.manifest_path)

    def _append_entry(self, entry: ManifestEntry) -> None:
        manifest = self.manifest()
        self._write_manifest(DatasetManifest(
            entries=manifest.entries + (entry,),
            schema_version=manifest.schema_version,
        ))

    def find_entry(self, source: SourceId, query_or_quarter: str) -> ManifestEntry | None:
        """Most recent manifest entry for (source, query-or-quarter), if any."""
        found = None
        for entry in self.manifest().entries:
            if entry.source == source and entry.query_or_quarter == query_or_quarter:
                found = entry
        return found

    def entry_state(self, entry: ManifestEntry) -> str:
        """'ok', 'missing', or 'corrupted' for one manifested file."""
        path = self.root / entry.file_path
        if not path.is_file():
            return "missing"
        if sha256_hex(path.read_bytes()) != entry.checksum:
            return "corrupted"
        return "ok"

    # -- writes ------------------------------------------------------------

    def write_records(self, source: SourceId, query: str,
                      records: Iterable[CountRecord], *,
                      source_url: str | None = None) -> ManifestEntry:
        """Persist search results as canonical CSV under the source subfolder."""
        from .adapters import SOURCES

        descriptor = SOURCES[source]
        if descriptor.native_format != NativeFormat.CSV:
            raise FormatMismatch(
                f"{source.value} stores {descriptor.native_format.value}, not csv")
        records = list(records)
        data = records_to_csv(records)
        retrieved = records[0].retrieved_at if records else datetime.now(timezone.utc)
        with self._lock:
            filename = self._timestamped_name(source, slugify(query), "csv")
            return self._store(
                source=source, query_or_quarter=query, filename=filename,
                data=data, fmt=NativeFormat.CSV,
                source_url=source_url or descriptor.base_url,
                retrieved_at=retrieved,
            )

    def write_blob(self, source: SourceId, label: str, data: bytes,
                   fmt: NativeFormat, *, source_url: str,
                   retrieved_at: datetime | None = None,
                   filename: str | None = None) -> ManifestEntry:
        """Persist a native-format export (zip archive or spreadsheet).

        Blob filenames are stable per label, which makes re-downloads
        idempotent: same bytes are a no-op, different bytes are a conflict.
        """
        from .adapters import SOURCES

        descriptor = SOURCES[source]
        if fmt != descriptor.native_format:
            raise FormatMismatch(
                f"{source.value} stores {descriptor.native_format.value}, "
                f"got {fmt.value}")
        name = filename or f"{slugify(label)}.{fmt.value}"
        with self._lock:
            target = self.source_dir(source) / name
            if target.is_file():
                existing_sum = sha256_hex(target.read_bytes())
                new_sum = sha256_hex(data)
                if existing_sum != new_sum:
                    raise ChecksumMismatch(target, existing_sum, new_sum)
                entry = self.find_entry(source, label)
                if entry is not None and entry.checksum == existing_sum:
                    return entry
            return self._store(
                source=source, query_or_quarter=label, filename=name,
                data=data, fmt=fmt, source_url=source_url,
                retrieved_at=retrieved_at or datetime.now(timezone.utc),
            )

    def _store(self, *, source: SourceId, query_or_quarter: str, filename: str,
               data: bytes, fmt: NativeFormat, source_url: str,
               retrieved_at: datetime) -> ManifestEntry:
        rel_path = f"{source.value}/{filename}"
        target = self.root / rel_path
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            tmp = target.with_name(target.name + ".tmp")
            tmp.write_bytes(data)
            tmp.replace(target)
        except OSError as exc:
            raise NotWritable(f"cannot write {target}: {exc}") from exc
        entry = ManifestEntry(
            source=source, query_or_quarter=query_or_quarter,
            file_path=rel_path, format=fmt, byte_size=len(data),
            checksum=sha256_hex(data), retrieved_at=retrieved_at,
            source_url=source_url,
        )
        try:
            self._append_entry(entry)
        except OSError as exc:
            raise NotWritable(f"cannot update manifest: {exc}") from exc
        return entry

    def _timestamped_name(self, source: SourceId, slug: str, ext: str) -> str:
        stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%f")
        name = f"{slug}_{stamp}.{ext}"
        bump = 2
        while (self.source_dir(source) / name).exists():
            name = f"{slug}_{stamp}-{bump}.{ext}"
            bump += 1
        return name

    # -- verification --------------------------------------------------------

    def verify(self) -> VerifyReport:
        """Re-hash every manifested file; findings go in the report, not errors."""
        report = VerifyReport()
        for entry in self.manifest().entries:
            getattr(report, self.entry_state(entry)).append(entry.file_path)
        return report


def init_layout(root: str | Path) -> Layout:
    """Create (or re-open) a storage root with one subfolder per database."""
    layout = Layout(root)
    try:
        layout.root.mkdir(parents=True, exist_ok=True)
        probe = layout.root / ".write-probe"
        probe.write_bytes(b"")
        probe.unlink()
        for source in SourceId:
            layout.source_dir(source).mkdir(exist_ok=True)
        if not layout.manifest_path.is_file():
            layout._write_manifest(DatasetManifest())
    except OSError as exc:
        raise NotWritable(f"cannot initialize layout at {root}: {exc}") from exc
    return layout
