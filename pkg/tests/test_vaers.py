"""VAERS annual files: index parsing and the human-assisted import flow."""

from __future__ import annotations

import pytest

from pharmaharvest.adapters import vaers
from pharmaharvest.core_types import SourceId
from pharmaharvest.errors import DomDrift, NotAZip
from pharmaharvest.store import init_layout, sha256_hex

VAERS_BASE = "https://vaers.hhs.gov/data/datasets.html"


def test_list_files_from_fixture_index(sessions_dir):
    document = (sessions_dir / "vaers" / "index.html").read_text()
    files = vaers.list_vaers_files(document, VAERS_BASE)
    assert [f.year for f in files] == [2025, 2024, 2023]
    assert files[1].filename == "2024VAERSData.zip"
    assert files[1].url.startswith("https://vaers.hhs.gov/")
    assert "2024VAERSData.zip" in files[1].url


def test_list_files_single_entry():
    document = '<a href="eSubDownload/index.jsp?fn=2020VAERSData.zip">2020 VAERS Data</a>'
    files = vaers.list_vaers_files(document, VAERS_BASE)
    assert len(files) == 1 and files[0].year == 2020


def test_stripped_index_is_dom_drift():
    with pytest.raises(DomDrift):
        vaers.list_vaers_files("<html><p>no links here</p></html>", VAERS_BASE)


def test_year_bounds():
    with pytest.raises(ValueError):
        vaers.VaersFileRef(year=1989, filename="f", url="u", label="l")


def test_handoff_instruction_carries_url_and_destination(tmp_path, sessions_dir):
    document = (sessions_dir / "vaers" / "index.html").read_text()
    ref = next(f for f in vaers.list_vaers_files(document, VAERS_BASE)
               if f.year == 2024)
    layout = init_layout(tmp_path / "data")
    instruction = vaers.vaers_manual_handoff(ref, layout)
    assert instruction.url == ref.url
    assert instruction.expected_filename == "2024VAERSData.zip"
    assert instruction.dest_path.endswith("vaers/2024VAERSData.zip")
    assert "verification" in instruction.notes


def test_import_valid_zip_writes_manifest(tmp_path, fixtures_dir):
    layout = init_layout(tmp_path / "data")
    ref = vaers.VaersFileRef(year=2024, filename="2024VAERSData.zip",
                             url="https://vaers.hhs.gov/x", label="2024 VAERS Data")
    source_file = fixtures_dir / "vaers" / "2024VAERSData.zip"
    entry = vaers.import_external_file(layout, ref, source_file)
    assert entry.source == SourceId.VAERS
    assert entry.checksum == sha256_hex(source_file.read_bytes())
    stored = layout.root / entry.file_path
    assert stored.is_file()
    assert layout.verify().all_ok


def test_import_text_file_raises_not_a_zip(tmp_path, fixtures_dir):
    layout = init_layout(tmp_path / "data")
    ref = vaers.VaersFileRef(year=2024, filename="2024VAERSData.zip",
                             url="u", label="2024 VAERS Data")
    with pytest.raises(NotAZip):
        vaers.import_external_file(layout, ref, fixtures_dir / "vaers" / "not-a-zip.txt")
