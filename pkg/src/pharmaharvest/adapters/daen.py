"""DAEN: the site prepares a spreadsheet export which we retrieve and parse.

Only the medicines database is covered; the medical-devices toggle is not
recorded or replayed.
"""

from __future__ import annotations

from .. import xlsxio
from ..core_types import CountRecord, DrugQuery, SourceId, normalize_reaction_label
from ..errors import DrugNotFound, MalformedExport
from . import SOURCES
from ._common import expect_source, make_record, require

ADAPTER_VERSION = "1.0.0"

SEARCH_INPUT = "#daen-search"
SEARCH_BUTTON = "#search-btn"
NO_RESULTS = "#no-results"
EXPORT_BUTTON = "#export-btn"


def search_daen(query: DrugQuery, driver) -> tuple[list[CountRecord], bytes]:
    """Search, wait for the export to be prepared, parse the aggregate sheet.

    Returns both the parsed records and the raw spreadsheet bytes so the
    caller can persist the export in its native format.
    """
    expect_source(query, SourceId.DAEN)
    home = driver.load(SOURCES[SourceId.DAEN].base_url)
    require(home, SEARCH_INPUT, "search box missing from search page")

    results = driver.click(SEARCH_BUTTON)
    if results.select_one(NO_RESULTS) is not None:
        raise DrugNotFound("daen", query.term)
    require(results, EXPORT_BUTTON, "export control never appeared")

    export = driver.export(EXPORT_BUTTON)
    records = parse_daen_export(export, query, retrieved_at=driver.retrieved_at)
    return records, export


def parse_daen_export(data: bytes, query: DrugQuery, *, retrieved_at) -> list[CountRecord]:
    from ..core_types import normalize_drug_label

    rows = xlsxio.read_rows(data)
    if not rows:
        raise MalformedExport("export sheet is empty")
    header = [normalize_reaction_label(str(c)).lower() for c in rows[0]]
    try:
        reaction_col = next(i for i, h in enumerate(header) if "reaction" in h)
        count_col = next(i for i, h in enumerate(header) if "number of" in h or h == "cases")
    except StopIteration:
        raise MalformedExport(f"unrecognized export columns {rows[0]!r}") from None
    medicine_col = next((i for i, h in enumerate(header) if "medicine" in h), None)

    records: list[CountRecord] = []
    for row in rows[1:]:
        if len(row) <= max(reaction_col, count_col):
            continue
        reaction = str(row[reaction_col]).strip()
        if not reaction:
            continue
        raw = None
        if medicine_col is not None and medicine_col < len(row):
            raw = str(row[medicine_col]).strip() or None
        records.append(CountRecord(
            source=SourceId.DAEN,
            drug=normalize_drug_label(query.term),
            soc=None,
            reaction=normalize_reaction_label(reaction),
            count=int(row[count_col]),
            retrieved_at=retrieved_at,
            adapter_version=ADAPTER_VERSION,
            raw_drug=raw,
        ))
    return records
