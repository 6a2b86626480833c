"""Medsafe: plain tabular results, no collapsible elements."""

from __future__ import annotations

from ..core_types import CountRecord, DrugQuery, SourceId
from ..errors import DrugNotFound
from . import SOURCES
from ._common import expect_source, make_record, parse_count, require

ADAPTER_VERSION = "1.0.0"

SEARCH_INPUT = "#ingredient-search"
SEARCH_BUTTON = "#search-btn"
NO_RESULTS = "#no-results"
TABLE = "table#reaction-table"


def search_medsafe(query: DrugQuery, driver) -> list[CountRecord]:
    expect_source(query, SourceId.MEDSAFE)
    home = driver.load(SOURCES[SourceId.MEDSAFE].base_url)
    require(home, SEARCH_INPUT, "search box missing from search page")

    results = driver.click(SEARCH_BUTTON)
    if results.select_one(NO_RESULTS) is not None:
        raise DrugNotFound("medsafe", query.term)
    table = require(results, TABLE, "results table missing")

    body = table.select_one("tbody") or table
    records: list[CountRecord] = []
    for row in body.select("tr"):
        cells = row.select("td")
        if len(cells) < 2:
            continue   # header or spacer rows
        records.append(make_record(
            source=SourceId.MEDSAFE, query=query, soc=None,
            reaction=cells[0].text(), count=parse_count(cells[1].text()),
            retrieved_at=driver.retrieved_at,
            adapter_version=ADAPTER_VERSION,
        ))
    return records
