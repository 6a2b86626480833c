"""Danish ADR overviews: one expand-all control, then a flat grouped table."""

from __future__ import annotations

from ..core_types import CountRecord, DrugQuery, SourceId
from ..errors import DomDrift, DrugNotFound
from . import SOURCES
from ._common import expect_source, make_record, parse_count, require

ADAPTER_VERSION = "1.0.0"

SEARCH_INPUT = "#medicine-search"
SEARCH_BUTTON = "#search-btn"
NO_RESULTS = "#no-results"
EXPAND_ALL = "#expand-all"
TABLE = "table#adr-table"


def search_dma(query: DrugQuery, driver) -> list[CountRecord]:
    expect_source(query, SourceId.DMA)
    home = driver.load(SOURCES[SourceId.DMA].base_url)
    require(home, SEARCH_INPUT, "search box missing from overview page")

    overview = driver.click(SEARCH_BUTTON)
    if overview.select_one(NO_RESULTS) is not None:
        raise DrugNotFound("dma", query.term)
    require(overview, EXPAND_ALL, "expand-all control missing")

    expanded = driver.click(EXPAND_ALL)
    table = require(expanded, TABLE, "reaction table missing after expanding")

    records: list[CountRecord] = []
    soc: str | None = None
    for row in table.select("tr"):
        cells = row.select("td")
        if len(cells) < 2:
            continue
        name, count_text = cells[0].text(), cells[1].text()
        if "soc-row" in row.classes():
            soc = name
        elif "pt-row" in row.classes():
            if soc is None:
                raise DomDrift("tr.soc-row", "term row appeared before any group row")
            records.append(make_record(
                source=SourceId.DMA, query=query, soc=soc,
                reaction=name, count=parse_count(count_text),
                retrieved_at=driver.retrieved_at,
                adapter_version=ADAPTER_VERSION,
            ))
    return records
