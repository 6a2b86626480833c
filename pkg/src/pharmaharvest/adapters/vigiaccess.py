"""VigiAccess: grouped counts that require expanding each organ class in turn."""

from __future__ import annotations

from ..core_types import CountRecord, DrugQuery, SourceId
from ..errors import DomDrift, DrugNotFound
from . import SOURCES
from ._common import expect_source, make_record, require, split_term_count

ADAPTER_VERSION = "1.0.0"

SEARCH_INPUT = "#drug-search"
SEARCH_BUTTON = "#search-btn"
RESULTS = "#results"
NO_RESULTS = "#no-results"
GROUP = "div.soc-group"
GROUP_TOGGLE = "button.soc-toggle"
PT_ROW = "li.pt-row"


def search_vigiaccess(query: DrugQuery, driver) -> list[CountRecord]:
    """Expand every organ-class group one by one and collect its term counts."""
    expect_source(query, SourceId.VIGIACCESS)
    home = driver.load(SOURCES[SourceId.VIGIACCESS].base_url)
    require(home, SEARCH_INPUT, "search box missing from home page")

    results = driver.click(SEARCH_BUTTON)
    if results.select_one(NO_RESULTS) is not None:
        raise DrugNotFound("vigiaccess", query.term)
    container = require(results, RESULTS, "results pane missing after search")

    records: list[CountRecord] = []
    for group in container.select(GROUP):
        toggle = group.select_one(GROUP_TOGGLE)
        if toggle is None or not toggle.get("id"):
            raise DomDrift(GROUP_TOGGLE, "group has no expandable toggle")
        soc = group.get("data-soc") or split_term_count(toggle.text())[0]
        expanded = driver.click(f"#{toggle.get('id')}")
        expanded_group = _group_by_soc(expanded, soc)
        for item in expanded_group.select(PT_ROW):
            term, count = split_term_count(item.text())
            records.append(make_record(
                source=SourceId.VIGIACCESS, query=query, soc=soc,
                reaction=term, count=count,
                retrieved_at=driver.retrieved_at,
                adapter_version=ADAPTER_VERSION,
            ))
    return records


def _group_by_soc(doc, soc: str):
    for group in doc.select(GROUP):
        if group.get("data-soc") == soc:
            return group
    raise DomDrift(GROUP, f"expanded snapshot lost group {soc!r}")
