"""Lareb: slow-loading results pane, then per-group expansion."""

from __future__ import annotations

from ..core_types import CountRecord, DrugQuery, SourceId
from ..errors import DomDrift, DrugNotFound
from . import SOURCES
from ._common import expect_source, make_record, parse_count, require

ADAPTER_VERSION = "1.0.0"

SEARCH_INPUT = "#lareb-search"
SEARCH_BUTTON = "#search-btn"
RESULTS = "#search-results"
NO_RESULTS = "#no-results"
GROUP = "div.reaction-group"
GROUP_TOGGLE = "button.group-toggle"
ROW = "tr.reaction-row"


def search_lareb(query: DrugQuery, driver) -> list[CountRecord]:
    """Search, wait for the results pane, then expand each reaction group."""
    expect_source(query, SourceId.LAREB)
    home = driver.load(SOURCES[SourceId.LAREB].base_url)
    require(home, SEARCH_INPUT, "search box missing from home page")

    loaded = driver.click(SEARCH_BUTTON)
    if loaded.select_one(NO_RESULTS) is not None:
        raise DrugNotFound("lareb", query.term)
    # The live site renders this pane only after the results request settles;
    # its absence in a snapshot means the page never finished loading.
    pane = require(loaded, RESULTS, "results pane never appeared")

    records: list[CountRecord] = []
    for group in pane.select(GROUP):
        toggle = group.select_one(GROUP_TOGGLE)
        if toggle is None or not toggle.get("id"):
            raise DomDrift(GROUP_TOGGLE, "group has no expandable toggle")
        soc = group.get("data-soc") or toggle.text()
        expanded = driver.click(f"#{toggle.get('id')}")
        expanded_group = _group_by_soc(expanded, soc)
        for row in expanded_group.select(ROW):
            cells = row.select("td")
            if len(cells) < 2:
                raise DomDrift(ROW, "reaction row lost its count column")
            records.append(make_record(
                source=SourceId.LAREB, query=query, soc=soc,
                reaction=cells[0].text(), count=parse_count(cells[1].text()),
                retrieved_at=driver.retrieved_at,
                adapter_version=ADAPTER_VERSION,
            ))
    return records


def _group_by_soc(doc, soc: str):
    for group in doc.select(GROUP):
        if group.get("data-soc") == soc:
            return group
    raise DomDrift(GROUP, f"expanded snapshot lost group {soc!r}")
