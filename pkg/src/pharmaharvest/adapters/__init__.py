"""One retriever per safety database, plus the source registry.

Each search adapter drives a ``DocumentDriver`` through the source's page
flow and parses the snapshots into count records. Bulk sources (FAERS,
VAERS) are handled by index parsing and archive downloads instead.
"""

from __future__ import annotations

from ..core_types import (
    AccessLevel,
    AccessMode,
    DrugQuery,
    NativeFormat,
    SourceDescriptor,
    SourceId,
)

_S = SourceDescriptor

SOURCES: dict[SourceId, SourceDescriptor] = {
    SourceId.DAEN: _S(
        id=SourceId.DAEN,
        display_name="Database of Adverse Event Notifications (Australia)",
        access_mode=AccessMode.SEARCH_AGGREGATE,
        access_level=AccessLevel.MEDIUM,
        native_format=NativeFormat.XLSX,
        base_url="https://www.tga.gov.au/safety/database-adverse-event-notifications-daen",
        robots_url="https://www.tga.gov.au/robots.txt",
    ),
    SourceId.DMA: _S(
        id=SourceId.DMA,
        display_name="Danish Medicines Agency interactive ADR overviews",
        access_mode=AccessMode.SEARCH_AGGREGATE,
        access_level=AccessLevel.LIMITED,
        native_format=NativeFormat.CSV,
        base_url=("https://laegemiddelstyrelsen.dk/en/sideeffects/"
                  "side-effects-of-medicines/interactive-adverse-drug-reaction-overviews/"),
        robots_url=None,
    ),
    SourceId.LAREB: _S(
        id=SourceId.LAREB,
        display_name="Netherlands Pharmacovigilance Centre Lareb",
        access_mode=AccessMode.SEARCH_AGGREGATE,
        access_level=AccessLevel.LIMITED,
        native_format=NativeFormat.CSV,
        base_url="https://www.lareb.nl/en/",
        robots_url=None,
    ),
    SourceId.MEDSAFE: _S(
        id=SourceId.MEDSAFE,
        display_name="New Zealand Medsafe suspected adverse reaction search",
        access_mode=AccessMode.SEARCH_AGGREGATE,
        access_level=AccessLevel.MEDIUM,
        native_format=NativeFormat.CSV,
        base_url="https://www.medsafe.govt.nz/SMARS/Default",
        robots_url="https://www.medsafe.govt.nz/robots.txt",
    ),
    SourceId.FAERS: _S(
        id=SourceId.FAERS,
        display_name="FDA Adverse Event Reporting System quarterly extracts",
        access_mode=AccessMode.BULK_QUARTERLY,
        access_level=AccessLevel.HIGH,
        native_format=NativeFormat.ZIP,
        base_url="https://fis.fda.gov/extensions/FPD-QDE-FAERS/FPD-QDE-FAERS.html",
        robots_url="https://www.fda.gov/robots.txt",
    ),
    SourceId.VAERS: _S(
        id=SourceId.VAERS,
        display_name="US Vaccine Adverse Event Reporting System annual files",
        access_mode=AccessMode.BULK_ANNUAL_HUMAN_ASSISTED,
        access_level=AccessLevel.HIGH,
        native_format=NativeFormat.ZIP,
        base_url="https://vaers.hhs.gov/data/datasets.html",
        robots_url=None,
    ),
    SourceId.VIGIACCESS: _S(
        id=SourceId.VIGIACCESS,
        display_name="WHO VigiAccess public counts",
        access_mode=AccessMode.SEARCH_AGGREGATE,
        access_level=AccessLevel.LIMITED,
        native_format=NativeFormat.CSV,
        base_url="https://www.vigiaccess.org/",
        robots_url=None,
    ),
}


def list_sources() -> list[SourceDescriptor]:
    """All seven supported databases, ordered by id."""
    return [SOURCES[sid] for sid in sorted(SOURCES, key=lambda s: s.value)]


def get_source(source: SourceId) -> SourceDescriptor:
    return SOURCES[source]


def run_search(query: DrugQuery, driver):
    """Dispatch a search to the right adapter; returns (records, export bytes)."""
    from . import daen, dma, lareb, medsafe, vigiaccess

    source = query.source
    if source == SourceId.DMA:
        return dma.search_dma(query, driver), None
    if source == SourceId.LAREB:
        return lareb.search_lareb(query, driver), None
    if source == SourceId.MEDSAFE:
        return medsafe.search_medsafe(query, driver), None
    if source == SourceId.VIGIACCESS:
        return vigiaccess.search_vigiaccess(query, driver), None
    if source == SourceId.DAEN:
        return daen.search_daen(query, driver)
    raise ValueError(f"{source.value} is a bulk source; use its download flow")
