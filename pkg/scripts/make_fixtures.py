#!/usr/bin/env python3
"""Regenerate the bundled fixtures: recorded sessions, index pages, archives.

Everything written here is deterministic (fixed timestamps, seeded RNG) so
re-running the script reproduces the same bytes. The per-session
``expected.json`` files are the hand-extracted oracles the adapter tests
compare against; they are written straight from the ground-truth tables
below, independent of any parsing code.
"""

from __future__ import annotations

import json
import random
import sys
import zipfile
from io import BytesIO
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from pharmaharvest import xlsxio  # noqa: E402
from pharmaharvest.drivers import SessionWriter  # noqa: E402
from pharmaharvest.core_types import parse_rfc3339  # noqa: E402

FIXTURES = REPO / "fixtures"
ZIP_STAMP = (2025, 4, 1, 0, 0, 0)


def _zip_bytes(members: dict[str, bytes]) -> bytes:
    out = BytesIO()
    with zipfile.ZipFile(out, "w", zipfile.ZIP_DEFLATED) as zf:
        for name, data in members.items():
            info = zipfile.ZipInfo(name, date_time=ZIP_STAMP)
            info.compress_type = zipfile.ZIP_DEFLATED
            zf.writestr(info, data)
    return out.getvalue()


def _page(title: str, body: str) -> str:
    return (
        "<!DOCTYPE html>\n"
        f"<html><head><meta charset=\"utf-8\"><title>{title}</title></head>\n"
        f"<body>\n{body}\n</body></html>\n"
    )


def _expected(path: Path, records: list[dict]) -> None:
    path.write_text(json.dumps(records, indent=2) + "\n", "utf-8")


# ---------------------------------------------------------------------------
# DMA: five alpha-blockers with the published per-term counts, grouped by SOC
# ---------------------------------------------------------------------------

DMA_URL = ("https://laegemiddelstyrelsen.dk/en/sideeffects/"
           "side-effects-of-medicines/interactive-adverse-drug-reaction-overviews/")
DMA_RECORDED_AT = "2025-06-02T09:15:00Z"

NERVOUS = "Nervous system disorders"
GENERAL = "General disorders and administration site conditions"

# (soc, reaction) -> count, in page display order
DMA_DATA = {
    "Alfuzosin": [(NERVOUS, "Dizziness", 32), (NERVOUS, "Syncope", 11),
                  (NERVOUS, "Headache", 9), (GENERAL, "Fatigue", 10)],
    "Doxazosin": [(NERVOUS, "Dizziness", 9), (NERVOUS, "Syncope", 5),
                  (NERVOUS, "Headache", 10), (GENERAL, "Fatigue", 6)],
    "Prazosin": [(NERVOUS, "Dizziness", 3), (NERVOUS, "Syncope", 7),
                 (NERVOUS, "Headache", 10), (GENERAL, "Fatigue", 8)],
    "Tamsulosin": [(NERVOUS, "Dizziness", 23), (NERVOUS, "Syncope", 6),
                   (NERVOUS, "Headache", 7), (GENERAL, "Fatigue", 5)],
    "Terazosin": [(NERVOUS, "Dizziness", 2), (NERVOUS, "Syncope", 1),
                  (NERVOUS, "Headache", 1), (GENERAL, "Fatigue", 2)],
}

DMA_SEARCH_PAGE = _page("Interactive adverse drug reaction overviews", """
<main>
  <h1>Interactive adverse drug reaction overviews</h1>
  <form id="adr-search-form" action="/en/sideeffects/search" method="get">
    <label for="medicine-search">Search for a medicine</label>
    <input id="medicine-search" name="medicine" type="text"
           placeholder="Active substance or product name">
    <button id="search-btn" type="submit">Search</button>
  </form>
</main>""")


def _dma_table(drug: str, expanded: bool) -> str:
    groups: dict[str, list[tuple[str, int]]] = {}
    for soc, pt, count in DMA_DATA[drug]:
        groups.setdefault(soc, []).append((pt, count))
    rows = []
    for soc, pts in groups.items():
        total = sum(c for _, c in pts)
        rows.append(f'      <tr class="soc-row"><td>{soc}</td><td>{total}</td></tr>')
        if expanded:
            for pt, count in pts:
                rows.append(f'      <tr class="pt-row"><td>{pt}</td><td>{count}</td></tr>')
    body = "\n".join(rows)
    total_reports = sum(c for _, _, c in DMA_DATA[drug])
    return f"""
<main>
  <h1>Adverse drug reaction overview: {drug}</h1>
  <p class="report-total">{total_reports} reports in total</p>
  <button id="expand-all">Expand all</button>
  <table id="adr-table">
    <thead><tr><th>Reaction</th><th>Number of reports</th></tr></thead>
    <tbody>
{body}
    </tbody>
  </table>
</main>"""


def make_dma_sessions() -> None:
    for drug, rows in DMA_DATA.items():
        session_dir = FIXTURES / "sessions" / "dma" / drug.lower()
        writer = SessionWriter(session_dir, source="dma", term=drug,
                               recorded_at=parse_rfc3339(DMA_RECORDED_AT))
        writer.load(DMA_URL, DMA_SEARCH_PAGE)
        writer.click("#search-btn", _page(f"ADR overview: {drug}", _dma_table(drug, False)))
        writer.click("#expand-all", _page(f"ADR overview: {drug}", _dma_table(drug, True)))
        writer.finish()
        _expected(session_dir / "expected.json", [
            {"source": "dma", "drug": drug, "soc": soc, "reaction": pt,
             "count": count, "retrieved_at": DMA_RECORDED_AT,
             "adapter_version": "1.0.0", "raw_drug": None}
            for soc, pt, count in rows
        ])

    # searched term that matches nothing
    nodrug = FIXTURES / "sessions" / "dma" / "zzzqx"
    writer = SessionWriter(nodrug, source="dma", term="Zzzqx",
                           recorded_at=parse_rfc3339(DMA_RECORDED_AT))
    writer.load(DMA_URL, DMA_SEARCH_PAGE)
    writer.click("#search-btn", _page("No results", """
<main>
  <div id="no-results">No medicines matched your search.</div>
</main>"""))
    writer.finish()

    # a result page whose table has no rows at all
    empty = FIXTURES / "sessions" / "dma" / "emptytable"
    writer = SessionWriter(empty, source="dma", term="Emptytable",
                           recorded_at=parse_rfc3339(DMA_RECORDED_AT))
    writer.load(DMA_URL, DMA_SEARCH_PAGE)
    collapsed = _page("ADR overview", """
<main>
  <button id="expand-all">Expand all</button>
  <table id="adr-table">
    <thead><tr><th>Reaction</th><th>Number of reports</th></tr></thead>
    <tbody>
    </tbody>
  </table>
</main>""")
    writer.click("#search-btn", collapsed)
    writer.click("#expand-all", collapsed)
    writer.finish()
    _expected(empty / "expected.json", [])


# ---------------------------------------------------------------------------
# VigiAccess: organ-class groups expanded one by one
# ---------------------------------------------------------------------------

VIGI_URL = "https://www.vigiaccess.org/"
VIGI_RECORDED_AT = "2025-06-03T11:40:00Z"

VIGI_DATA = [
    ("Gastrointestinal disorders", [("Nausea", 8123), ("Diarrhoea", 6210)]),
    ("Musculoskeletal and connective tissue disorders",
     [("Myalgia", 14321), ("Arthralgia", 9876), ("Muscle spasms", 4321)]),
    ("Nervous system disorders", [("Headache", 7654), ("Dizziness", 6543)]),
]

VIGI_HOME = _page("VigiAccess", """
<main>
  <p>Search aggregated counts of reported suspected adverse reactions.</p>
  <form id="vigi-search-form">
    <input id="drug-search" type="text" placeholder="Medicinal product name">
    <button id="search-btn" type="submit">Search database</button>
  </form>
</main>""")


def _vigi_results(term: str, expanded_index: int | None) -> str:
    sections = []
    for k, (soc, pts) in enumerate(VIGI_DATA):
        total = sum(c for _, c in pts)
        items = ""
        if expanded_index == k:
            items = "\n" + "\n".join(
                f'      <li class="pt-row">{pt} ({count})</li>' for pt, count in pts
            ) + "\n    "
        sections.append(f"""  <div class="soc-group" data-soc="{soc}">
    <button class="soc-toggle" id="soc-{k}">{soc} ({total})</button>
    <ul class="pt-list">{items}</ul>
  </div>""")
    body = "\n".join(sections)
    return _page("VigiAccess results", f"""
<main>
  <h2>Reported potential side effects: {term}</h2>
  <section id="results">
{body}
  </section>
</main>""")


def make_vigiaccess_sessions() -> None:
    term = "Atorvastatin"
    session_dir = FIXTURES / "sessions" / "vigiaccess" / term.lower()
    writer = SessionWriter(session_dir, source="vigiaccess", term=term,
                           recorded_at=parse_rfc3339(VIGI_RECORDED_AT))
    writer.load(VIGI_URL, VIGI_HOME)
    writer.click("#search-btn", _vigi_results(term, None))
    for k in range(len(VIGI_DATA)):
        writer.click(f"#soc-{k}", _vigi_results(term, k))
    writer.finish()
    _expected(session_dir / "expected.json", [
        {"source": "vigiaccess", "drug": term, "soc": soc, "reaction": pt,
         "count": count, "retrieved_at": VIGI_RECORDED_AT,
         "adapter_version": "1.0.0", "raw_drug": None}
        for soc, pts in VIGI_DATA for pt, count in pts
    ])

    nodrug = FIXTURES / "sessions" / "vigiaccess" / "zzzqx"
    writer = SessionWriter(nodrug, source="vigiaccess", term="Zzzqx",
                           recorded_at=parse_rfc3339(VIGI_RECORDED_AT))
    writer.load(VIGI_URL, VIGI_HOME)
    writer.click("#search-btn", _page("VigiAccess results", """
<main>
  <div id="no-results">No medicinal product matches the search.</div>
</main>"""))
    writer.finish()


# ---------------------------------------------------------------------------
# Lareb: slow results pane, then per-group expansion
# ---------------------------------------------------------------------------

LAREB_URL = "https://www.lareb.nl/en/"
LAREB_RECORDED_AT = "2025-06-04T08:05:00Z"

LAREB_DATA = [
    ("Gastrointestinal disorders", [("Nausea", 12), ("Abdominal pain", 5)]),
    ("Musculoskeletal and connective tissue disorders",
     [("Myalgia", 48), ("Muscle spasms", 9)]),
    ("General disorders and administration site conditions", [("Fatigue", 17)]),
]

LAREB_HOME = _page("Lareb", """
<main>
  <h1>Reported side effects</h1>
  <form id="lareb-search-form">
    <input id="lareb-search" type="text" placeholder="Medicine or vaccine">
    <button id="search-btn" type="submit">Search</button>
  </form>
</main>""")


def _lareb_results(expanded_index: int | None, total: int,
                   groups=LAREB_DATA) -> str:
    sections = []
    for k, (soc, pts) in enumerate(groups):
        rows = ""
        if expanded_index == k:
            rows = "\n" + "\n".join(
                f'        <tr class="reaction-row"><td>{pt}</td><td>{count}</td></tr>'
                for pt, count in pts
            ) + "\n      "
        sections.append(f"""    <div class="reaction-group" data-soc="{soc}">
      <button class="group-toggle" id="group-{k}">{soc}</button>
      <table class="group-table"><tbody>{rows}</tbody></table>
    </div>""")
    body = "\n".join(sections)
    return _page("Lareb search results", f"""
<main>
  <div id="search-results">
    <p class="total-reports">{total} reports</p>
{body}
  </div>
</main>""")


def make_lareb_sessions() -> None:
    term = "Atorvastatin"
    total = sum(c for _, pts in LAREB_DATA for _, c in pts)
    session_dir = FIXTURES / "sessions" / "lareb" / term.lower()
    writer = SessionWriter(session_dir, source="lareb", term=term,
                           recorded_at=parse_rfc3339(LAREB_RECORDED_AT))
    writer.load(LAREB_URL, LAREB_HOME)
    writer.click("#search-btn", _lareb_results(None, total))
    for k in range(len(LAREB_DATA)):
        writer.click(f"#group-{k}", _lareb_results(k, total))
    writer.finish()
    _expected(session_dir / "expected.json", [
        {"source": "lareb", "drug": term, "soc": soc, "reaction": pt,
         "count": count, "retrieved_at": LAREB_RECORDED_AT,
         "adapter_version": "1.0.0", "raw_drug": None}
        for soc, pts in LAREB_DATA for pt, count in pts
    ])

    zero = FIXTURES / "sessions" / "lareb" / "zeroreports"
    writer = SessionWriter(zero, source="lareb", term="Zeroreports",
                           recorded_at=parse_rfc3339(LAREB_RECORDED_AT))
    writer.load(LAREB_URL, LAREB_HOME)
    writer.click("#search-btn", _lareb_results(None, 0, groups=[]))
    writer.finish()
    _expected(zero / "expected.json", [])

    # the page that never finishes loading its results pane
    stuck = FIXTURES / "sessions" / "lareb" / "neverloads"
    writer = SessionWriter(stuck, source="lareb", term="Neverloads",
                           recorded_at=parse_rfc3339(LAREB_RECORDED_AT))
    writer.load(LAREB_URL, LAREB_HOME)
    writer.click("#search-btn", _page("Lareb search results", """
<main>
  <div class="loading-spinner" aria-busy="true">Loading results…</div>
</main>"""))
    writer.finish()


# ---------------------------------------------------------------------------
# Medsafe: flat table, no collapsible elements
# ---------------------------------------------------------------------------

MEDSAFE_URL = "https://www.medsafe.govt.nz/SMARS/Default"
MEDSAFE_RECORDED_AT = "2025-06-05T21:30:00Z"

MEDSAFE_DATA = [("Myalgia", 34), ("Rhabdomyolysis", 7), ("Hepatitis", 4), ("Nausea", 11)]

MEDSAFE_HOME = _page("Suspected Medicine Adverse Reaction Search", """
<main>
  <h1>Suspected Medicine Adverse Reaction Search</h1>
  <form id="smars-form">
    <input id="ingredient-search" type="text" placeholder="Active ingredient">
    <button id="search-btn" type="submit">Search</button>
  </form>
</main>""")


def _medsafe_table(rows: list[tuple[str, int]]) -> str:
    body = "\n".join(
        f'      <tr><td>{pt}</td><td>{count}</td></tr>' for pt, count in rows
    )
    return _page("Search results", f"""
<main>
  <table id="reaction-table">
    <thead><tr><th>Suspected reaction (MedDRA preferred term)</th>
               <th>Number of reports</th></tr></thead>
    <tbody>
{body}
    </tbody>
  </table>
</main>""")


def make_medsafe_sessions() -> None:
    term = "Atorvastatin"
    session_dir = FIXTURES / "sessions" / "medsafe" / term.lower()
    writer = SessionWriter(session_dir, source="medsafe", term=term,
                           recorded_at=parse_rfc3339(MEDSAFE_RECORDED_AT))
    writer.load(MEDSAFE_URL, MEDSAFE_HOME)
    writer.click("#search-btn", _medsafe_table(MEDSAFE_DATA))
    writer.finish()
    _expected(session_dir / "expected.json", [
        {"source": "medsafe", "drug": term, "soc": None, "reaction": pt,
         "count": count, "retrieved_at": MEDSAFE_RECORDED_AT,
         "adapter_version": "1.0.0", "raw_drug": None}
        for pt, count in MEDSAFE_DATA
    ])

    single = FIXTURES / "sessions" / "medsafe" / "singlerow"
    writer = SessionWriter(single, source="medsafe", term="Singlerow",
                           recorded_at=parse_rfc3339(MEDSAFE_RECORDED_AT))
    writer.load(MEDSAFE_URL, MEDSAFE_HOME)
    writer.click("#search-btn", _medsafe_table([("Dizziness", 3)]))
    writer.finish()
    _expected(single / "expected.json", [
        {"source": "medsafe", "drug": "Singlerow", "soc": None,
         "reaction": "Dizziness", "count": 3,
         "retrieved_at": MEDSAFE_RECORDED_AT,
         "adapter_version": "1.0.0", "raw_drug": None}
    ])

    headeronly = FIXTURES / "sessions" / "medsafe" / "headeronly"
    writer = SessionWriter(headeronly, source="medsafe", term="Headeronly",
                           recorded_at=parse_rfc3339(MEDSAFE_RECORDED_AT))
    writer.load(MEDSAFE_URL, MEDSAFE_HOME)
    writer.click("#search-btn", _medsafe_table([]))
    writer.finish()
    _expected(headeronly / "expected.json", [])

    nodrug = FIXTURES / "sessions" / "medsafe" / "zzzqx"
    writer = SessionWriter(nodrug, source="medsafe", term="Zzzqx",
                           recorded_at=parse_rfc3339(MEDSAFE_RECORDED_AT))
    writer.load(MEDSAFE_URL, MEDSAFE_HOME)
    writer.click("#search-btn", _page("Search results", """
<main>
  <div id="no-results">No reports were found for this ingredient.</div>
</main>"""))
    writer.finish()


# ---------------------------------------------------------------------------
# DAEN: export preparation then a spreadsheet download
# ---------------------------------------------------------------------------

DAEN_URL = "https://www.tga.gov.au/safety/database-adverse-event-notifications-daen"
DAEN_RECORDED_AT = "2025-06-06T02:10:00Z"

DAEN_MEDICINE = "Atorvastatin (atorvastatin calcium)"
DAEN_DATA = [("Myalgia", 215), ("Rhabdomyolysis", 58), ("Hepatitis", 23), ("Dizziness", 41)]

DAEN_HOME = _page("Database of Adverse Event Notifications", """
<main>
  <h1>Database of Adverse Event Notifications - medicines</h1>
  <form id="daen-form">
    <input id="daen-search" type="text" placeholder="Medicine name">
    <button id="search-btn" type="submit">Search</button>
  </form>
</main>""")

DAEN_RESULTS = _page("DAEN search results", """
<main>
  <h2>Medicine summary</h2>
  <p>Your export is ready.</p>
  <a id="export-btn" href="/daen/export.xlsx" download>Download results (.xlsx)</a>
</main>""")


def make_daen_sessions() -> None:
    term = "Atorvastatin"
    session_dir = FIXTURES / "sessions" / "daen" / term.lower()
    writer = SessionWriter(session_dir, source="daen", term=term,
                           recorded_at=parse_rfc3339(DAEN_RECORDED_AT))
    writer.load(DAEN_URL, DAEN_HOME)
    writer.click("#search-btn", DAEN_RESULTS)
    rows: list[list[object]] = [["Medicine", "Reaction (MedDRA Preferred Term)",
                                 "Number of reports"]]
    rows += [[DAEN_MEDICINE, pt, count] for pt, count in DAEN_DATA]
    writer.export("#export-btn", xlsxio.write_rows(rows))
    writer.finish()
    _expected(session_dir / "expected.json", [
        {"source": "daen", "drug": term, "soc": None, "reaction": pt,
         "count": count, "retrieved_at": DAEN_RECORDED_AT,
         "adapter_version": "1.0.0", "raw_drug": DAEN_MEDICINE}
        for pt, count in DAEN_DATA
    ])

    empty = FIXTURES / "sessions" / "daen" / "emptyexport"
    writer = SessionWriter(empty, source="daen", term="Emptyexport",
                           recorded_at=parse_rfc3339(DAEN_RECORDED_AT))
    writer.load(DAEN_URL, DAEN_HOME)
    writer.click("#search-btn", DAEN_RESULTS)
    writer.export("#export-btn", xlsxio.write_rows(
        [["Medicine", "Reaction (MedDRA Preferred Term)", "Number of reports"]]))
    writer.finish()
    _expected(empty / "expected.json", [])

    nodrug = FIXTURES / "sessions" / "daen" / "zzzqx"
    writer = SessionWriter(nodrug, source="daen", term="Zzzqx",
                           recorded_at=parse_rfc3339(DAEN_RECORDED_AT))
    writer.load(DAEN_URL, DAEN_HOME)
    writer.click("#search-btn", _page("DAEN search results", """
<main>
  <div id="no-results">No medicines found.</div>
</main>"""))
    writer.finish()


# ---------------------------------------------------------------------------
# FAERS: quarterly index page and a synthetic quarter archive
# ---------------------------------------------------------------------------

FAERS_QUARTERS = [
    (2025, 1, "January - March 2025"),
    (2024, 4, "October - December 2024"),
    (2024, 3, "July - September 2024"),
]

STATINS = ["ATORVASTATIN", "SIMVASTATIN", "ROSUVASTATIN"]
OTHER_DRUGS = ["LISINOPRIL", "METFORMIN", "OMEPRAZOLE", "ASPIRIN", "AMLODIPINE"]
FAERS_PTS = ["Myalgia", "Headache", "Nausea", "Pain in extremity",
             "Dizziness", "Rash", "Fatigue", "Insomnia"]

DRUG_HEADER = ("primaryid$caseid$drug_seq$role_cod$drugname$prod_ai$val_vbm$route$"
               "dose_vbm$cum_dose_chr$cum_dose_unit$dechal$rechal$lot_num$exp_dt$"
               "nda_num$dose_amt$dose_unit$dose_form$dose_freq")
REAC_HEADER = "primaryid$caseid$pt$drug_rec_act"


def _drug_line(primaryid: int, seq: int, role: str, name: str) -> str:
    fields = [""] * 20
    fields[0] = str(primaryid)
    fields[1] = str(primaryid // 10)
    fields[2] = str(seq)
    fields[3] = role
    fields[4] = name
    fields[5] = name
    fields[7] = "ORAL"
    return "$".join(fields)


def _reac_line(primaryid: int, pt: str) -> str:
    return f"{primaryid}${primaryid // 10}${pt}$"


def make_faers_fixtures() -> None:
    faers_dir = FIXTURES / "faers"
    faers_dir.mkdir(parents=True, exist_ok=True)
    index_dir = FIXTURES / "sessions" / "faers"
    index_dir.mkdir(parents=True, exist_ok=True)

    items = []
    for year, q, label in FAERS_QUARTERS:
        items.append(
            f'    <li><a href="content/Exports/faers_ascii_{year}q{q}.zip">'
            f'ASCII Data Files ({label})</a> 48.3MB</li>\n'
            f'    <li><a href="content/Exports/faers_xml_{year}q{q}.zip">'
            f'XML Data Files ({label})</a> 61.0MB</li>'
        )
    index = _page("Quarterly Data Extract Files", f"""
<main>
  <h1>Quarterly Data Extract Files</h1>
  <ul class="quarterly-files">
{chr(10).join(items)}
  </ul>
</main>""")
    (index_dir / "index.html").write_text(index, "utf-8")

    rng = random.Random(20250101)
    drug_lines = [DRUG_HEADER]
    reac_lines = [REAC_HEADER]
    for n in range(60):
        primaryid = 10000010 + n * 7
        n_drugs = rng.randint(1, 3)
        pool = STATINS + OTHER_DRUGS
        drugs = rng.sample(pool, n_drugs)
        seq = 1
        for name in drugs:
            role = rng.choice(["PS", "SS", "C"])
            drug_lines.append(_drug_line(primaryid, seq, role, name))
            seq += 1
        # engineered duplicate: the first drug listed twice in one report
        if n % 6 == 0:
            drug_lines.append(_drug_line(primaryid, seq, "SS", drugs[0]))
            seq += 1
        # casing noise: normalization must merge this with the uppercase form
        if n % 17 == 0:
            drug_lines.append(_drug_line(primaryid, seq, "C", drugs[0].lower()))
            seq += 1
        n_pts = rng.randint(1, 3)
        pts = rng.sample(FAERS_PTS, n_pts)
        for pt in pts:
            reac_lines.append(_reac_line(primaryid, pt))
        # engineered duplicate (primaryid, pt) line; dedup happens in the join
        if n % 9 == 0:
            reac_lines.append(_reac_line(primaryid, pts[0]))
    # malformed lines with the wrong field count are skipped by the parsers
    drug_lines.append("9999$bad$line")
    drug_lines.append("9998$also$bad$here")
    reac_lines.append("9999$truncated")

    drug_file = "\n".join(drug_lines) + "\n"
    reac_file = "\n".join(reac_lines) + "\n"
    archive = _zip_bytes({
        "ASCII/DRUG25Q1.txt": drug_file.encode("ascii"),
        "ASCII/REAC25Q1.txt": reac_file.encode("ascii"),
        "ASCII/ASC_NTS.pdf": b"%PDF-1.4 synthetic quarter notes\n",
    })
    (faers_dir / "faers_ascii_2025q1.zip").write_bytes(archive)


# ---------------------------------------------------------------------------
# VAERS: datasets index page and a tiny valid annual archive
# ---------------------------------------------------------------------------

def make_vaers_fixtures() -> None:
    vaers_dir = FIXTURES / "vaers"
    vaers_dir.mkdir(parents=True, exist_ok=True)
    index_dir = FIXTURES / "sessions" / "vaers"
    index_dir.mkdir(parents=True, exist_ok=True)
    items = "\n".join(
        f'    <li><a href="eSubDownload/index.jsp?fn={year}VAERSData.zip">'
        f'{year} VAERS Data</a></li>'
        for year in (2025, 2024, 2023)
    )
    index = _page("VAERS Data Sets", f"""
<main>
  <h1>VAERS Data Sets</h1>
  <p>Downloads require completing a verification step.</p>
  <ul class="annual-files">
{items}
  </ul>
</main>""")
    (index_dir / "index.html").write_text(index, "utf-8")

    archive = _zip_bytes({
        "2024VAERSDATA.csv": b"VAERS_ID,RECVDATE,STATE\n2400001,01/02/2024,CA\n",
        "2024VAERSVAX.csv": b"VAERS_ID,VAX_TYPE,VAX_NAME\n2400001,FLU,FLUZONE\n",
        "2024VAERSSYMPTOMS.csv": b"VAERS_ID,SYMPTOM1\n2400001,Pyrexia\n",
    })
    (vaers_dir / "2024VAERSData.zip").write_bytes(archive)
    (vaers_dir / "not-a-zip.txt").write_text("plain text, not an archive\n", "utf-8")


def main() -> None:
    for maker in (make_dma_sessions, make_vigiaccess_sessions, make_lareb_sessions,
                  make_medsafe_sessions, make_daen_sessions, make_faers_fixtures,
                  make_vaers_fixtures):
        maker()
    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
