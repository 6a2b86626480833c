"""Minimal XLSX read/write: one sheet, strings and integers only.

Covers what aggregate-count exports need. The writer emits inline strings
and fixed zip timestamps so identical rows always produce identical bytes;
the reader additionally understands shared strings.
"""

from __future__ import annotations

import re
import zipfile
from io import BytesIO
from xml.etree import ElementTree as ET
from xml.sax.saxutils import escape

from .errors import MalformedExport

_NS = "http://schemas.openxmlformats.org/spreadsheetml/2006/main"
_FIXED_STAMP = (2025, 1, 1, 0, 0, 0)

_CONTENT_TYPES = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types">
<Default Extension="rels" ContentType="application/vnd.openxmlformats-package.relationships+xml"/>
<Default Extension="xml" ContentType="application/xml"/>
<Override PartName="/xl/workbook.xml" ContentType="application/vnd.openxmlformats-officedocument.spreadsheetml.sheet.main+xml"/>
<Override PartName="/xl/worksheets/sheet1.xml" ContentType="application/vnd.openxmlformats-officedocument.spreadsheetml.worksheet+xml"/>
</Types>
"""

_ROOT_RELS = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships">
<Relationship Id="rId1" Type="http://schemas.openxmlformats.org/officeDocument/2006/relationships/officeDocument" Target="xl/workbook.xml"/>
</Relationships>
"""

_WORKBOOK = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<workbook xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main" xmlns:r="http://schemas.openxmlformats.org/officeDocument/2006/relationships">
<sheets><sheet name="Sheet1" sheetId="1" r:id="rId1"/></sheets>
</workbook>
"""

_WORKBOOK_RELS = """<?xml version="1.0" encoding="UTF-8" standalone="yes"?>
<Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships">
<Relationship Id="rId1" Type="http://schemas.openxmlformats.org/officeDocument/2006/relationships/worksheet" Target="worksheets/sheet1.xml"/>
</Relationships>
"""


def _col_name(index: int) -> str:
    name = ""
    index += 1
    while index:
        index, rem = divmod(index - 1, 26)
        name = chr(ord("A") + rem) + name
    return name


def write_rows(rows: list[list[object]]) -> bytes:
    """Build an xlsx workbook whose first sheet holds ``rows``."""
    body = ['<?xml version="1.0" encoding="UTF-8" standalone="yes"?>',
            f'<worksheet xmlns="{_NS}"><sheetData>']
    for r, row in enumerate(rows, start=1):
        body.append(f'<row r="{r}">')
        for c, value in enumerate(row):
            ref = f"{_col_name(c)}{r}"
            if isinstance(value, bool):
                raise TypeError("boolean cells are not supported")
            if isinstance(value, int):
                body.append(f'<c r="{ref}"><v>{value}</v></c>')
            elif value is None:
                continue
            else:
                body.append(f'<c r="{ref}" t="inlineStr"><is><t xml:space="preserve">'
                            f"{escape(str(value))}</t></is></c>")
        body.append("</row>")
    body.append("</sheetData></worksheet>")
    sheet_xml = "".join(body)

    out = BytesIO()
    with zipfile.ZipFile(out, "w", zipfile.ZIP_DEFLATED) as zf:
        for name, data in (
            ("[Content_Types].xml", _CONTENT_TYPES),
            ("_rels/.rels", _ROOT_RELS),
            ("xl/workbook.xml", _WORKBOOK),
            ("xl/_rels/workbook.xml.rels", _WORKBOOK_RELS),
            ("xl/worksheets/sheet1.xml", sheet_xml),
        ):
            info = zipfile.ZipInfo(name, date_time=_FIXED_STAMP)
            info.compress_type = zipfile.ZIP_DEFLATED
            zf.writestr(info, data)
    return out.getvalue()


_CELL_REF = re.compile(r"([A-Z]+)(\d+)")


def _col_index(ref: str) -> int:
    m = _CELL_REF.match(ref)
    if not m:
        raise MalformedExport(f"bad cell reference {ref!r}")
    index = 0
    for ch in m.group(1):
        index = index * 26 + (ord(ch) - ord("A") + 1)
    return index - 1


def read_rows(data: bytes) -> list[list[object]]:
    """Read the first worksheet into a list of rows (str or int cells)."""
    try:
        zf = zipfile.ZipFile(BytesIO(data))
    except zipfile.BadZipFile as exc:
        raise MalformedExport(f"not a spreadsheet archive: {exc}") from exc
    with zf:
        names = set(zf.namelist())
        shared: list[str] = []
        if "xl/sharedStrings.xml" in names:
            shared = _read_shared_strings(zf.read("xl/sharedStrings.xml"))
        sheet_name = next(
            (n for n in ("xl/worksheets/sheet1.xml",)
             if n in names),
            None,
        ) or next((n for n in sorted(names) if n.startswith("xl/worksheets/")), None)
        if sheet_name is None:
            raise MalformedExport("workbook has no worksheets")
        try:
            tree = ET.fromstring(zf.read(sheet_name))
        except ET.ParseError as exc:
            raise MalformedExport(f"unparseable worksheet: {exc}") from exc

    rows: list[list[object]] = []
    for row_el in tree.iter(f"{{{_NS}}}row"):
        cells: dict[int, object] = {}
        for c_el in row_el.iter(f"{{{_NS}}}c"):
            ref = c_el.get("r")
            idx = _col_index(ref) if ref else len(cells)
            ctype = c_el.get("t", "n")
            if ctype == "inlineStr":
                t = c_el.find(f"{{{_NS}}}is/{{{_NS}}}t")
                cells[idx] = t.text or "" if t is not None else ""
            else:
                v = c_el.find(f"{{{_NS}}}v")
                if v is None or v.text is None:
                    continue
                if ctype == "s":
                    try:
                        cells[idx] = shared[int(v.text)]
                    except (ValueError, IndexError) as exc:
                        raise MalformedExport("bad shared-string index") from exc
                elif ctype == "str":
                    cells[idx] = v.text
                else:
                    num = float(v.text)
                    cells[idx] = int(num) if num.is_integer() else num
        width = max(cells) + 1 if cells else 0
        rows.append([cells.get(i, "") for i in range(width)])
    return rows


def _read_shared_strings(data: bytes) -> list[str]:
    try:
        tree = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedExport(f"unparseable shared strings: {exc}") from exc
    out = []
    for si in tree.iter(f"{{{_NS}}}si"):
        out.append("".join(t.text or "" for t in si.iter(f"{{{_NS}}}t")))
    return out
