"""Count matrices and 2x2 contingency tables, in exact integer arithmetic.

Two comparator semantics are supported. The AE-based table compares one
drug against all other drugs. The drug-based table excludes the target's
whole therapeutic class from the comparator column, so that class-mates do
not confound the comparison; the target-drug column itself is unchanged.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .core_types import CountMatrix, CountRecord, TwoByTwo
from .errors import ClassMissingTarget, UnknownLabel


class ComparatorScope(Enum):
    AE_BASED = "ae_based"          # comparator excludes only the target drug
    DRUG_BASED = "drug_based"      # comparator excludes the whole drug class


@dataclass(frozen=True)
class OtherDrugsMode:
    """How the comparator ('Other Drugs') side of a 2x2 table is formed."""

    scope: ComparatorScope
    class_members: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.scope == ComparatorScope.DRUG_BASED and not self.class_members:
            raise ValueError("drug-based comparison requires class members")

    @classmethod
    def ae_based(cls) -> "OtherDrugsMode":
        return cls(scope=ComparatorScope.AE_BASED)

    @classmethod
    def drug_based(cls, class_members: Iterable[str]) -> "OtherDrugsMode":
        return cls(scope=ComparatorScope.DRUG_BASED,
                   class_members=frozenset(class_members))


def _canonical(label: str) -> str:
    return label.casefold()


def assemble_matrix(records: Iterable[CountRecord]) -> CountMatrix:
    """Aggregate records into a matrix with sorted, deduplicated labels.

    Duplicate (drug, reaction) pairs are summed; labels differing only in
    case are merged, displaying the lexicographically smallest variant so
    that assembly does not depend on record order.
    """
    sums: dict[tuple[str, str], int] = {}
    ae_display: dict[str, str] = {}
    drug_display: dict[str, str] = {}
    for record in records:
        ae_key = _canonical(record.reaction)
        drug_key = _canonical(record.drug)
        ae_display[ae_key] = min(ae_display.get(ae_key, record.reaction), record.reaction)
        drug_display[drug_key] = min(drug_display.get(drug_key, record.drug), record.drug)
        sums[(ae_key, drug_key)] = sums.get((ae_key, drug_key), 0) + record.count

    ae_keys = sorted(ae_display, key=lambda k: ae_display[k])
    drug_keys = sorted(drug_display, key=lambda k: drug_display[k])
    cells = tuple(
        tuple(sums.get((ae, drug), 0) for drug in drug_keys)
        for ae in ae_keys
    )
    return CountMatrix(
        ae_labels=tuple(ae_display[k] for k in ae_keys),
        drug_labels=tuple(drug_display[k] for k in drug_keys),
        cells=cells,
    )


@dataclass(frozen=True)
class Marginals:
    row_totals: tuple[int, ...]
    col_totals: tuple[int, ...]
    grand: int


def marginals(m: CountMatrix) -> Marginals:
    """Row totals, column totals, and the grand total, as exact integers."""
    return Marginals(row_totals=m.row_totals, col_totals=m.col_totals,
                     grand=m.grand_total)


def _class_indexes(m: CountMatrix, class_members: frozenset[str]) -> set[int]:
    indexes = set()
    by_key = {_canonical(label): j for j, label in enumerate(m.drug_labels)}
    for member in class_members:
        j = by_key.get(_canonical(member))
        if j is None:
            raise UnknownLabel(member)
        indexes.add(j)
    return indexes


def two_by_two(m: CountMatrix, ae: str, drug: str,
               mode: OtherDrugsMode | None = None) -> TwoByTwo:
    """The 2x2 contingency table for one (AE, drug) pair."""
    mode = mode or OtherDrugsMode.ae_based()
    i = m.ae_index(ae)
    j = m.drug_index(drug)
    n_ij = m.cells[i][j]
    n_i = m.row_totals[i]
    n_j = m.col_totals[j]

    if mode.scope == ComparatorScope.AE_BASED:
        return TwoByTwo(
            a=n_ij,
            b=n_i - n_ij,
            c=n_j - n_ij,
            d=m.grand_total - n_i - n_j + n_ij,
        )

    class_idx = _class_indexes(m, mode.class_members)
    if j not in class_idx:
        raise ClassMissingTarget(drug)
    outside = [k for k in range(len(m.drug_labels)) if k not in class_idx]
    b = sum(m.cells[i][k] for k in outside)
    d = sum(m.cells[r][k] for r in range(len(m.ae_labels)) if r != i for k in outside)
    return TwoByTwo(a=n_ij, b=b, c=n_j - n_ij, d=d)


def other_drugs_column(m: CountMatrix, class_members: Iterable[str]) -> list[int]:
    """Per-AE report counts over all drugs outside the class.

    An empty class leaves nothing excluded, so the column equals the row
    totals; the full drug set yields a zero column.
    """
    class_idx = _class_indexes(m, frozenset(class_members))
    outside = [k for k in range(len(m.drug_labels)) if k not in class_idx]
    return [sum(m.cells[i][k] for k in outside) for i in range(len(m.ae_labels))]


class ExportFormat(Enum):
    CSV = "csv"
    JSON = "json"


OTHER_DRUGS_HEADER = "Other Drugs"


def export_class_table(matrix: CountMatrix, full: CountMatrix,
                       class_members: Iterable[str] | None) -> bytes:
    """CSV of a (possibly column-projected) matrix, with the comparator
    column computed over the full matrix when a class is given."""
    if class_members is None:
        return export_table(matrix, ExportFormat.CSV)
    column = other_drugs_column(full, class_members)
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["PT", *matrix.drug_labels, OTHER_DRUGS_HEADER])
    for i, ae in enumerate(matrix.ae_labels):
        writer.writerow([ae, *matrix.cells[i], column[i]])
    return buf.getvalue().encode("utf-8")


def export_table(table: CountMatrix | TwoByTwo, fmt: ExportFormat, *,
                 other_drugs: Iterable[str] | None = None) -> bytes:
    """Deterministic serialization of a matrix or a single 2x2 table.

    For matrices the CSV layout is one ``PT`` column, one column per drug in
    label order, and optionally a trailing ``Other Drugs`` column computed
    for the supplied class.
    """
    if isinstance(table, TwoByTwo):
        if fmt == ExportFormat.JSON:
            return json.dumps(table.to_dict(), sort_keys=True).encode("utf-8")
        buf = io.StringIO(newline="")
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(["", "Drug", OTHER_DRUGS_HEADER])
        writer.writerow(["AE", table.a, table.b])
        writer.writerow(["Other AEs", table.c, table.d])
        return buf.getvalue().encode("utf-8")

    column = None
    if other_drugs is not None:
        column = other_drugs_column(table, other_drugs)
    if fmt == ExportFormat.JSON:
        payload = table.to_dict()
        if column is not None:
            payload["other_drugs"] = column
        return json.dumps(payload, sort_keys=True).encode("utf-8")
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\r\n")
    header = ["PT", *table.drug_labels]
    if column is not None:
        header.append(OTHER_DRUGS_HEADER)
    writer.writerow(header)
    for i, ae in enumerate(table.ae_labels):
        row: list[object] = [ae, *table.cells[i]]
        if column is not None:
            row.append(column[i])
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")
