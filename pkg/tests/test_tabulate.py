"""Matrix assembly and 2x2 construction against brute-force partition oracles.

The oracles below sum matrix cells with literal loops and membership tests;
the implementation uses cached marginals, so agreement is meaningful.
"""

from __future__ import annotations

import json
import random
from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pharmaharvest.core_types import CountMatrix, CountRecord, SourceId
from pharmaharvest.errors import ClassMissingTarget, UnknownLabel
from pharmaharvest.tabulate import (
    ComparatorScope,
    ExportFormat,
    OtherDrugsMode,
    assemble_matrix,
    export_table,
    marginals,
    other_drugs_column,
    two_by_two,
)

NOW = datetime(2025, 6, 2, 9, 15, tzinfo=timezone.utc)

# The published alpha-blocker table: 4 reaction terms x 5 drugs.
ALPHA_BLOCKERS = ["Alfuzosin", "Doxazosin", "Prazosin", "Tamsulosin", "Terazosin"]
ALPHA_BLOCKER_ROWS = {
    "Dizziness": [32, 9, 3, 23, 2],
    "Syncope": [11, 5, 7, 6, 1],
    "Fatigue": [10, 6, 8, 5, 2],
    "Headache": [9, 10, 10, 7, 1],
}


def alpha_blocker_records():
    records = []
    for reaction, counts in ALPHA_BLOCKER_ROWS.items():
        for drug, count in zip(ALPHA_BLOCKERS, counts):
            records.append(CountRecord(
                source=SourceId.DMA, drug=drug, soc=None, reaction=reaction,
                count=count, retrieved_at=NOW, adapter_version="1.0.0"))
    return records


def alpha_blocker_matrix() -> CountMatrix:
    return assemble_matrix(alpha_blocker_records())


# -- oracles ---------------------------------------------------------------------------

def oracle_ae_based(m: CountMatrix, i: int, j: int):
    I, J = m.shape
    a = m.cells[i][j]
    b = sum(m.cells[i][k] for k in range(J) if k != j)
    c = sum(m.cells[r][j] for r in range(I) if r != i)
    d = sum(m.cells[r][k] for r in range(I) if r != i for k in range(J) if k != j)
    return (a, b, c, d)


def oracle_drug_based(m: CountMatrix, i: int, j: int, class_idx: set[int]):
    I, J = m.shape
    a = m.cells[i][j]
    b = sum(m.cells[i][k] for k in range(J) if k not in class_idx)
    c = sum(m.cells[r][j] for r in range(I) if r != i)
    d = sum(m.cells[r][k] for r in range(I) if r != i for k in range(J)
            if k not in class_idx)
    return (a, b, c, d)


def oracle_other_drugs(m: CountMatrix, class_idx: set[int]) -> list[int]:
    I, J = m.shape
    return [sum(m.cells[i][k] for k in range(J) if k not in class_idx)
            for i in range(I)]


# -- assemble_matrix ---------------------------------------------------------------------

def test_assemble_alpha_blocker_table_shape_and_cells():
    m = alpha_blocker_matrix()
    assert m.shape == (4, 5)
    assert list(m.drug_labels) == ALPHA_BLOCKERS          # already sorted
    assert m.cell("Dizziness", "Alfuzosin") == 32
    assert m.cell("Headache", "Terazosin") == 1
    for reaction, counts in ALPHA_BLOCKER_ROWS.items():
        for drug, count in zip(ALPHA_BLOCKERS, counts):
            assert m.cell(reaction, drug) == count


def test_assemble_empty_records():
    m = assemble_matrix([])
    assert m.shape == (0, 0)
    assert m.grand_total == 0


def test_assemble_sums_duplicate_pairs():
    records = [
        CountRecord(source=SourceId.DMA, drug="X", soc=None, reaction="Rash",
                    count=3, retrieved_at=NOW, adapter_version="1"),
        CountRecord(source=SourceId.LAREB, drug="X", soc=None, reaction="Rash",
                    count=4, retrieved_at=NOW, adapter_version="1"),
    ]
    assert assemble_matrix(records).cell("Rash", "X") == 7


def test_assemble_merges_case_variants():
    records = [
        CountRecord(source=SourceId.DMA, drug="Aspirin", soc=None,
                    reaction="Rash", count=1, retrieved_at=NOW, adapter_version="1"),
        CountRecord(source=SourceId.FAERS, drug="ASPIRIN", soc=None,
                    reaction="RASH", count=2, retrieved_at=NOW, adapter_version="1"),
    ]
    m = assemble_matrix(records)
    assert m.shape == (1, 1)
    assert m.cells[0][0] == 3


def test_assemble_missing_pairs_are_zero():
    records = [
        CountRecord(source=SourceId.DMA, drug="A", soc=None, reaction="R1",
                    count=1, retrieved_at=NOW, adapter_version="1"),
        CountRecord(source=SourceId.DMA, drug="B", soc=None, reaction="R2",
                    count=2, retrieved_at=NOW, adapter_version="1"),
    ]
    m = assemble_matrix(records)
    assert m.cell("R1", "B") == 0
    assert m.cell("R2", "A") == 0


@given(st.permutations(alpha_blocker_records()))
@settings(max_examples=30)
def test_assemble_is_permutation_invariant(shuffled):
    assert assemble_matrix(shuffled) == alpha_blocker_matrix()


# -- marginals ---------------------------------------------------------------------------

def test_marginals_alfuzosin_column():
    m = alpha_blocker_matrix()
    stats = marginals(m)
    assert stats.col_totals[m.drug_index("Alfuzosin")] == 32 + 11 + 10 + 9
    assert stats.grand == sum(sum(r) for r in ALPHA_BLOCKER_ROWS.values())


def test_marginals_empty_matrix():
    assert marginals(assemble_matrix([])).grand == 0


def test_marginals_random_matrix_identity():
    rng = random.Random(42)
    cells = tuple(tuple(rng.randint(0, 100) for _ in range(6)) for _ in range(6))
    m = CountMatrix(ae_labels=tuple(f"a{i}" for i in range(6)),
                    drug_labels=tuple(f"d{j}" for j in range(6)), cells=cells)
    stats = marginals(m)
    assert sum(stats.row_totals) == sum(stats.col_totals) == stats.grand


# -- two_by_two ---------------------------------------------------------------------------

def test_single_cell_matrix_ae_based():
    m = CountMatrix(ae_labels=("R",), drug_labels=("D",), cells=((5,),))
    t = two_by_two(m, "R", "D")
    assert (t.a, t.b, t.c, t.d) == (5, 0, 0, 0)


def test_dizziness_alfuzosin_ae_based_matches_oracle():
    m = alpha_blocker_matrix()
    i, j = m.ae_index("Dizziness"), m.drug_index("Alfuzosin")
    t = two_by_two(m, "Dizziness", "Alfuzosin")
    assert (t.a, t.b, t.c, t.d) == oracle_ae_based(m, i, j)
    # frozen from the oracle over the published cells
    assert (t.a, t.b, t.c, t.d) == (32, 37, 30, 68)
    assert t.total == m.grand_total


def test_ae_based_identities_hold_everywhere():
    m = alpha_blocker_matrix()
    for ae in m.ae_labels:
        for drug in m.drug_labels:
            t = two_by_two(m, ae, drug)
            i, j = m.ae_index(ae), m.drug_index(drug)
            assert t.a + t.b == m.row_totals[i]
            assert t.a + t.c == m.col_totals[j]
            assert t.total == m.grand_total


def test_unknown_labels_raise():
    m = alpha_blocker_matrix()
    with pytest.raises(UnknownLabel):
        two_by_two(m, "Nosuch", "Alfuzosin")
    with pytest.raises(UnknownLabel):
        two_by_two(m, "Dizziness", "Nosuch")


def test_drug_based_requires_target_in_class():
    m = alpha_blocker_matrix()
    mode = OtherDrugsMode.drug_based({"Doxazosin", "Prazosin"})
    with pytest.raises(ClassMissingTarget):
        two_by_two(m, "Dizziness", "Alfuzosin", mode)


def test_drug_based_unknown_class_member_raises():
    m = alpha_blocker_matrix()
    mode = OtherDrugsMode.drug_based({"Alfuzosin", "Nosuchdrug"})
    with pytest.raises(UnknownLabel):
        two_by_two(m, "Dizziness", "Alfuzosin", mode)


def test_drug_based_mode_requires_nonempty_class():
    with pytest.raises(ValueError):
        OtherDrugsMode(scope=ComparatorScope.DRUG_BASED)


def test_drug_based_synthetic_matrix_matches_partition_oracle():
    cells = ((4, 0, 2, 7), (1, 3, 0, 5), (9, 2, 6, 0))
    m = CountMatrix(ae_labels=("r0", "r1", "r2"),
                    drug_labels=("d0", "d1", "d2", "d3"), cells=cells)
    mode = OtherDrugsMode.drug_based({"d0", "d2"})
    for ae in m.ae_labels:
        for drug in ("d0", "d2"):
            t = two_by_two(m, ae, drug, mode)
            expected = oracle_drug_based(m, m.ae_index(ae), m.drug_index(drug),
                                         {0, 2})
            assert (t.a, t.b, t.c, t.d) == expected


def random_matrix(rng: random.Random) -> CountMatrix:
    i = rng.randint(1, 6)
    j = rng.randint(1, 6)
    return CountMatrix(
        ae_labels=tuple(f"r{x}" for x in range(i)),
        drug_labels=tuple(f"d{x}" for x in range(j)),
        cells=tuple(tuple(rng.randint(0, 50) for _ in range(j)) for _ in range(i)),
    )


def test_drug_based_random_matrices_match_oracle():
    rng = random.Random(2025)
    for _ in range(300):
        m = random_matrix(rng)
        J = len(m.drug_labels)
        size = rng.randint(1, J)
        class_idx = set(rng.sample(range(J), size))
        members = {m.drug_labels[k] for k in class_idx}
        mode = OtherDrugsMode.drug_based(members)
        i = rng.randrange(len(m.ae_labels))
        j = rng.choice(sorted(class_idx))
        t = two_by_two(m, m.ae_labels[i], m.drug_labels[j], mode)
        assert (t.a, t.b, t.c, t.d) == oracle_drug_based(m, i, j, class_idx)


def test_singleton_class_degenerates_to_ae_based():
    rng = random.Random(7)
    for _ in range(100):
        m = random_matrix(rng)
        i = rng.randrange(len(m.ae_labels))
        j = rng.randrange(len(m.drug_labels))
        ae, drug = m.ae_labels[i], m.drug_labels[j]
        singleton = two_by_two(m, ae, drug, OtherDrugsMode.drug_based({drug}))
        plain = two_by_two(m, ae, drug)
        assert singleton == plain


# -- other_drugs_column ---------------------------------------------------------------------

def test_other_drugs_empty_class_equals_row_totals():
    m = alpha_blocker_matrix()
    assert other_drugs_column(m, set()) == list(m.row_totals)


def test_other_drugs_full_class_is_zero_column():
    m = alpha_blocker_matrix()
    assert other_drugs_column(m, set(m.drug_labels)) == [0, 0, 0, 0]


def test_other_drugs_partition_oracle():
    rng = random.Random(99)
    for _ in range(200):
        m = random_matrix(rng)
        J = len(m.drug_labels)
        class_idx = set(rng.sample(range(J), rng.randint(0, J)))
        members = {m.drug_labels[k] for k in class_idx}
        assert other_drugs_column(m, members) == oracle_other_drugs(m, class_idx)


def test_other_drugs_monotone_under_class_inclusion():
    m = alpha_blocker_matrix()
    smaller = other_drugs_column(m, {"Alfuzosin"})
    larger = other_drugs_column(m, {"Alfuzosin", "Doxazosin"})
    assert all(x >= y for x, y in zip(smaller, larger))


def test_other_drugs_unknown_member_raises():
    with pytest.raises(UnknownLabel):
        other_drugs_column(alpha_blocker_matrix(), {"Nosuchdrug"})


# -- export --------------------------------------------------------------------------------

def test_export_csv_layout():
    m = alpha_blocker_matrix()
    data = export_table(m, ExportFormat.CSV)
    lines = data.decode().splitlines()
    assert lines[0] == "PT," + ",".join(ALPHA_BLOCKERS)
    assert lines[1] == "Dizziness,32,9,3,23,2"


def test_export_csv_with_other_drugs_column():
    m = alpha_blocker_matrix()
    data = export_table(m, ExportFormat.CSV, other_drugs={"Alfuzosin", "Doxazosin"})
    lines = data.decode().splitlines()
    assert lines[0].endswith(",Other Drugs")
    dizziness = lines[1].split(",")
    assert dizziness[-1] == str(3 + 23 + 2)


def test_export_json_round_trips_cells():
    m = alpha_blocker_matrix()
    payload = json.loads(export_table(m, ExportFormat.JSON))
    again = CountMatrix.from_dict(payload)
    assert again == m


def test_export_two_by_two_round_trip():
    t = two_by_two(alpha_blocker_matrix(), "Dizziness", "Alfuzosin")
    payload = json.loads(export_table(t, ExportFormat.JSON))
    assert (payload["a"], payload["b"], payload["c"], payload["d"]) == (32, 37, 30, 68)
    csv_lines = export_table(t, ExportFormat.CSV).decode().splitlines()
    assert csv_lines[1] == "AE,32,37"


def test_export_is_deterministic():
    m = alpha_blocker_matrix()
    assert export_table(m, ExportFormat.CSV) == export_table(m, ExportFormat.CSV)
    assert export_table(m, ExportFormat.JSON) == export_table(m, ExportFormat.JSON)
