import pytest

from scripts.catalog import Catalog
from scripts.errors import MissingEntries
from scripts.table1 import (
    COLUMNS,
    TABLE1_IDS,
    compare_table1,
    printed_rule_flags,
    read_golden,
    table1_report,
)

from conftest import GOLDEN


@pytest.fixture(scope="module")
def report(order32):
    return table1_report(order32)


@pytest.fixture()
def golden():
    return read_golden(GOLDEN)


def test_report_shape(report):
    assert len(TABLE1_IDS) == 44
    assert list(report.columns) == COLUMNS
    assert report["id"].tolist() == TABLE1_IDS


def test_report_row_s32_17(report):
    row = report.set_index("id").loc["S(32,17)"]
    assert row.to_dict() == {
        "exp": "16",
        "center": "C8",
        "g2": "C8",
        "g4": "C4",
        "g2_cap_z": "C8",
        "g4_cap_z": "C4",
        "cl": "2",
    }


def test_matches_golden_up_to_known_errors(report, golden, settings):
    diff = compare_table1(report, golden, settings.known_discrepancies)
    assert diff.clean
    assert sorted((d.id, d.column, d.printed, d.machine) for d in diff.diffs) == [
        ("S(32,15)", "g4", "1", "C2"),
        ("S(32,42)", "g2_cap_z", "C4", "C2"),
    ]
    assert all(d.known for d in diff.diffs)
    assert diff.stale == []
    assert diff.unjustified == []


def test_without_known_list_the_printed_errors_fail(report, golden):
    diff = compare_table1(report, golden)
    assert not diff.clean
    assert len(diff.unflagged) == 2


def test_printed_rule_flags_catch_both_errors(golden):
    flagged = {(f.id, c) for f in printed_rule_flags(golden) for c in f.columns}
    assert ("S(32,15)", "g4") in flagged
    assert ("S(32,42)", "g2_cap_z") in flagged


def test_injected_fault(report, golden, settings):
    golden.loc[golden["id"] == "S(32,2)", "exp"] = "8"
    diff = compare_table1(report, golden, settings.known_discrepancies)
    assert not diff.clean
    assert [(d.id, d.column, d.printed, d.machine) for d in diff.unflagged] == [("S(32,2)", "exp", "8", "4")]


def test_stale_and_unjustified_entries(report, golden, settings):
    known = list(settings.known_discrepancies) + [{"id": "S(32,2)", "column": "exp", "printed": "4"}]
    diff = compare_table1(report, golden, known)
    assert [k["id"] for k in diff.stale] == ["S(32,2)"]
    assert diff.clean

    wrong = [{"id": "S(32,15)", "column": "g4", "printed": "C2"}]
    diff = compare_table1(report, golden, wrong)
    assert [k["id"] for k in diff.unjustified] == ["S(32,15)"]
    assert not diff.clean


def test_golden_missing_a_row(report, golden, settings):
    with pytest.raises(MissingEntries) as exc:
        compare_table1(report, golden[golden["id"] != "S(32,50)"], settings.known_discrepancies)
    assert exc.value.missing == ["S(32,50)"]


def test_catalog_missing_an_entry(order32):
    partial = Catalog([e for e in order32 if e.id != "S(32,50)"])
    with pytest.raises(MissingEntries):
        table1_report(partial)


def test_duplicate_golden_ids(tmp_path):
    text = GOLDEN.read_text(encoding="utf-8")
    lines = text.splitlines()
    path = tmp_path / "golden.csv"
    path.write_text("\n".join(lines + [lines[1]]) + "\n", encoding="utf-8")
    with pytest.raises(ValueError, match="duplicate"):
        read_golden(path)
