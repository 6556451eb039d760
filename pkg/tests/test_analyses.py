import json

import pandas as pd
import pytest

from scripts.analyses.run_classifier_sweep import run_classifier_sweep
from scripts.analyses.run_dseq_scan import SURVIVORS, _dseq_report, run_dseq_scan
from scripts.analyses.run_jennings_catalog import COLUMNS, jennings_row, run_jennings_catalog
from scripts.analyses.run_oracle_sweep import run_oracle_sweep
from scripts.analyses.run_table1 import run_table1
from scripts.validate_report import validate_report_file

from conftest import REPO_ROOT, SMALL

COMMITTED_TABLE1 = REPO_ROOT / "analyses" / "table1" / "outputs"
COMMITTED_DSEQ = REPO_ROOT / "analyses" / "dseq-scan" / "outputs" / "dseq_feasible.json"


def _read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_run_table1(settings, tmp_path):
    diff = run_table1(settings, tmp_path)
    assert diff.clean
    assert (tmp_path / "table1.csv").exists()
    validate_report_file(tmp_path / "table1_diff.json")


def test_committed_table1_outputs_are_current(settings, tmp_path):
    run_table1(settings, tmp_path)
    fresh = pd.read_csv(tmp_path / "table1.csv", dtype=str, keep_default_na=False)
    committed = pd.read_csv(COMMITTED_TABLE1 / "table1.csv", dtype=str, keep_default_na=False)
    pd.testing.assert_frame_equal(fresh, committed)
    assert _read_json(tmp_path / "table1_diff.json") == _read_json(COMMITTED_TABLE1 / "table1_diff.json")
    validate_report_file(COMMITTED_TABLE1 / "table1_diff.json")


def test_committed_dseq_feasible_is_current():
    assert _read_json(COMMITTED_DSEQ) == [_dseq_report(*t) for t in SURVIVORS]
    validate_report_file(COMMITTED_DSEQ)


def test_jennings_row(group):
    row = jennings_row("D16", group("dihedral16"))
    assert list(row) == COLUMNS
    assert row["d_seq"] == "{2:1, 3:1}"
    assert row["derived_cyclic"]
    assert row["cyclic_law_ok"]
    assert row["prune_ok"]


def test_run_jennings_catalog(settings, tmp_path):
    df = run_jennings_catalog(settings, tmp_path)
    assert len(df) == 23 + 51
    assert df["cyclic_law_ok"].all()
    assert df["prune_ok"].all()
    assert (tmp_path / "jennings.csv").exists()


def test_run_oracle_sweep_small(settings, tmp_path):
    df = run_oracle_sweep(settings, tmp_path, catalogs=[SMALL])
    assert len(df) == 23
    assert df["agrees"].all()
    assert df["bounds_ok"].all()
    validate_report_file(tmp_path / "oracle.json")


@pytest.mark.slow
def test_run_dseq_scan(settings, tmp_path):
    df = run_dseq_scan(settings, tmp_path)
    assert (df.loc[~df["known_survivor"], "count"] == 0).all()
    reports = json.loads((tmp_path / "dseq_feasible.json").read_text(encoding="utf-8"))
    assert [(r["p"], r["n"], r["k"]) for r in reports] == SURVIVORS
    assert [r["count"] for r in reports] == [1, 2, 1]
    validate_report_file(tmp_path / "dseq_feasible.json")


@pytest.mark.slow
def test_run_classifier_sweep(settings, tmp_path):
    df = run_classifier_sweep(settings, tmp_path)
    assert df["consistent"].all()
    cases = {(g, k): c for g, k, c in zip(df["group"], df["k"], df["case"])}
    assert cases[("k14_order512", 14)] == "K14:ii(a)"
    assert cases[("k15_order256", 15)] == "K15_P2:i"
    assert cases[("k15_order256_c8xc4", 15)] == "K15_P2:xii"
    validate_report_file(tmp_path / "classifier_matches.json")
