import json
import subprocess
import sys

import pytest

from scripts.cli import EXIT_CAP, EXIT_NOT_LIE_NILPOTENT, EXIT_OK, EXIT_TABLE1, EXIT_USAGE, int_list, main

from conftest import GOLDEN, GROUPS_DIR, ORDER32, REPO_ROOT


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def _json(capsys, *argv):
    code, out = _run(capsys, *argv, "--format", "json")
    return code, json.loads(out) if out.strip() else None


def _g(name):
    return GROUPS_DIR / f"{name}.txt"


# ── jennings ──────────────────────────────────────────────────────────────────

def test_jennings_text(capsys):
    code, out = _run(capsys, "jennings", _g("dihedral8"), "-p", "2")
    assert code == EXIT_OK
    headline = out.splitlines()[0]
    assert headline.startswith("t^L = 3, d = {2:1}")
    assert "G' cyclic" in headline
    assert "d_seq: {2:1}" in out


def test_jennings_json_commutative(capsys):
    code, out = _json(capsys, "jennings", _g("c4xc2"), "-p", "2")
    assert code == EXIT_OK
    assert out["schema"] == 1
    assert out["command"] == "jennings"
    assert out["commutative"] is True
    assert out["t_upper"] == 1
    assert out["d_seq"] == {}
    assert "headline" not in out


def test_jennings_not_lie_nilpotent(capsys):
    code, out = _run(capsys, "jennings", _g("s3"), "-p", "2")
    assert code == EXIT_NOT_LIE_NILPOTENT
    assert out == ""


def test_jennings_rejects_composite_p(capsys):
    code, _ = _run(capsys, "jennings", _g("dihedral8"), "-p", "4")
    assert code == EXIT_USAGE


# ── dseq ──────────────────────────────────────────────────────────────────────

def test_dseq_k14(capsys):
    code, out = _json(capsys, "dseq", "-p", "2", "-n", "5", "-k", "14")
    assert code == EXIT_OK
    assert out["target"] == 19
    assert out["count"] == 1
    assert out["sequences"] == [{"d_seq": {"2": 1, "3": 2, "5": 1, "9": 1}, "e": 3, "t_upper": 19}]


def test_dseq_k15_text_and_json_agree(capsys):
    code, text = _run(capsys, "dseq", "-p", "2", "-n", "5", "-k", "15")
    assert code == EXIT_OK
    assert text.splitlines()[0] == "2 feasible: {2:1, 3:1, 4:1, 5:1, 7:1}, {2:2, 3:1, 5:1, 9:1}"
    _, out = _json(capsys, "dseq", "-p", "2", "-n", "5", "-k", "15")
    assert f"target: {out['target']}" in text
    assert f"count: {out['count']}" in text


def test_dseq_check(capsys):
    code, out = _json(capsys, "dseq", "-p", "2", "-n", "5", "-k", "14", "--check", "{2:1, 3:1, 5:2, 7:1}")
    assert code == EXIT_OK
    check = out["check"]
    assert check["feasible"] is False
    assert {"rule": "v", "m": 3, "s": 6, "e": None} in check["violations"]


def test_dseq_scan(capsys):
    code, out = _json(capsys, "dseq", "-p", "2,17", "-n", "2-5", "-k", "14,15", "--scan")
    assert code == EXIT_OK
    assert out["command"] == "dseq-scan"
    found = {(r["p"], r["n"], r["k"]) for r in out["rows"] if r["count"] > 0}
    assert found == {(2, 5, 14), (2, 5, 15), (17, 2, 15)}


@pytest.mark.parametrize(
    "argv",
    [
        ["dseq", "-p", "4", "-n", "2", "-k", "14"],
        ["dseq", "-p", "2", "-n", "5"],
        ["dseq", "-p", "2,3", "-n", "5", "-k", "14"],
        ["dseq", "-p", "2", "-n", "5", "-k", "14", "--check", "{1:1}"],
        ["dseq", "-p", "x", "-n", "5", "-k", "14"],
        ["frobnicate"],
    ],
)
def test_dseq_usage_errors(capsys, argv):
    code, _ = _run(capsys, *argv)
    assert code == EXIT_USAGE


# ── table1 ────────────────────────────────────────────────────────────────────

def test_table1_clean(capsys):
    code, out = _json(capsys, "table1")
    assert code == EXIT_OK
    assert out["clean"] is True
    assert out["rows"] == 44
    assert all(d["known"] for d in out["diffs"])


def test_table1_altered_golden(capsys, tmp_path):
    golden = tmp_path / "table1.csv"
    text = GOLDEN.read_text(encoding="utf-8")
    assert '"S(32,2)",4,' in text
    golden.write_text(text.replace('"S(32,2)",4,', '"S(32,2)",8,'), encoding="utf-8")
    code, out = _json(capsys, "table1", "--golden", golden)
    assert code == EXIT_TABLE1
    assert out["clean"] is False
    assert {"id": "S(32,2)", "column": "exp", "printed": "8", "machine": "4", "known": False} in out["diffs"]


def test_table1_incomplete_catalog(capsys, tmp_path):
    blocks = ORDER32.read_text(encoding="utf-8").split("[group]")
    kept = [b for b in blocks[1:] if 'id = "S(32,50)"' not in b]
    assert len(kept) == 50
    catalog = tmp_path / "order32.txt"
    catalog.write_text("".join("[group]" + b for b in kept), encoding="utf-8")
    code, _ = _run(capsys, "table1", "--catalog", catalog)
    assert code == EXIT_TABLE1


# ── oracle ────────────────────────────────────────────────────────────────────

def test_oracle_json(capsys):
    code, out = _json(capsys, "oracle", _g("dihedral8"), "-p", "2")
    assert code == EXIT_OK
    assert (out["t_lower"], out["t_upper"], out["t_upper_jennings"]) == (3, 3, 3)
    assert out["agrees"] is True


def test_oracle_text(capsys):
    code, out = _run(capsys, "oracle", _g("dihedral16"), "-p", "2")
    assert code == EXIT_OK
    assert "t^L(direct) = 5, t^L(Jennings) = 5" in out.splitlines()[0]


def test_oracle_cap(capsys):
    code, _ = _run(capsys, "oracle", _g("elementary256"), "-p", "2")
    assert code == EXIT_CAP
    code, _ = _run(capsys, "oracle", _g("dihedral16"), "-p", "2", "--cap", "8")
    assert code == EXIT_CAP


@pytest.mark.parametrize(
    "argv",
    [
        ["jennings", _g("dihedral32"), "-p", "2"],
        ["identify", _g("dihedral32")],
        ["classify", _g("dihedral32"), "-p", "2", "-k", "14"],
    ],
)
def test_cap_applies_to_every_group_command(capsys, argv):
    code, _ = _run(capsys, *argv, "--cap", "16")
    assert code == EXIT_CAP
    code, _ = _run(capsys, *argv, "--cap", "32")
    assert code == EXIT_OK


def test_cap_must_be_positive(capsys):
    code, _ = _run(capsys, "jennings", _g("dihedral8"), "-p", "2", "--cap", "0")
    assert code == EXIT_USAGE


def test_cap_raises_the_algebra_cap(capsys):
    code, out = _json(capsys, "oracle", _g("dihedral16"), "-p", "2", "--cap", "16")
    assert code == EXIT_OK
    assert out["t_upper"] == 5


# ── classify / identify ───────────────────────────────────────────────────────

def test_classify_outside_every_case(capsys):
    code, out = _json(capsys, "classify", _g("dihedral32"), "-p", "2", "-k", "14")
    assert code == EXIT_OK
    assert out["case"] is None
    assert out["consistent"] is True
    assert out["target"] == -5
    assert out["profile"]["derived"] == "C8"


def test_classify_rejects_other_k(capsys):
    code, _ = _run(capsys, "classify", _g("dihedral32"), "-p", "2", "-k", "13")
    assert code == EXIT_USAGE


def test_identify(capsys):
    code, out = _json(capsys, "identify", _g("quaternion8"))
    assert code == EXIT_OK
    assert out["matches"] == ["S(8,4)"]
    assert out["order"] == 8


def test_unreadable_group_file(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("[group]\ndegree = 4\ngens = (1,2,5)\n", encoding="utf-8")
    code, _ = _run(capsys, "jennings", bad, "-p", "2")
    assert code == EXIT_USAGE
    code, _ = _run(capsys, "jennings", tmp_path / "missing.txt", "-p", "2")
    assert code == EXIT_USAGE


# ── helpers and entry point ───────────────────────────────────────────────────

def test_int_list():
    assert int_list("2,3,5") == [2, 3, 5]
    assert int_list("6-8") == [6, 7, 8]
    assert int_list("2, 5-6") == [2, 5, 6]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "scripts.cli", "jennings", str(_g("quaternion8")), "-p", "2", "--format", "json"],
        cwd=REPO_ROOT,
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["t_upper"] == 3
