import json

import pytest

from scripts.validate_report import validate_report, validate_report_file


def _dseq_report(**overrides):
    report = {
        "schema": 1,
        "command": "dseq",
        "p": 2,
        "n": 5,
        "k": 14,
        "target": 19,
        "count": 1,
        "sequences": [{"d_seq": {"2": 1, "3": 2, "5": 1, "9": 1}, "e": 3, "t_upper": 19}],
    }
    report.update(overrides)
    return report


def test_valid_report():
    validate_report(_dseq_report())


def test_missing_field():
    report = _dseq_report()
    del report["count"]
    with pytest.raises(ValueError, match="count"):
        validate_report(report, name="dseq")


@pytest.mark.parametrize(
    "overrides",
    [
        {"schema": 2},
        {"command": "explode"},
        {"sequences": [{"d_seq": {"2": 0}, "e": 1, "t_upper": 3}]},
        {"sequences": [{"d_seq": {"two": 1}, "e": 1, "t_upper": 3}]},
    ],
)
def test_invalid_reports(overrides):
    with pytest.raises(ValueError, match="schema errors"):
        validate_report(_dseq_report(**overrides))


def test_not_an_object():
    with pytest.raises(ValueError, match="expected object"):
        validate_report([1, 2, 3])


def test_validate_file(tmp_path):
    path = tmp_path / "reports.json"
    path.write_text(json.dumps([_dseq_report(), _dseq_report(k=15, count=0, sequences=[])]), encoding="utf-8")
    validate_report_file(path)

    path.write_text(json.dumps([_dseq_report(), {"schema": 1}]), encoding="utf-8")
    with pytest.raises(ValueError, match=r"\[1\]"):
        validate_report_file(path)
