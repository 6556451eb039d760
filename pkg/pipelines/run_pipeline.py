import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

_REPO_ROOT = Path(__file__).resolve().parents[1]
if str(_REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(_REPO_ROOT))

from scripts.analyses.run_classifier_sweep import run_classifier_sweep
from scripts.analyses.run_dseq_scan import SURVIVORS, run_dseq_scan
from scripts.analyses.run_jennings_catalog import run_jennings_catalog
from scripts.analyses.run_oracle_sweep import run_oracle_sweep
from scripts.analyses.run_table1 import run_table1
from scripts.utils_config import load_settings
from scripts.validate_report import validate_report_file


EXPECTED_FEASIBLE = {
    (2, 5, 14): [{"2": 1, "3": 2, "5": 1, "9": 1}],
    (2, 5, 15): [{"2": 1, "3": 1, "4": 1, "5": 1, "7": 1}, {"2": 2, "3": 1, "5": 1, "9": 1}],
    (17, 2, 15): [{"2": 1, "3": 1}],
}

EXPECTED_FIXTURE_CASES = {
    ("k14_order512", 14): "K14:ii(a)",
    ("k15_order256", 15): "K15_P2:i",
    ("k15_order256_c8xc4", 15): "K15_P2:xii",
}


def _write_summary(out_path: Path, checks: dict[str, bool]) -> None:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "checks": checks,
        "passed": all(checks.values()),
        "generated_at": datetime.now(timezone.utc).replace(microsecond=0).isoformat(),
    }
    out_path.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    logging.info("Wrote %s", out_path)


def run() -> None:
    settings = load_settings()
    checks: dict[str, bool] = {}

    # 1) Table 1 regeneration
    diff = run_table1(settings)
    checks["table1"] = diff.clean

    # 2) d-sequence sets and elimination windows (k = 14, 15)
    scan = run_dseq_scan(settings)
    feasible_path = Path("analyses/dseq-scan/outputs/dseq_feasible.json")
    feasible = {(r["p"], r["n"], r["k"]): [s["d_seq"] for s in r["sequences"]] for r in json.loads(feasible_path.read_text(encoding="utf-8"))}
    checks["dseq_sets"] = all(sorted(feasible[t], key=str) == sorted(EXPECTED_FEASIBLE[t], key=str) for t in SURVIVORS)
    checks["dseq_windows"] = bool((scan.loc[~scan["known_survivor"], "count"] == 0).all())

    # 3) Jennings values over the catalogs: cyclic G' law and pruning soundness
    jen = run_jennings_catalog(settings)
    checks["cyclic_derived_law"] = bool(jen["cyclic_law_ok"].all())
    checks["pruning_soundness"] = bool(jen["prune_ok"].all())

    # 4) oracle equivalence and bounds
    oracle = run_oracle_sweep(settings)
    checks["oracle_equivalence"] = bool(oracle["agrees"].all())
    checks["bounds"] = bool(oracle["bounds_ok"].all())

    # 5) classifier consistency, catalog groups plus the |G'| = 32 fixtures
    cls = run_classifier_sweep(settings)
    consistent = bool(cls["consistent"].all()) and not (cls["dseq_consistent"] == False).any()  # noqa: E712
    found = {(g, k): c for g, k, c in zip(cls["group"], cls["k"], cls["case"])}
    checks["classifier"] = consistent and all(found.get(key) == case for key, case in EXPECTED_FIXTURE_CASES.items())

    # 6) validate JSON outputs
    for path in [
        Path("analyses/table1/outputs/table1_diff.json"),
        Path("analyses/dseq-scan/outputs/dseq_feasible.json"),
        Path("analyses/oracle/outputs/oracle.json"),
        Path("analyses/classifier/outputs/classifier_matches.json"),
    ]:
        validate_report_file(path)

    _write_summary(Path("analyses/acceptance/outputs/acceptance.json"), checks)
    failed = sorted(k for k, ok in checks.items() if not ok)
    if failed:
        raise ValueError(f"Acceptance checks failed: {failed}")
    logging.info("All %d acceptance checks passed", len(checks))


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    run()
