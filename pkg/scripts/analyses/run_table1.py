import argparse
import logging
import sys
from pathlib import Path

_REPO_ROOT = Path(__file__).resolve().parents[2]
if str(_REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(_REPO_ROOT))

from scripts.catalog import Catalog
from scripts.table1 import Table1Diff, compare_table1, read_golden, table1_report
from scripts.utils_config import Settings, load_settings
from scripts.utils_io import ensure_dir, write_json


DEFAULT_OUT_DIR = Path("analyses/table1/outputs")


def run_table1(settings: Settings | None = None, out_dir: Path = DEFAULT_OUT_DIR) -> Table1Diff:
    settings = settings or load_settings()
    catalog = Catalog.load(settings.path("catalog_order32"), cap=settings.group_cap)
    golden = read_golden(settings.path("golden_table1"))

    report = table1_report(catalog)
    diff = compare_table1(report, golden, settings.known_discrepancies)

    ensure_dir(out_dir)
    report.to_csv(out_dir / "table1.csv", index=False)
    logging.info("Wrote %s", out_dir / "table1.csv")
    write_json(out_dir / "table1_diff.json", {"schema": 1, "command": "table1", **diff.to_dict()})

    logging.info(
        "Table 1: %d rows, %d differing cells (%d flagged)", len(report), len(diff.diffs), len(diff.diffs) - len(diff.unflagged)
    )
    return diff


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", default=str(DEFAULT_OUT_DIR))
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    diff = run_table1(out_dir=Path(args.out_dir))
    if not diff.clean:
        raise SystemExit(4)


if __name__ == "__main__":
    main()
