import argparse
import logging
import sys
from pathlib import Path

import pandas as pd

_REPO_ROOT = Path(__file__).resolve().parents[2]
if str(_REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(_REPO_ROOT))

from scripts.catalog import Catalog, load_group_file
from scripts.classifier import BiconditionalReport, load_case_tables, verify_biconditional
from scripts.utils_config import Settings, load_settings
from scripts.utils_io import ensure_dir, write_json


DEFAULT_OUT_DIR = Path("analyses/classifier/outputs")

# group files with |G'| = 32 that land in a printed case
FIXTURES = ["k14_order512.txt", "k15_order256.txt", "k15_order256_c8xc4.txt"]

COLUMNS = ["group", "k", "n", "t_upper", "target", "case", "consistent", "dseq_consistent"]


def _row(rep: BiconditionalReport) -> dict:
    return {
        "group": rep.label,
        "k": rep.k,
        "n": rep.n,
        "t_upper": rep.t_upper,
        "target": rep.target,
        "case": f"{rep.matched_case.theorem}:{rep.matched_case.case}" if rep.matched_case else "",
        "consistent": rep.consistent,
        "dseq_consistent": rep.dseq_consistent,
    }


def run_classifier_sweep(
    settings: Settings | None = None,
    out_dir: Path = DEFAULT_OUT_DIR,
    include_fixtures: bool = True,
) -> pd.DataFrame:
    settings = settings or load_settings()
    order32 = Catalog.load(settings.path("catalog_order32"), cap=settings.group_cap)
    catalog = Catalog.load(settings.path("catalog_small"), settings.path("catalog_order32"), cap=settings.group_cap)
    tables = load_case_tables(settings.path("cases_k14"), settings.path("cases_k15"))

    groups = [e.group for e in catalog]
    if include_fixtures:
        groups += [load_group_file(settings.path("groups_dir") / name, cap=settings.group_cap).group for name in FIXTURES]

    reports = [verify_biconditional(G, 2, k, order32, tables=tables) for G in groups for k in (14, 15)]
    df = pd.DataFrame([_row(r) for r in reports], columns=COLUMNS)

    ensure_dir(out_dir)
    df.to_csv(out_dir / "classifier.csv", index=False)
    logging.info("Wrote %s", out_dir / "classifier.csv")
    matched = [{"schema": 1, "command": "classify", **r.to_dict()} for r in reports if r.matched_case]
    write_json(out_dir / "classifier_matches.json", matched)

    bad = df.loc[~df["consistent"] | (df["dseq_consistent"] == False), "group"].tolist()  # noqa: E712
    if bad:
        logging.error("Classifier inconsistent for %s", bad)
    logging.info("Classifier sweep: %d runs, %d matches", len(df), len(matched))
    return df


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", default=str(DEFAULT_OUT_DIR))
    parser.add_argument("--no-fixtures", action="store_true")
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    run_classifier_sweep(out_dir=Path(args.out_dir), include_fixtures=not args.no_fixtures)


if __name__ == "__main__":
    main()
