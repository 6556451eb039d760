import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pandas as pd

_REPO_ROOT = Path(__file__).resolve().parents[2]
if str(_REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(_REPO_ROOT))

from scripts.algebra_oracle import OracleReport, oracle_report
from scripts.catalog import Catalog
from scripts.lie_dimension import bounds_hold, jennings_data
from scripts.utils_config import Settings, load_settings
from scripts.utils_io import ensure_dir, write_json


DEFAULT_OUT_DIR = Path("analyses/oracle/outputs")

COLUMNS = ["id", "order", "t_lower", "t_upper", "t_upper_jennings", "commutative", "identity_ok", "agrees", "bounds_ok"]


def _one(entry, settings: Settings) -> tuple[OracleReport, bool]:
    G = entry.group
    rep = oracle_report(G, 2, cap=settings.algebra_cap, max_rounds=settings.max_rounds)
    ok = rep.t_lower is not None and bounds_hold(jennings_data(G, 2), rep.t_lower)
    logging.debug("%s: t_L=%s t^L=%s agrees=%s", entry.label, rep.t_lower, rep.t_upper_direct, rep.agrees)
    return rep, ok


def run_oracle_sweep(
    settings: Settings | None = None,
    out_dir: Path = DEFAULT_OUT_DIR,
    catalogs: list[Path] | None = None,
) -> pd.DataFrame:
    settings = settings or load_settings()
    paths = catalogs or [settings.path("catalog_small"), settings.path("catalog_order32")]
    catalog = Catalog.load(*paths, cap=settings.group_cap)
    entries = list(catalog)

    if settings.threads > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            results = list(pool.map(lambda e: _one(e, settings), entries))
    else:
        results = [_one(e, settings) for e in entries]

    rows = []
    for entry, (rep, bounds_ok) in zip(entries, results):
        rows.append(
            {
                "id": entry.label,
                "order": rep.order,
                "t_lower": rep.t_lower,
                "t_upper": rep.t_upper_direct,
                "t_upper_jennings": rep.t_upper_jennings,
                "commutative": rep.commutative,
                "identity_ok": all(rep.identity_checks.values()),
                "agrees": rep.agrees,
                "bounds_ok": bounds_ok,
            }
        )
    df = pd.DataFrame(rows, columns=COLUMNS)

    ensure_dir(out_dir)
    df.to_csv(out_dir / "oracle.csv", index=False)
    logging.info("Wrote %s", out_dir / "oracle.csv")
    write_json(out_dir / "oracle.json", [{"schema": 1, "command": "oracle", **rep.to_dict()} for rep, _ in results])

    bad = df.loc[~(df["agrees"] & df["bounds_ok"]), "id"].tolist()
    if bad:
        logging.error("Oracle disagreement or bound failure for %s", bad)
    logging.info("Oracle sweep: %d groups, %d agree", len(df), int(df["agrees"].sum()))
    return df


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", default=str(DEFAULT_OUT_DIR))
    parser.add_argument("--catalog", action="append", default=None)
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    catalogs = [Path(c) for c in args.catalog] if args.catalog else None
    run_oracle_sweep(out_dir=Path(args.out_dir), catalogs=catalogs)


if __name__ == "__main__":
    main()
