import argparse
import logging
import sys
from pathlib import Path

import pandas as pd

_REPO_ROOT = Path(__file__).resolve().parents[2]
if str(_REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(_REPO_ROOT))

from scripts.catalog import Catalog
from scripts.dseq_solver import DSeq, violations
from scripts.fpgroup import Group, derived_subgroup, exponent
from scripts.lie_dimension import jennings_data
from scripts.utils_config import Settings, load_settings
from scripts.utils_io import ensure_dir


DEFAULT_OUT_DIR = Path("analyses/jennings/outputs")

COLUMNS = [
    "id",
    "order",
    "p",
    "n",
    "e",
    "cl",
    "d_seq",
    "t_upper",
    "commutative",
    "derived_cyclic",
    "cyclic_law_ok",
    "prune_ok",
]


def jennings_row(gid: str, G: Group, p: int = 2) -> dict:
    data = jennings_data(G, p)
    D = derived_subgroup(G)
    cyclic = not data.commutative and exponent(D) == D.order
    # d of a real group passes every rule with e = log_p exp(G') as witness
    prune_ok = data.commutative or not violations(data.d, p, data.e)
    return {
        "id": gid,
        "order": G.order,
        "p": p,
        "n": data.n,
        "e": data.e,
        "cl": data.nilpotency_class,
        "d_seq": DSeq.from_dict(data.d).render(),
        "t_upper": data.t_upper,
        "commutative": data.commutative,
        "derived_cyclic": cyclic,
        "cyclic_law_ok": (not cyclic) or data.t_upper == D.order + 1,
        "prune_ok": prune_ok,
    }


def run_jennings_catalog(settings: Settings | None = None, out_dir: Path = DEFAULT_OUT_DIR) -> pd.DataFrame:
    settings = settings or load_settings()
    catalog = Catalog.load(settings.path("catalog_small"), settings.path("catalog_order32"), cap=settings.group_cap)

    rows = [jennings_row(e.label, e.group) for e in catalog]
    df = pd.DataFrame(rows, columns=COLUMNS)

    ensure_dir(out_dir)
    df.to_csv(out_dir / "jennings.csv", index=False)
    logging.info("Wrote %s", out_dir / "jennings.csv")

    for col in ("cyclic_law_ok", "prune_ok"):
        bad = df.loc[~df[col], "id"].tolist()
        if bad:
            logging.error("%s fails for %s", col, bad)
    return df


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", default=str(DEFAULT_OUT_DIR))
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    run_jennings_catalog(out_dir=Path(args.out_dir))


if __name__ == "__main__":
    main()
