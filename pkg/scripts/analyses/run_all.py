import logging
import sys
from pathlib import Path

_REPO_ROOT = Path(__file__).resolve().parents[2]
if str(_REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(_REPO_ROOT))

from scripts.analyses.run_classifier_sweep import run_classifier_sweep
from scripts.analyses.run_dseq_scan import run_dseq_scan
from scripts.analyses.run_jennings_catalog import run_jennings_catalog
from scripts.analyses.run_oracle_sweep import run_oracle_sweep
from scripts.analyses.run_table1 import run_table1
from scripts.utils_config import Settings, load_settings


def run_all(settings: Settings | None = None) -> dict:
    settings = settings or load_settings()
    return {
        "table1": run_table1(settings),
        "dseq_scan": run_dseq_scan(settings),
        "jennings": run_jennings_catalog(settings),
        "oracle": run_oracle_sweep(settings),
        "classifier": run_classifier_sweep(settings),
    }


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    run_all()
