import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from scripts.catalog import Catalog, load_group_file
from scripts.classifier import load_case_tables
from scripts.utils_config import load_settings

GROUPS_DIR = REPO_ROOT / "data" / "groups"
ORDER32 = REPO_ROOT / "data" / "catalog" / "order32.txt"
SMALL = REPO_ROOT / "data" / "catalog" / "small.txt"
GOLDEN = REPO_ROOT / "data" / "golden" / "table1.csv"


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture(scope="session")
def settings():
    return load_settings()


@pytest.fixture(scope="session")
def order32():
    return Catalog.load(ORDER32)


@pytest.fixture(scope="session")
def small():
    return Catalog.load(SMALL)


@pytest.fixture(scope="session")
def case_tables():
    return load_case_tables()


@pytest.fixture(scope="session")
def group():
    """group("dihedral8") -> Group from data/groups/dihedral8.txt, cached per session."""
    cache = {}

    def load(name: str):
        if name not in cache:
            cache[name] = load_group_file(GROUPS_DIR / f"{name}.txt").group
        return cache[name]

    return load
