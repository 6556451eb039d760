from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml


REPO_ROOT = Path(__file__).resolve().parents[1]
DEFAULT_SETTINGS = REPO_ROOT / "config" / "settings.yml"


ENV_KEYS = ("LIEDIM_GROUP_CAP", "LIEDIM_ALGEBRA_CAP", "LIEDIM_THREADS")


def read_env_file(repo_root: Path) -> dict[str, str]:
    """LIEDIM_* overrides from repo_root/.env, without touching os.environ.

    Other keys are ignored; unknown LIEDIM_ keys and lines that are not
    KEY=VALUE are logged and skipped.
    """
    env_path = repo_root / ".env"
    if not env_path.exists():
        return {}

    found: dict[str, str] = {}
    for lineno, raw in enumerate(env_path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().removeprefix("export ").strip()
        if not sep or not key:
            logging.warning("%s:%d: expected KEY=VALUE, skipped", env_path, lineno)
            continue
        if not key.startswith("LIEDIM_"):
            continue
        if key not in ENV_KEYS:
            logging.warning("%s:%d: unknown setting %s", env_path, lineno, key)
            continue
        found[key] = value.strip().strip("'\"")
    return found


@dataclass(frozen=True)
class Settings:
    group_cap: int = 512
    algebra_cap: int = 128
    threads: int = 1
    max_rounds: int = 200
    paths: dict[str, Path] = field(default_factory=dict)
    known_discrepancies: tuple[dict[str, Any], ...] = ()

    def path(self, key: str) -> Path:
        if key not in self.paths:
            raise ValueError(f"settings: no path configured for {key!r}")
        return self.paths[key]


def _env_int(name: str, default: int, dotenv: dict[str, str]) -> int:
    """Process environment first, then .env, then the YAML value."""
    raw = os.environ.get(name) or dotenv.get(name)
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name}={raw!r} is not an integer") from None
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def load_settings(path: Path = DEFAULT_SETTINGS, *, repo_root: Path = REPO_ROOT) -> Settings:
    dotenv = read_env_file(repo_root)
    cfg = yaml.safe_load(path.read_text(encoding="utf-8")) or {}

    caps = cfg.get("caps", {}) or {}
    paths = {k: repo_root / v for k, v in (cfg.get("paths", {}) or {}).items()}
    known = tuple((cfg.get("table1", {}) or {}).get("known_discrepancies", []) or [])
    for i, item in enumerate(known):
        missing = sorted({"id", "column", "printed"} - set(item))
        if missing:
            raise ValueError(f"{path}: table1.known_discrepancies[{i}] missing keys: {missing}")

    settings = Settings(
        group_cap=_env_int("LIEDIM_GROUP_CAP", int(caps.get("group", 512)), dotenv),
        algebra_cap=_env_int("LIEDIM_ALGEBRA_CAP", int(caps.get("algebra", 128)), dotenv),
        threads=_env_int("LIEDIM_THREADS", int(cfg.get("threads", 1)), dotenv),
        max_rounds=int((cfg.get("upper_powers", {}) or {}).get("max_rounds", 200)),
        paths=paths,
        known_discrepancies=known,
    )
    if settings.group_cap < 1 or settings.algebra_cap < 1:
        raise ValueError(f"{path}: caps must be positive")
    return settings
