"""Regenerate the order-32 invariants table and diff it against the printed transcription."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable

import pandas as pd

from scripts.abelian import AbelianType
from scripts.catalog import Catalog, fingerprint, id_sort_key
from scripts.errors import MissingEntries


COLUMNS = ["id", "exp", "center", "g2", "g4", "g2_cap_z", "g4_cap_z", "cl"]
VALUE_COLUMNS = COLUMNS[1:]

# Abelian groups of order 32 have no row.
_ABELIAN_32 = {1, 3, 16, 21, 36, 45, 51}
TABLE1_IDS = [f"S(32,{i})" for i in range(1, 52) if i not in _ABELIAN_32]


@dataclass(frozen=True)
class CellDiff:
    id: str
    column: str
    printed: str
    machine: str
    known: bool = False


@dataclass(frozen=True)
class RuleFlag:
    id: str
    rule: str
    columns: tuple[str, ...]


@dataclass
class Table1Diff:
    report: pd.DataFrame
    diffs: list[CellDiff] = field(default_factory=list)
    rule_flags: list[RuleFlag] = field(default_factory=list)
    stale: list[dict[str, Any]] = field(default_factory=list)
    unjustified: list[dict[str, Any]] = field(default_factory=list)

    @property
    def unflagged(self) -> list[CellDiff]:
        return [d for d in self.diffs if not d.known]

    @property
    def clean(self) -> bool:
        return not self.unflagged and not self.unjustified

    def to_dict(self) -> dict[str, Any]:
        return {
            "rows": int(len(self.report)),
            "clean": self.clean,
            "diffs": [asdict(d) for d in self.diffs],
            "rule_flags": [{"id": f.id, "rule": f.rule, "columns": list(f.columns)} for f in self.rule_flags],
            "stale": list(self.stale),
            "unjustified": list(self.unjustified),
        }


# ── Report ────────────────────────────────────────────────────────────────────

def table1_row(gid: str, group) -> dict[str, str]:
    fp = fingerprint(group)
    return {
        "id": gid,
        "exp": str(fp.exponent),
        "center": str(fp.center),
        "g2": str(fp.g2),
        "g4": str(fp.g4),
        "g2_cap_z": str(fp.g2_cap_z),
        "g4_cap_z": str(fp.g4_cap_z),
        "cl": str(fp.nilpotency_class),
    }


def table1_report(catalog: Catalog, ids: Iterable[str] = TABLE1_IDS) -> pd.DataFrame:
    wanted = sorted(ids, key=id_sort_key)
    present = {e.id: e for e in catalog.entries if e.id is not None}
    missing = [gid for gid in wanted if gid not in present]
    if missing:
        raise MissingEntries(missing)

    rows = []
    for gid in wanted:
        rows.append(table1_row(gid, present[gid].group))
        logging.debug("Table 1 row %s done", gid)
    return pd.DataFrame(rows, columns=COLUMNS)


def read_golden(path: Path) -> pd.DataFrame:
    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    missing = [c for c in COLUMNS if c not in df.columns]
    if missing:
        raise ValueError(f"{path}: missing required columns: {missing}")
    dupes = sorted(df.loc[df["id"].duplicated(), "id"].unique())
    if dupes:
        raise ValueError(f"{path}: duplicate ids: {dupes}")
    df = df[COLUMNS].copy()
    for c in COLUMNS:
        df[c] = df[c].str.strip()
    return df


# ── Printed-row consistency ───────────────────────────────────────────────────

def _order(cell: str) -> int:
    return AbelianType.parse(cell).order


def printed_rule_flags(golden: pd.DataFrame) -> list[RuleFlag]:
    """Rows of the printed table that contradict themselves, independent of any machine value."""
    flags: list[RuleFlag] = []
    for r in golden.to_dict(orient="records"):
        gid = r["id"]
        exp = int(r["exp"])
        cl = int(r["cl"])
        z, g2, g4 = _order(r["center"]), _order(r["g2"]), _order(r["g4"])
        g2z, g4z = _order(r["g2_cap_z"]), _order(r["g4_cap_z"])

        if exp >= 8 and g4 == 1:
            flags.append(RuleFlag(gid, "exponent >= 8 forces G^4 != 1", ("exp", "g4")))
        if exp <= 4 and g4 != 1:
            flags.append(RuleFlag(gid, "exponent <= 4 forces G^4 = 1", ("exp", "g4")))
        if g2z > min(g2, z):
            flags.append(RuleFlag(gid, "|G^2 cap Z| <= min(|G^2|, |Z|)", ("g2_cap_z", "g2", "center")))
        if g4z > min(g4, z):
            flags.append(RuleFlag(gid, "|G^4 cap Z| <= min(|G^4|, |Z|)", ("g4_cap_z", "g4", "center")))
        if g2z == g2 and cl > 2:
            flags.append(RuleFlag(gid, "G^2 inside Z forces class <= 2", ("g2_cap_z", "g2", "cl")))
        if g4 > g2:
            flags.append(RuleFlag(gid, "|G^4| <= |G^2|", ("g4", "g2")))
    return flags


# ── Diff ──────────────────────────────────────────────────────────────────────

def compare_table1(
    report: pd.DataFrame,
    golden: pd.DataFrame,
    known_discrepancies: Iterable[dict[str, Any]] = (),
) -> Table1Diff:
    known = {(k["id"], k["column"]): k for k in known_discrepancies}
    printed = golden.set_index("id")
    machine = report.set_index("id")

    missing = [gid for gid in machine.index if gid not in printed.index]
    if missing:
        raise MissingEntries(missing)

    diffs: list[CellDiff] = []
    for gid in machine.index:
        for col in VALUE_COLUMNS:
            a, b = printed.at[gid, col], machine.at[gid, col]
            if a != b:
                diffs.append(CellDiff(gid, col, a, b, known=(gid, col) in known))

    rule_flags = printed_rule_flags(golden[golden["id"].isin(machine.index)])
    ruled = {(f.id, c) for f in rule_flags for c in f.columns}
    differing = {(d.id, d.column) for d in diffs}

    stale, unjustified = [], []
    for key, item in known.items():
        if key not in differing:
            stale.append(dict(item))
            logging.warning("Known discrepancy %s %s no longer differs", *key)
        elif key not in ruled:
            # differs from the machine value but no printed-row rule backs it
            logging.warning("Known discrepancy %s %s is not backed by a consistency rule", *key)
        if key[0] in printed.index and str(item["printed"]) != printed.at[key[0], key[1]]:
            unjustified.append(dict(item))
            logging.warning("Known discrepancy %s %s lists printed value %r, golden has %r", *key, item["printed"], printed.at[key[0], key[1]])

    for d in diffs:
        if d.known:
            logging.warning("Flagged printed cell %s %s: printed %s, machine %s", d.id, d.column, d.printed, d.machine)
        else:
            logging.error("Mismatch %s %s: printed %s, machine %s", d.id, d.column, d.printed, d.machine)
    return Table1Diff(report=report, diffs=diffs, rule_flags=rule_flags, stale=stale, unjustified=unjustified)
