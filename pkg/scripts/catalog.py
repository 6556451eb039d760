"""Group catalog files, fingerprints and Small-Groups identification.

Catalog format (UTF-8, line oriented)::

    [group]
    # free comment
    id = "S(32,4)"
    name = "optional label"
    degree = 32
    gens = (1,2,3)(4,5) | (1,4) | ...

Blank lines separate entries. A single group file uses the same format with one
entry; its id is optional.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from scripts.abelian import AbelianType, abelian_invariants
from scripts.errors import NotABijection, NotInCatalog, OrderMismatch, ParseError
from scripts.fpgroup import (
    DEFAULT_GROUP_CAP,
    Group,
    GroupLike,
    as_subgroup,
    center,
    derived_subgroup,
    element_order_histogram,
    exponent,
    group_from_generators,
    intersection,
    is_abelian,
    nilpotency_class,
    power_subgroup,
    whole,
)
from scripts.isomorphism import is_isomorphic
from scripts.perm import Permutation, parse_cycles


ID_RE = re.compile(r"^S\((\d+),\s*(\d+)\)$")
_KEY_RE = re.compile(r"^(\w+)\s*=\s*(.*)$")
_KEYS = {"id", "name", "degree", "gens"}


@dataclass(frozen=True)
class CatalogEntry:
    id: str | None
    degree: int
    generators: tuple[Permutation, ...]
    group: Group
    name: str | None = None

    @property
    def label(self) -> str:
        return self.id or self.name or "group"


def parse_id(text: str) -> tuple[int, int]:
    m = ID_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a Small-Groups id: {text!r}")
    return int(m.group(1)), int(m.group(2))


def id_sort_key(text: str) -> tuple[int, int]:
    return parse_id(text)


# ── Parsing ───────────────────────────────────────────────────────────────────

def _unquote(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] == '"':
        return value[1:-1]
    return value


def _split_blocks(path: Path) -> list[tuple[int, list[tuple[int, str]]]]:
    """(header line, [(line number, text), ...]) per `[group]` block; comments dropped."""
    blocks: list[tuple[int, list[tuple[int, str]]]] = []
    current: list[tuple[int, str]] | None = None
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[group]":
            current = []
            blocks.append((lineno, current))
            continue
        if current is None:
            raise ParseError(str(path), lineno, 1, "expected [group] header")
        current.append((lineno, raw))
    return blocks


def _build_entry(path: Path, header_line: int, lines: list[tuple[int, str]], cap: int) -> CatalogEntry:
    fields: dict[str, tuple[int, int, str]] = {}
    for lineno, raw in lines:
        indent = len(raw) - len(raw.lstrip())
        m = _KEY_RE.match(raw.strip())
        if not m:
            raise ParseError(str(path), lineno, indent + 1, "expected key = value")
        key, value = m.group(1), m.group(2)
        if key not in _KEYS:
            raise ParseError(str(path), lineno, indent + 1, f"unknown key {key!r}")
        if key in fields:
            raise ParseError(str(path), lineno, indent + 1, f"duplicate key {key!r}")
        fields[key] = (lineno, raw.index(value, indent) + 1 if value else len(raw) + 1, value)

    for key in ("degree", "gens"):
        if key not in fields:
            raise ParseError(str(path), header_line, 1, f"entry is missing {key!r}")

    gid = None
    if "id" in fields:
        lineno, col, value = fields["id"]
        gid = _unquote(value)
        if not ID_RE.match(gid):
            raise ParseError(str(path), lineno, col, f"id {gid!r} is not of the form S(order,index)")
    name = _unquote(fields["name"][2]) if "name" in fields else None

    lineno, col, value = fields["degree"]
    try:
        degree = int(value)
    except ValueError:
        raise ParseError(str(path), lineno, col, f"degree {value!r} is not an integer") from None
    if degree < 1:
        raise ParseError(str(path), lineno, col, f"degree must be positive, got {degree}")

    lineno, col, value = fields["gens"]
    gens: list[Permutation] = []
    for chunk in value.split("|"):
        text = chunk.strip()
        if not text:
            raise ParseError(str(path), lineno, col, "empty generator")
        try:
            perm = parse_cycles(text, degree)
        except NotABijection as exc:
            raise ParseError(str(path), lineno, col, str(exc)) from None
        if not perm.is_identity():
            gens.append(perm)
    label = gid or name or f"{path.name}:{header_line}"
    group = group_from_generators(gens, cap=cap, label=label)

    if gid is not None:
        order, _ = parse_id(gid)
        if group.order != order:
            raise OrderMismatch(f"{path}: {gid} generators close to a group of order {group.order}")
    return CatalogEntry(id=gid, degree=degree, generators=tuple(gens), group=group, name=name)


def parse_catalog(path: Path, *, cap: int = DEFAULT_GROUP_CAP) -> list[CatalogEntry]:
    entries = [_build_entry(path, h, b, cap) for h, b in _split_blocks(path)]
    logging.info("Loaded %d groups from %s", len(entries), path)
    return entries


def load_group_file(path: Path, *, cap: int = DEFAULT_GROUP_CAP) -> CatalogEntry:
    entries = parse_catalog(path, cap=cap)
    if len(entries) != 1:
        raise ParseError(str(path), 1, 1, f"expected exactly one [group] entry, found {len(entries)}")
    return entries[0]


# ── Fingerprints ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SubgroupShape:
    """Descriptor for a nonabelian subgroup."""

    order: int
    exponent: int
    nilpotency_class: int | None
    histogram: tuple[tuple[int, int], ...]

    def render(self) -> str:
        return f"nonabelian(order={self.order}, exp={self.exponent}, cl={self.nilpotency_class})"

    def __str__(self) -> str:
        return self.render()


Descriptor = AbelianType | SubgroupShape


def describe(H: GroupLike) -> Descriptor:
    top = as_subgroup(H)
    if is_abelian(top):
        return abelian_invariants(top)
    return SubgroupShape(
        order=top.order,
        exponent=exponent(top),
        nilpotency_class=nilpotency_class(top.as_group()),
        histogram=tuple(element_order_histogram(top).items()),
    )


@dataclass(frozen=True)
class Fingerprint:
    order: int
    exponent: int
    nilpotency_class: int | None
    histogram: tuple[tuple[int, int], ...]
    center: AbelianType
    g2: Descriptor
    g4: Descriptor
    g2_cap_z: Descriptor
    g4_cap_z: Descriptor
    derived: Descriptor


def fingerprint(H: GroupLike) -> Fingerprint:
    top = as_subgroup(H)
    G = top.parent if top.order == top.parent.order else top.as_group()
    W = whole(G)
    Z = center(G)
    G2 = power_subgroup(G, W, 2)
    G4 = power_subgroup(G, W, 4)
    return Fingerprint(
        order=G.order,
        exponent=exponent(G),
        nilpotency_class=nilpotency_class(G),
        histogram=tuple(element_order_histogram(G).items()),
        center=abelian_invariants(Z),
        g2=describe(G2),
        g4=describe(G4),
        g2_cap_z=describe(intersection(G2, Z)),
        g4_cap_z=describe(intersection(G4, Z)),
        derived=describe(derived_subgroup(G)),
    )


# ── Identification ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class AmbiguitySet:
    ids: tuple[str, ...]


class Catalog:
    """Parsed entries with their fingerprints, both fixed at construction."""

    def __init__(self, entries: Iterable[CatalogEntry]) -> None:
        self.entries: tuple[CatalogEntry, ...] = tuple(entries)
        self.fingerprints: tuple[Fingerprint, ...] = tuple(fingerprint(e.group) for e in self.entries)
        logging.debug("Catalog of %d entries fingerprinted", len(self.entries))

    @classmethod
    def load(cls, *paths: Path, cap: int = DEFAULT_GROUP_CAP) -> Catalog:
        entries: list[CatalogEntry] = []
        for path in paths:
            entries.extend(parse_catalog(path, cap=cap))
        return cls(entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def ids(self) -> list[str]:
        return [e.id for e in self.entries if e.id is not None]

    def get(self, gid: str) -> CatalogEntry:
        for e in self.entries:
            if e.id == gid:
                return e
        raise NotInCatalog(f"{gid} is not in the catalog")


def identify(H: GroupLike, catalog: Catalog) -> str | AmbiguitySet:
    fp = fingerprint(H)
    candidates = [e for e, efp in zip(catalog.entries, catalog.fingerprints) if efp == fp]
    logging.debug("Fingerprint screen left %d candidates", len(candidates))
    hits = [e.id for e in candidates if e.id is not None and is_isomorphic(H, e.group)]
    if not hits:
        raise NotInCatalog(f"no catalog group of order {fp.order} is isomorphic to the input")
    if len(hits) > 1:
        return AmbiguitySet(tuple(hits))
    return hits[0]
