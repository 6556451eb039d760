"""Structural case tables for t^L(KG) = |G'| - k(p-1) + 1, k in {14, 15}.

Each printed case is a row in config/cases_k14.json or config/cases_k15.json: the
allowed iso-types of G' plus a list of atoms over subgroup terms.

Terms: G', g3 .. g6 (gamma_i(G)), powers X^q, joins X*Y and intersections X & Y
('*' binds tighter than '&', parentheses allowed).
Atoms: "A <= B", "A == B", "A ~ C8xC2", "|A| = n".
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from scripts.abelian import AbelianType, abelian_invariants
from scripts.catalog import Catalog, describe, identify
from scripts.dseq_solver import DSeqProblem, feasible_set
from scripts.fpgroup import (
    Group,
    Subgroup,
    derived_subgroup,
    intersection,
    is_abelian,
    is_normal,
    join,
    lower_central_series,
    power_subgroup,
    trivial,
)
from scripts.lie_dimension import jennings_data


REPO_ROOT = Path(__file__).resolve().parents[1]
DEFAULT_K14 = REPO_ROOT / "config" / "cases_k14.json"
DEFAULT_K15 = REPO_ROOT / "config" / "cases_k15.json"

BASE_TERMS = ["G'", "g3", "g4", "g5", "g6", "G'^2", "G'^4", "g3^2", "g3^2*G'^4"]


# ── Term language ─────────────────────────────────────────────────────────────

_TOKEN_RE = re.compile(r"\s*(G'|g[3-6]|\d+|[\^*&()])")


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ValueError(f"cannot read term {text!r} at position {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _TermParser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ValueError(f"term {self.text!r} ends early")
        self.i += 1
        return tok

    def parse(self) -> tuple:
        node = self.meet()
        if self.peek() is not None:
            raise ValueError(f"unexpected {self.peek()!r} in term {self.text!r}")
        return node

    def meet(self) -> tuple:
        node = self.join()
        while self.peek() == "&":
            self.take()
            node = ("meet", node, self.join())
        return node

    def join(self) -> tuple:
        node = self.power()
        while self.peek() == "*":
            self.take()
            node = ("join", node, self.power())
        return node

    def power(self) -> tuple:
        node = self.base()
        while self.peek() == "^":
            self.take()
            q = self.take()
            if not q.isdigit() or int(q) < 1:
                raise ValueError(f"bad exponent {q!r} in term {self.text!r}")
            node = ("pow", node, int(q))
        return node

    def base(self) -> tuple:
        tok = self.take()
        if tok == "(":
            node = self.meet()
            if self.take() != ")":
                raise ValueError(f"unbalanced parentheses in term {self.text!r}")
            return node
        if tok == "G'" or tok.startswith("g"):
            return ("base", tok)
        raise ValueError(f"unexpected {tok!r} in term {self.text!r}")


def parse_term(text: str) -> tuple:
    return _TermParser(text).parse()


def render_term(node: tuple) -> str:
    """Canonical spelling, used as the profile key."""
    kind = node[0]
    if kind == "base":
        return node[1]
    if kind == "pow":
        inner = render_term(node[1])
        if node[1][0] in ("join", "meet"):
            inner = f"({inner})"
        return f"{inner}^{node[2]}"
    if kind == "join":
        parts = [render_term(x) if x[0] != "meet" else f"({render_term(x)})" for x in node[1:]]
        return "*".join(parts)
    return " & ".join(render_term(x) for x in node[1:])


def canonical(text: str) -> str:
    return render_term(parse_term(text))


@dataclass(frozen=True)
class Atom:
    kind: str  # "sub", "eq", "iso", "order"
    left: str
    right: str

    def render(self) -> str:
        if self.kind == "order":
            return f"|{self.left}| = {self.right}"
        op = {"sub": "<=", "eq": "==", "iso": "~"}[self.kind]
        return f"{self.left} {op} {self.right}"


_ORDER_ATOM = re.compile(r"^\|(.+)\|\s*=\s*(\d+)$")


def parse_atom(text: str) -> Atom:
    text = text.strip()
    m = _ORDER_ATOM.match(text)
    if m:
        return Atom("order", canonical(m.group(1)), m.group(2))
    for op, kind in (("<=", "sub"), ("==", "eq"), ("~", "iso")):
        if op in text:
            left, right = (s.strip() for s in text.split(op, 1))
            if kind == "iso":
                return Atom(kind, canonical(left), AbelianType.parse(right).render())
            return Atom(kind, canonical(left), canonical(right))
    raise ValueError(f"cannot read atom {text!r}")


# ── Case tables ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CaseRow:
    table: str
    case: str
    sub: str | None
    derived: tuple[str, ...]
    atoms: tuple[Atom, ...]
    augmented_atoms: tuple[Atom, ...] = ()

    @property
    def case_id(self) -> str:
        return f"{self.case}({self.sub})" if self.sub else self.case

    def terms(self) -> set[str]:
        out: set[str] = set()
        for a in self.atoms + self.augmented_atoms:
            out.add(a.left)
            if a.kind in ("sub", "eq"):
                out.add(a.right)
        return out


@dataclass(frozen=True)
class CaseTable:
    name: str
    k: int
    p: int
    rows: tuple[CaseRow, ...]

    def terms(self) -> set[str]:
        out: set[str] = set()
        for r in self.rows:
            out |= r.terms()
        return out


def _normalise_derived(text: str) -> str:
    return text if text.startswith("S(") else AbelianType.parse(text).render()


def _rows(table: str, cases: list[dict[str, Any]]) -> tuple[CaseRow, ...]:
    return tuple(
        CaseRow(
            table=table,
            case=c["case"],
            sub=c.get("sub"),
            derived=tuple(_normalise_derived(d) for d in c["derived"]),
            atoms=tuple(parse_atom(a) for a in c["atoms"]),
            augmented_atoms=tuple(parse_atom(a) for a in c.get("augmented_atoms", [])),
        )
        for c in cases
    )


def load_case_tables(k14_path: Path = DEFAULT_K14, k15_path: Path = DEFAULT_K15) -> dict[str, CaseTable]:
    k14 = json.loads(k14_path.read_text(encoding="utf-8"))
    k15 = json.loads(k15_path.read_text(encoding="utf-8"))
    tables = {"K14": CaseTable("K14", 14, int(k14["p"]), _rows("K14", k14["cases"]))}
    for t in k15["tables"]:
        tables[t["table"]] = CaseTable(t["table"], 15, int(t["p"]), _rows(t["table"], t["cases"]))
    return tables


# ── Profiles ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class TermInfo:
    order: int
    abelian_type: AbelianType | None = None


@dataclass
class StructuralProfile:
    p: int
    derived: str
    terms: dict[str, TermInfo]
    inclusions: set[tuple[str, str]] = field(default_factory=set)
    normal: bool = True
    label: str = "group"

    def info(self, term: str) -> TermInfo | None:
        return self.terms.get(canonical(term))

    def order(self, term: str) -> int | None:
        info = self.info(term)
        return None if info is None else info.order

    def includes(self, a: str, b: str) -> bool:
        a, b = canonical(a), canonical(b)
        if a == b or (a, b) in self.inclusions:
            return True
        return self.order(a) == 1

    def holds(self, atom: Atom) -> bool:
        if atom.kind == "order":
            return self.order(atom.left) == int(atom.right)
        if atom.kind == "iso":
            info = self.info(atom.left)
            return info is not None and info.abelian_type is not None and info.abelian_type.render() == atom.right
        if atom.kind == "sub":
            return self.includes(atom.left, atom.right)
        return self.includes(atom.left, atom.right) and self.includes(atom.right, atom.left)

    def consistency_issues(self) -> list[str]:
        """Chain and divisibility facts every real profile satisfies."""
        issues = []
        chain = ["g6", "g5", "g4", "g3", "G'"]
        for a, b in zip(chain, chain[1:]):
            if a in self.terms and b in self.terms and not self.includes(a, b):
                issues.append(f"{a} not inside {b}")
        if "g3^2" in self.terms and "g3" in self.terms and not self.includes("g3^2", "g3"):
            issues.append("g3^2 not inside g3")
        top = self.order("G'")
        if top is not None:
            for name, info in self.terms.items():
                if top % info.order:
                    issues.append(f"|{name}| = {info.order} does not divide |G'| = {top}")
        if not self.normal:
            issues.append("a referenced subgroup is not normal in G")
        return issues

    @classmethod
    def synthetic(
        cls,
        p: int,
        derived: str,
        terms: dict[str, str | int],
        inclusions: Iterable[tuple[str, str]] = (),
        equalities: Iterable[tuple[str, str]] = (),
        label: str = "synthetic",
    ) -> StructuralProfile:
        """Hand-written profile: term -> C-notation type or bare order."""
        infos: dict[str, TermInfo] = {}
        for name, value in terms.items():
            if isinstance(value, int):
                infos[canonical(name)] = TermInfo(order=value)
            else:
                t = AbelianType.parse(value)
                infos[canonical(name)] = TermInfo(order=t.order, abelian_type=t)
        inc = {(canonical(a), canonical(b)) for a, b in inclusions}
        for a, b in equalities:
            inc.add((canonical(a), canonical(b)))
            inc.add((canonical(b), canonical(a)))
        return cls(p=p, derived=_normalise_derived(derived), terms=infos, inclusions=inc, label=label)

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "p": self.p,
            "derived": self.derived,
            "terms": {
                name: {"order": info.order, "type": str(info.abelian_type) if info.abelian_type else None}
                for name, info in sorted(self.terms.items())
            },
            "inclusions": sorted([a, b] for a, b in self.inclusions if a != b),
        }


def evaluate_term(G: Group, node: tuple, series: list[Subgroup], cache: dict[str, Subgroup]) -> Subgroup:
    key = render_term(node)
    if key in cache:
        return cache[key]
    kind = node[0]
    if kind == "base":
        i = 2 if node[1] == "G'" else int(node[1][1])
        H = series[i - 1] if i <= len(series) else trivial(G)
    elif kind == "pow":
        H = power_subgroup(G, evaluate_term(G, node[1], series, cache), node[2])
    elif kind == "join":
        H = join(G, evaluate_term(G, node[1], series, cache), evaluate_term(G, node[2], series, cache))
    else:
        H = intersection(evaluate_term(G, node[1], series, cache), evaluate_term(G, node[2], series, cache))
    cache[key] = H
    return H


def structural_profile(
    G: Group,
    p: int,
    catalog: Catalog | None = None,
    terms: Iterable[str] = (),
) -> StructuralProfile:
    jennings_data(G, p)  # raises NotLieNilpotent
    series = lower_central_series(G)
    wanted = sorted({canonical(t) for t in list(BASE_TERMS) + list(terms)})
    cache: dict[str, Subgroup] = {}
    subs = {name: evaluate_term(G, parse_term(name), series, cache) for name in wanted}

    infos = {}
    for name, H in subs.items():
        infos[name] = TermInfo(order=H.order, abelian_type=abelian_invariants(H) if is_abelian(H) else None)
    inclusions = {(a, b) for a in wanted for b in wanted if a != b and subs[a].issubset(subs[b])}
    normal = all(is_normal(G, H) for H in subs.values())

    D = derived_subgroup(G)
    if is_abelian(D):
        derived = str(abelian_invariants(D))
    elif D.order == 32 and p == 2:
        if catalog is None:
            raise ValueError(f"{G.label}: G' is nonabelian of order 32, a catalog is needed to identify it")
        found = identify(D, catalog)
        derived = found if isinstance(found, str) else "|".join(found.ids)
    else:
        derived = str(describe(D))
    return StructuralProfile(p=p, derived=derived, terms=infos, inclusions=inclusions, normal=normal, label=G.label)


# ── Matching ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CaseMatch:
    theorem: str
    case: str
    matched_atoms: tuple[str, ...]
    overlaps: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem,
            "case": self.case,
            "matched_atoms": list(self.matched_atoms),
            "overlaps": list(self.overlaps),
        }


def row_holds(profile: StructuralProfile, row: CaseRow, augmented: bool = False) -> bool:
    if profile.derived not in row.derived:
        return False
    atoms = row.atoms + (row.augmented_atoms if augmented else ())
    return all(profile.holds(a) for a in atoms)


def match_table(profile: StructuralProfile, table: CaseTable, augmented: bool = False) -> CaseMatch | None:
    if profile.p != table.p:
        return None
    hits = [row for row in table.rows if row_holds(profile, row, augmented)]
    if not hits:
        return None
    first = hits[0]
    others = tuple(dict.fromkeys(r.case_id for r in hits[1:] if r.case != first.case))
    if others:
        logging.warning("%s: %s matches case %s and also %s", profile.label, table.name, first.case_id, list(others))
    atoms = first.atoms + (first.augmented_atoms if augmented else ())
    return CaseMatch(table.name, first.case_id, tuple(a.render() for a in atoms), others)


def match_k14(profile: StructuralProfile, tables: dict[str, CaseTable] | None = None) -> CaseMatch | None:
    tables = tables or load_case_tables()
    return match_table(profile, tables["K14"])


def match_k15(
    profile: StructuralProfile,
    p: int | None = None,
    tables: dict[str, CaseTable] | None = None,
    *,
    augmented: bool = False,
) -> CaseMatch | None:
    """p = 2 uses the K15_P2 list, p = 17 the single K15_P17 case, any other p has none."""
    tables = tables or load_case_tables()
    p = profile.p if p is None else p
    for table in tables.values():
        if table.k == 15 and table.p == p:
            return match_table(profile, table, augmented)
    return None


# ── Biconditional ─────────────────────────────────────────────────────────────

@dataclass
class BiconditionalReport:
    label: str
    p: int
    k: int
    n: int
    t_upper: int
    target: int
    matched_case: CaseMatch | None
    consistent: bool
    d_seq: dict[int, int]
    dseq_consistent: bool | None = None
    profile: StructuralProfile | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "group": self.label,
            "p": self.p,
            "k": self.k,
            "n": self.n,
            "t_upper": self.t_upper,
            "target": self.target,
            "case": self.matched_case.to_dict() if self.matched_case else None,
            "consistent": self.consistent,
            "d_seq": {str(m): v for m, v in sorted(self.d_seq.items())},
            "dseq_consistent": self.dseq_consistent,
            "profile": self.profile.to_dict() if self.profile else None,
        }


def verify_biconditional(
    G: Group,
    p: int,
    k: int,
    catalog: Catalog | None = None,
    *,
    tables: dict[str, CaseTable] | None = None,
    augmented: bool = False,
) -> BiconditionalReport:
    if k not in (14, 15):
        raise ValueError(f"k must be 14 or 15, got {k}")
    tables = tables or load_case_tables()
    jen = jennings_data(G, p)
    target = p**jen.n - k * (p - 1) + 1

    wanted: set[str] = set()
    for t in tables.values():
        if t.k == k:
            wanted |= t.terms()
    profile = structural_profile(G, p, catalog, wanted)
    match = match_k14(profile, tables) if k == 14 else match_k15(profile, p, tables, augmented=augmented)
    consistent = (jen.t_upper == target) == (match is not None)
    if not consistent:
        logging.warning(
            "%s: t^L=%d target=%d but match=%s", G.label, jen.t_upper, target, match.case if match else None
        )

    dseq_ok = None
    if match is not None:
        expected = {s.items for s in feasible_set(DSeqProblem(p, jen.n, k))}
        dseq_ok = tuple(sorted(jen.d.items())) in expected
    return BiconditionalReport(
        label=G.label,
        p=p,
        k=k,
        n=jen.n,
        t_upper=jen.t_upper,
        target=target,
        matched_case=match,
        consistent=consistent,
        d_seq=dict(jen.d),
        dseq_consistent=dseq_ok,
        profile=profile,
    )
