"""Candidate d-sequences for t^L(KG) = p^n - k(p-1) + 1 and the zero-gap pruning rules.

A d-sequence is stored sparsely as {m: d_(m)} for m >= 2 with sum d = n and
2 + (p-1) * sum (m-1) d_(m) equal to the target. Writing a zero at position m+1:

  (i)   m = p^s           -> every later d vanishes
  (ii)  p^(e-1) divides m -> every later d vanishes (exp G' = p^e)
  (iv)  some zero below position pm+1 -> d_(pm+1) <= d_(m+1)
  (v)   d_(s+1) = 0 for every s >= m with nu_p'(s) >= nu_p'(m)

Rule (iii) bounds the target itself and is applied by scan_report.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterable

import pandas as pd
from sympy import isprime

from scripts.errors import TargetNotRepresentable


def nu_p_prime(x: int, p: int) -> int:
    """Largest divisor of x coprime to p."""
    if x < 1:
        raise ValueError(f"nu_p' needs x >= 1, got {x}")
    while x % p == 0:
        x //= p
    return x


def is_p_power(m: int, p: int) -> bool:
    return nu_p_prime(m, p) == 1


@dataclass(frozen=True)
class DSeqProblem:
    p: int
    n: int
    k: int
    assume_noncyclic: bool | None = None

    def __post_init__(self) -> None:
        if not isprime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")

    @property
    def noncyclic(self) -> bool:
        # cyclic G' gives k = 0, so any k >= 1 rules it out
        return self.k >= 1 if self.assume_noncyclic is None else self.assume_noncyclic

    @property
    def target(self) -> int:
        return self.p**self.n - self.k * (self.p - 1) + 1

    def weight(self) -> int:
        """sum_{m>=1} m d_(m+1) demanded by the target."""
        if (self.target - 2) % (self.p - 1):
            raise TargetNotRepresentable(
                f"p={self.p} n={self.n} k={self.k}: target {self.target} - 2 is not divisible by {self.p - 1}"
            )
        return (self.target - 2) // (self.p - 1)

    def e_range(self) -> range:
        return range(1, self.n if self.noncyclic else self.n + 1)


@dataclass(frozen=True)
class DSeq:
    items: tuple[tuple[int, int], ...]
    e: int | None = None

    @classmethod
    def from_dict(cls, d: dict[int, int], e: int | None = None) -> DSeq:
        return cls(tuple(sorted((int(m), int(v)) for m, v in d.items() if v)), e)

    @classmethod
    def parse(cls, text: str) -> DSeq:
        """Read "{2:1, 3:2}" (braces optional)."""
        body = text.strip().removeprefix("{").removesuffix("}")
        d: dict[int, int] = {}
        for part in filter(None, (s.strip() for s in body.split(","))):
            m, sep, v = part.partition(":")
            if not sep or not m.strip().isdigit() or not v.strip().isdigit():
                raise ValueError(f"cannot read d-sequence {text!r}")
            if int(m) < 2:
                raise ValueError(f"d-sequence positions start at 2, got {m.strip()}")
            d[int(m)] = int(v)
        return cls.from_dict(d)

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def get(self, m: int) -> int:
        return self.as_dict().get(m, 0)

    @property
    def n(self) -> int:
        return sum(v for _, v in self.items)

    def t_upper(self, p: int) -> int:
        return 2 + (p - 1) * sum((m - 1) * v for m, v in self.items)

    def render(self) -> str:
        return "{" + ", ".join(f"{m}:{v}" for m, v in self.items) + "}"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Violation:
    rule: str
    m: int
    s: int
    e: int | None = None


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    witnesses: tuple[int, ...]
    violations: tuple[Violation, ...]


# ── Raw enumeration ───────────────────────────────────────────────────────────

def _sort_key(d: dict[int, int]) -> tuple:
    return tuple(sorted(d.items()))


def enumerate_raw(prob: DSeqProblem) -> list[DSeq]:
    """Every sequence with the right length and weight, d_(2) >= 1."""
    if prob.target < 2:
        return []
    total = prob.weight()
    out: list[dict[int, int]] = []
    cur: dict[int, int] = {}

    def rec(pos: int, r: int, w: int) -> None:
        if r == 0:
            if w == 0:
                out.append(dict(cur))
            return
        wt = pos - 1
        if wt > w or r * wt > w:
            return
        lo = 1 if pos == 2 else 0
        for v in range(min(r, w // wt), lo - 1, -1):
            if v:
                cur[pos] = v
            rec(pos + 1, r - v, w - v * wt)
            cur.pop(pos, None)

    rec(2, prob.n, total)
    return [DSeq.from_dict(d) for d in sorted(out, key=_sort_key)]


# ── Rules ─────────────────────────────────────────────────────────────────────

def violations(d: dict[int, int], p: int, e: int | None = None) -> list[Violation]:
    """All rule violations of d; rule (ii) only when e is given."""
    if not d:
        return []
    top = max(d)
    present = [pos for pos in range(2, top + 1) if d.get(pos, 0)]
    zeros = [pos for pos in range(2, top + 1) if not d.get(pos, 0)]
    found: list[Violation] = []

    for pos in zeros:
        m = pos - 1
        for q in present:
            if q <= pos:
                continue
            s = q - 1
            if is_p_power(m, p):
                found.append(Violation("i", m, s))
            if e is not None and m % p ** (e - 1) == 0:
                found.append(Violation("ii", m, s, e))
            if nu_p_prime(s, p) >= nu_p_prime(m, p):
                found.append(Violation("v", m, s))

    if zeros:
        first_gap = zeros[0] - 1
        m = 1
        while p * m + 1 <= top:
            if first_gap < p * m and d.get(p * m + 1, 0) > d.get(m + 1, 0):
                found.append(Violation("iv", m, p * m))
            m += 1
    return found


def prune(seq: DSeq, prob: DSeqProblem) -> Verdict:
    d = seq.as_dict()
    base = violations(d, prob.p)
    if base:
        return Verdict(False, (), tuple(base))

    witnesses: list[int] = []
    failed: list[Violation] = []
    for e in prob.e_range():
        ii = [v for v in violations(d, prob.p, e) if v.rule == "ii"]
        if ii:
            failed.extend(ii)
        else:
            witnesses.append(e)
    if witnesses:
        return Verdict(True, tuple(witnesses), ())
    return Verdict(False, (), tuple(failed))


# ── Pruned search ─────────────────────────────────────────────────────────────

class _Search:
    """Depth-first placement of the next nonzero position for one fixed e."""

    def __init__(self, p: int, n: int, total: int, e: int) -> None:
        self.p = p
        self.n = n
        self.total = total
        self.q = p ** (e - 1)
        self.found: dict[tuple, dict[int, int]] = {}
        self.nodes = 0
        self.d: dict[int, int] = {}

    def next_terminal(self, x: int) -> int:
        """Smallest m >= x at which a zero ends the sequence."""
        a = 1
        while a < x:
            a *= self.p
        b = -(-x // self.q) * self.q
        return min(a, b)

    def max_weight(self, start: int, r: int) -> int:
        """Largest weight r more entries can carry at positions m >= start."""
        if r == 0:
            return 0
        t = []
        x = start
        for _ in range(r):
            y = self.next_terminal(x)
            t.append(y)
            x = y + 1
        best = pre = 0
        for j in range(r):
            best = max(best, pre + (r - j) * t[j])
            pre += t[j]
        return best

    def admissible(self, m: int, r2: int, w2: int) -> bool:
        if w2 < 0:
            return False
        if r2 == 0:
            return w2 == 0
        return r2 * (m + 1) <= w2 <= self.max_weight(m + 1, r2)

    def rec(self, last: int, r: int, w: int, zmin: float, any_zero: bool) -> None:
        self.nodes += 1
        if r == 0:
            if w == 0:
                self.found.setdefault(_sort_key(self.d), dict(self.d))
            return
        # zeros fill positions last+1 .. Q-1, none of them may be terminal
        q_max = min(self.next_terminal(last) + 1, self.total + 1)
        z, az = zmin, any_zero
        for Q in range(last + 1, q_max + 1):
            m = Q - 1
            if Q > last + 1:
                z = min(z, nu_p_prime(Q - 2, self.p))
                az = True
            if m * r > w:
                break
            if az and nu_p_prime(m, self.p) >= z:
                continue
            cap = r
            if az and m % self.p == 0:
                cap = min(cap, self.d.get(m // self.p + 1, 0))
            for v in range(1, cap + 1):
                w2, r2 = w - v * m, r - v
                if w2 < 0:
                    break
                if not self.admissible(m, r2, w2):
                    continue
                self.d[Q] = v
                self.rec(Q, r2, w2, z, az)
                del self.d[Q]

    def run(self) -> None:
        for v in range(1, self.n + 1):
            w2, r2 = self.total - v, self.n - v
            if w2 < 0:
                break
            if not self.admissible(1, r2, w2):
                continue
            self.d[2] = v
            self.rec(2, r2, w2, math.inf, False)
            del self.d[2]


def feasible_set(prob: DSeqProblem) -> list[DSeq]:
    """Sequences surviving prune, found without materialising the raw set."""
    if prob.target < 2:
        return []
    total = prob.weight()
    witnesses: dict[tuple, list[int]] = {}
    seqs: dict[tuple, dict[int, int]] = {}
    nodes = 0
    for e in prob.e_range():
        search = _Search(prob.p, prob.n, total, e)
        search.run()
        nodes += search.nodes
        for key, d in search.found.items():
            seqs.setdefault(key, d)
            witnesses.setdefault(key, []).append(e)
    logging.debug("p=%d n=%d k=%d: %d sequences, %d search nodes", prob.p, prob.n, prob.k, len(seqs), nodes)
    return [DSeq.from_dict(seqs[key], min(witnesses[key])) for key in sorted(seqs)]


def feasible_by_filter(prob: DSeqProblem) -> list[DSeq]:
    """enumerate_raw filtered by prune; only practical for small targets."""
    out = []
    for seq in enumerate_raw(prob):
        verdict = prune(seq, prob)
        if verdict.feasible:
            out.append(DSeq(seq.items, min(verdict.witnesses)))
    return out


# ── Scan ──────────────────────────────────────────────────────────────────────

def rule_iii_excludes(p: int, n: int, k: int) -> bool:
    """For p >= 5 and t^L < p^n + 1: t^L = t_L <= p^(n-1) + 2p - 1."""
    prob = DSeqProblem(p, n, k)
    return p >= 5 and prob.target < p**n + 1 and prob.target > p ** (n - 1) + 2 * p - 1


def _scan_one(p: int, n: int, k: int) -> dict:
    prob = DSeqProblem(p, n, k)
    row = {"p": p, "n": n, "k": k, "target": prob.target, "count": 0, "excluded_by": ""}
    if prob.target < 2:
        row["excluded_by"] = "target<2"
    elif (prob.target - 2) % (p - 1):
        row["excluded_by"] = "not-representable"
    elif rule_iii_excludes(p, n, k):
        row["excluded_by"] = "rule-iii"
    else:
        row["count"] = len(feasible_set(prob))
    return row


def scan_report(
    p_values: Iterable[int],
    n_values: Iterable[int],
    k_values: Iterable[int],
    *,
    threads: int = 1,
) -> pd.DataFrame:
    triples = list(product(p_values, n_values, k_values))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda t: _scan_one(*t), triples))
    else:
        rows = [_scan_one(*t) for t in triples]
    df = pd.DataFrame(rows, columns=["p", "n", "k", "target", "count", "excluded_by"])
    logging.info("Scanned %d (p, n, k) triples, %d with survivors", len(df), int((df["count"] > 0).sum()))
    return df
