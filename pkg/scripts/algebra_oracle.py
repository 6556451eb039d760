"""Brute-force Lie powers of the group algebra F_pG.

Elements of F_pG are coefficient vectors indexed like the group elements. Subspaces
are kept as reduced echelon bases (scripts.gfp), so equal subspaces compare equal.

Lower powers: S_1 = KG, S_(n+1) = span{[s, g]}; KG^[n] is the ideal generated by S_n
and vanishes exactly when S_n does.

Upper powers: the smallest descending chain Q^(1) = KG >= Q^(2) >= ... with
[Q^(n), KG] KG in Q^(n+1) and Q^(i) Q^(j) in Q^(i+j-1) for i, j >= 2, built as a fixpoint.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from scripts import gfp
from scripts.errors import CapExceeded, NoConvergence
from scripts.fpgroup import Group, derived_subgroup
from scripts.gfp import RowReduceResult
from scripts.lie_dimension import jennings_data, lie_dimension_subgroup


DEFAULT_ALGEBRA_CAP = 128
DEFAULT_MAX_ROUNDS = 200


@dataclass(frozen=True, eq=False)
class GroupAlgebra:
    G: Group
    p: int

    @property
    def dim(self) -> int:
        return self.G.order

    def basis_element(self, g: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[g] = 1
        return v

    def one(self) -> np.ndarray:
        return self.basis_element(0)

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Convolution through the multiplication table."""
        xs = np.flatnonzero(a)
        ys = np.flatnonzero(b)
        out = np.zeros(self.dim, dtype=np.int64)
        if xs.size and ys.size:
            np.add.at(out, self.G.mul[np.ix_(xs, ys)].ravel(), np.outer(a[xs], b[ys]).ravel())
        return out % self.p

    def bracket(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (self.multiply(a, b) - self.multiply(b, a)) % self.p

    # rows of B times a group element, all rows at once
    def right_by(self, B: np.ndarray, g: int) -> np.ndarray:
        out = np.empty_like(B)
        out[:, self.G.mul[:, g]] = B
        return out

    def left_by(self, B: np.ndarray, g: int) -> np.ndarray:
        out = np.empty_like(B)
        out[:, self.G.mul[g, :]] = B
        return out

    def bracket_span(self, S: RowReduceResult) -> RowReduceResult:
        """span{[s, g] : s in basis(S), g in G}."""
        out = RowReduceResult.zero(self.dim)
        if S.rank == 0:
            return out
        for g in range(1, self.dim):
            out = gfp.extend(out, (self.right_by(S.matrix, g) - self.left_by(S.matrix, g)) % self.p, self.p)
        return out

    def _multipliers(self) -> list[int]:
        gens = [g for g in self.G.generators if g != 0]
        return gens if gens else list(range(1, self.dim))

    def ideal(self, S: RowReduceResult) -> RowReduceResult:
        """Two-sided ideal generated by S: close under multiplication by generators on both sides."""
        T = S
        mults = self._multipliers()
        while True:
            rows = [self.right_by(T.matrix, g) for g in mults] + [self.left_by(T.matrix, g) for g in mults]
            grown = gfp.extend(T, np.vstack(rows), self.p) if T.rank else T
            if grown.rank == T.rank:
                return T
            T = grown

    def product_space(self, A: RowReduceResult, B: RowReduceResult) -> np.ndarray:
        """All products a*b of basis rows, one product per row."""
        if A.rank == 0 or B.rank == 0:
            return np.zeros((0, self.dim), dtype=np.int64)
        n = self.dim
        # R[y] = A * y for each group element y
        R = np.stack([self.right_by(A.matrix, y) for y in range(n)])
        prod = B.matrix.astype(np.float64) @ R.reshape(n, -1).astype(np.float64)
        return np.rint(prod).astype(np.int64).reshape(-1, n) % self.p


def _check_cap(G: Group, cap: int) -> None:
    if G.order > cap:
        raise CapExceeded(G.order, cap)


@dataclass
class LowerPowers:
    dims: list[int]
    bracket_dims: list[int]
    t_lower: int | None
    commutative: bool


@dataclass
class UpperPowers:
    dims: list[int]
    t_upper_direct: int | None
    levels: list[RowReduceResult] = field(repr=False)
    rounds: int = 0

    def level(self, m: int) -> RowReduceResult:
        """Q^(m), zero past the computed chain."""
        if m - 1 < len(self.levels):
            return self.levels[m - 1]
        return RowReduceResult.zero(self.levels[0].width)


# ── Lower powers ──────────────────────────────────────────────────────────────

def lower_lie_powers(
    G: Group,
    p: int,
    m_max: int | None = None,
    *,
    cap: int = DEFAULT_ALGEBRA_CAP,
) -> LowerPowers:
    _check_cap(G, cap)
    KG = GroupAlgebra(G, p)
    limit = m_max if m_max is not None else G.order + 2
    S = RowReduceResult.full(G.order)
    bracket_dims = [S.rank]
    dims = [S.rank]
    n = 1
    t_lower = None
    while n < limit:
        nxt = KG.bracket_span(S)
        n += 1
        bracket_dims.append(nxt.rank)
        dims.append(KG.ideal(nxt).rank if nxt.rank else 0)
        if nxt.rank == 0:
            t_lower = n
            break
        if nxt.same_space(S):
            break
        S = nxt
    logging.debug("%s p=%d: lower Lie powers %s, t_L=%s", G.label, p, dims, t_lower)
    return LowerPowers(dims=dims, bracket_dims=bracket_dims, t_lower=t_lower, commutative=derived_subgroup(G).is_trivial())


# ── Upper powers ──────────────────────────────────────────────────────────────

def _initial_chain(KG: GroupAlgebra, limit: int) -> list[RowReduceResult]:
    """Ideals generated by the lower bracket spans."""
    S = RowReduceResult.full(KG.dim)
    chain = [S]
    while len(chain) < limit and S.rank:
        nxt = KG.bracket_span(S)
        if nxt.same_space(S):
            break
        chain.append(KG.ideal(nxt) if nxt.rank else nxt)
        S = nxt
    return chain


def upper_lie_powers(
    G: Group,
    p: int,
    m_max: int | None = None,
    *,
    cap: int = DEFAULT_ALGEBRA_CAP,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> UpperPowers:
    _check_cap(G, cap)
    KG = GroupAlgebra(G, p)
    limit = m_max if m_max is not None else G.order + 2
    chain = _initial_chain(KG, limit)

    def grow(i: int, rows: np.ndarray) -> bool:
        """Add rows to Q^(i+1) (0-based i); True when it got larger."""
        if rows.shape[0] == 0:
            return False
        while i >= len(chain):
            if len(chain) >= limit:
                return False
            chain.append(RowReduceResult.zero(KG.dim))
        bigger = gfp.extend(chain[i], rows, p)
        if bigger.rank == chain[i].rank:
            return False
        chain[i] = bigger
        return True

    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise NoConvergence(f"{G.label}: upper Lie powers did not stabilise in {max_rounds} rounds")
        changed = False
        # 1) [Q^(n), KG] KG inside Q^(n+1)
        for n in range(len(chain)):
            if chain[n].rank and n + 1 < limit:
                changed |= grow(n + 1, KG.ideal(KG.bracket_span(chain[n])).matrix)
        # 2) Q^(i) Q^(j) inside Q^(i+j-1), i, j >= 2
        for i in range(2, len(chain) + 1):
            for j in range(i, len(chain) + 1):
                k = i + j - 1
                if k > limit:
                    break
                A, B = chain[i - 1], chain[j - 1]
                rows = np.vstack([KG.product_space(A, B), KG.product_space(B, A)])
                rows = rows[rows.any(axis=1)]
                changed |= grow(k - 1, rows)
        # 3) descending: Q^(n+1) inside Q^(n)
        for n in range(len(chain) - 1, 0, -1):
            changed |= grow(n - 1, chain[n].matrix)
        if not changed:
            break

    while len(chain) > 1 and chain[-1].rank == 0 and chain[-2].rank == 0:
        chain.pop()
    dims = [q.rank for q in chain]
    t_upper = next((i + 1 for i, d in enumerate(dims) if d == 0), None)
    logging.debug("%s p=%d: upper Lie powers %s, t^L=%s after %d rounds", G.label, p, dims, t_upper, rounds)
    return UpperPowers(dims=dims, t_upper_direct=t_upper, levels=chain, rounds=rounds)


# ── Definitional identity ─────────────────────────────────────────────────────

def augmentation_members(KG: GroupAlgebra, Q: RowReduceResult) -> np.ndarray:
    """Mask of g with g - 1 in Q."""
    vecs = np.eye(KG.dim, dtype=np.int64)
    vecs[:, 0] -= 1
    vecs %= KG.p
    rest = gfp.reduce_rows(vecs, Q, KG.p)
    return ~rest.any(axis=1)


def dimension_subgroup_check(
    G: Group,
    p: int,
    m: int,
    *,
    upper: UpperPowers | None = None,
    cap: int = DEFAULT_ALGEBRA_CAP,
) -> bool:
    if upper is None:
        upper = upper_lie_powers(G, p, cap=cap)
    KG = GroupAlgebra(G, p)
    lhs = augmentation_members(KG, upper.level(m))
    rhs = lie_dimension_subgroup(G, p, m).members
    return bool(np.array_equal(lhs, rhs))


@dataclass
class OracleReport:
    label: str
    order: int
    p: int
    t_lower: int | None
    t_upper_direct: int | None
    t_upper_jennings: int
    commutative: bool
    lower_dims: list[int]
    upper_dims: list[int]
    identity_checks: dict[int, bool]

    @property
    def agrees(self) -> bool:
        # lie-dimension reports 1 for commutative KG, the power chains vanish at 2
        expected = 2 if self.commutative else self.t_upper_jennings
        return self.t_upper_direct == expected and all(self.identity_checks.values())

    def to_dict(self) -> dict:
        return {
            "group": self.label,
            "order": self.order,
            "p": self.p,
            "t_lower": self.t_lower,
            "t_upper": self.t_upper_direct,
            "t_upper_jennings": self.t_upper_jennings,
            "commutative": self.commutative,
            "lower_dims": self.lower_dims,
            "upper_dims": self.upper_dims,
            "identity_checks": {str(m): ok for m, ok in self.identity_checks.items()},
            "agrees": self.agrees,
        }


def oracle_report(
    G: Group,
    p: int,
    m_max: int | None = None,
    *,
    cap: int = DEFAULT_ALGEBRA_CAP,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> OracleReport:
    """Lower and upper powers, the Jennings value, and G cap (1 + Q^(m)) = D_(m) per level."""
    _check_cap(G, cap)
    jen = jennings_data(G, p)
    lower = lower_lie_powers(G, p, m_max, cap=cap)
    upper = upper_lie_powers(G, p, m_max, cap=cap, max_rounds=max_rounds)
    last = upper.t_upper_direct or len(upper.dims)
    checks = {m: dimension_subgroup_check(G, p, m, upper=upper, cap=cap) for m in range(1, last + 1)}
    return OracleReport(
        label=G.label,
        order=G.order,
        p=p,
        t_lower=lower.t_lower,
        t_upper_direct=upper.t_upper_direct,
        t_upper_jennings=jen.t_upper,
        commutative=jen.commutative,
        lower_dims=lower.dims,
        upper_dims=upper.dims,
        identity_checks=checks,
    )
