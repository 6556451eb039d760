"""Finite groups as multiplication tables.

Elements are indexed 0..order-1 with the identity at 0. ``mul[a, b]`` is the index
of the product "a then b" (the composition used for permutations: apply a first).
Subgroups are boolean membership vectors over the parent's element indices.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from scripts.errors import ClosureExceedsCap, DegreeMismatch
from scripts.perm import Permutation


DEFAULT_GROUP_CAP = 512


@dataclass(frozen=True, eq=False)
class Group:
    mul: np.ndarray
    inv: np.ndarray
    elements: tuple[Permutation, ...] | None = None
    generators: tuple[int, ...] = ()
    label: str = "group"

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        cur = idx.copy()
        k = 1
        while (orders == 0).any():
            cur = self.mul[cur, idx]
            k += 1
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
        return orders

    @cached_property
    def centralizer_sizes(self) -> np.ndarray:
        return (self.mul == self.mul.T).sum(axis=1)

    def __repr__(self) -> str:
        return f"Group({self.label!r}, order={self.order})"


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: Group
    members: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return int(self.members.sum())

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def is_trivial(self) -> bool:
        return self.order == 1

    def issubset(self, other: Subgroup) -> bool:
        return bool(np.all(other.members[self.members]))

    def __contains__(self, index: int) -> bool:
        return bool(self.members[index])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members.tobytes()))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent.label!r})"

    def as_group(self) -> Group:
        """Induced group on the members, identity first, other members in parent order."""
        idx = self.indices()
        pos = np.full(self.parent.order, -1, dtype=np.int64)
        pos[idx] = np.arange(idx.size)
        mul = pos[self.parent.mul[np.ix_(idx, idx)]]
        inv = pos[self.parent.inv[idx]]
        elements = None
        if self.parent.elements is not None:
            elements = tuple(self.parent.elements[i] for i in idx)
        return Group(mul=mul, inv=inv, elements=elements, label=f"subgroup of {self.parent.label}")


GroupLike = Group | Subgroup


# ── Construction ──────────────────────────────────────────────────────────────

def group_from_generators(
    gens: Sequence[Permutation],
    *,
    cap: int = DEFAULT_GROUP_CAP,
    label: str = "group",
) -> Group:
    """Breadth-first closure from the identity, generators tried in input order."""
    if not gens:
        return Group(
            mul=np.zeros((1, 1), dtype=np.int64),
            inv=np.zeros(1, dtype=np.int64),
            elements=(Permutation(()),),
            label=label,
        )

    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatch(f"{label}: generators of degree {degree} and {g.degree}")

    identity = Permutation.identity(degree)
    elements: list[Permutation] = [identity]
    index: dict[tuple[int, ...], int] = {identity.images: 0}
    parent: list[int] = [-1]
    via: list[int] = [-1]
    right: list[list[int]] = []

    i = 0
    while i < len(elements):
        x = elements[i]
        row = []
        for k, g in enumerate(gens):
            y = x.then(g)
            j = index.get(y.images)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise ClosureExceedsCap(cap, label)
                index[y.images] = j
                elements.append(y)
                parent.append(i)
                via.append(k)
            row.append(j)
        right.append(row)
        i += 1

    n = len(elements)
    R = np.asarray(right, dtype=np.int64)
    mul = np.empty((n, n), dtype=np.int64)
    mul[:, 0] = np.arange(n)
    # element b = parent(b) * gen(b), so a*b = (a*parent(b)) * gen(b)
    for b in range(1, n):
        mul[:, b] = R[mul[:, parent[b]], via[b]]
    inv = (mul == 0).argmax(axis=1)

    gen_idx = tuple(index[g.images] for g in gens)
    logging.debug("Built %s of order %d from %d generators", label, n, len(gens))
    return Group(mul=mul, inv=inv, elements=tuple(elements), generators=gen_idx, label=label)


def verify_table(G: Group, *, samples: int = 500, seed: int = 0) -> bool:
    """Sampled associativity plus identity and inverse checks."""
    n = G.order
    idx = np.arange(n)
    if not (np.array_equal(G.mul[0], idx) and np.array_equal(G.mul[:, 0], idx)):
        return False
    if not (np.all(G.mul[idx, G.inv] == 0) and np.all(G.mul[G.inv, idx] == 0)):
        return False
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, n, size=(3, samples))
    return bool(np.all(G.mul[G.mul[a, b], c] == G.mul[a, G.mul[b, c]]))


# ── Subgroups ─────────────────────────────────────────────────────────────────

def _closure_mask(G: Group, seed: Iterable[int]) -> np.ndarray:
    seeds = np.unique(np.asarray(list(seed), dtype=np.int64))
    if seeds.size and (seeds.min() < 0 or seeds.max() >= G.order):
        raise IndexError(f"{G.label}: seed index out of range 0..{G.order - 1}")
    seeds = seeds[seeds != 0]
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size and seeds.size:
        nxt = np.unique(G.mul[np.ix_(frontier, seeds)].ravel())
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return mask


def subgroup_generated(G: Group, seed: Iterable[int]) -> Subgroup:
    return Subgroup(G, _closure_mask(G, seed))


def whole(G: Group) -> Subgroup:
    return Subgroup(G, np.ones(G.order, dtype=bool))


def trivial(G: Group) -> Subgroup:
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    return Subgroup(G, mask)


def as_subgroup(H: GroupLike) -> Subgroup:
    return whole(H) if isinstance(H, Group) else H


def commutator_subgroup(G: Group, A: Subgroup, B: Subgroup) -> Subgroup:
    """Subgroup generated by all [a, b] = a^-1 b^-1 a b."""
    a = A.indices()
    b = B.indices()
    m = G.mul
    x = m[np.ix_(G.inv[a], G.inv[b])]
    x = m[x, a[:, None]]
    x = m[x, b[None, :]]
    return subgroup_generated(G, np.unique(x))


def lower_central_series(H: GroupLike) -> list[Subgroup]:
    """[γ_1 = H, γ_2, ...] stopping at the trivial term or at the first repeat."""
    top = as_subgroup(H)
    G = top.parent
    series = [top]
    while not series[-1].is_trivial():
        nxt = commutator_subgroup(G, series[-1], top)
        if nxt == series[-1]:
            break
        series.append(nxt)
    return series


def nilpotency_class(H: GroupLike) -> int | None:
    series = lower_central_series(H)
    if not series[-1].is_trivial():
        return None
    return len(series) - 1


def derived_subgroup(H: GroupLike) -> Subgroup:
    top = as_subgroup(H)
    return commutator_subgroup(top.parent, top, top)


def power_map(G: Group, q: int, idx: np.ndarray | None = None) -> np.ndarray:
    """x^q for each x in idx (all elements by default)."""
    base = np.arange(G.order) if idx is None else np.asarray(idx, dtype=np.int64)
    result = np.zeros_like(base)
    while q:
        if q & 1:
            result = G.mul[result, base]
        base = G.mul[base, base]
        q >>= 1
    return result


def power_subgroup(G: Group, H: Subgroup, q: int) -> Subgroup:
    if q < 1:
        raise ValueError(f"power must be positive, got {q}")
    if q == 1:
        return H
    return subgroup_generated(G, np.unique(power_map(G, q, H.indices())))


def center(H: GroupLike) -> Subgroup:
    top = as_subgroup(H)
    idx = top.indices()
    sub = top.parent.mul[np.ix_(idx, idx)]
    central = (sub == sub.T).all(axis=1)
    mask = np.zeros(top.parent.order, dtype=bool)
    mask[idx[central]] = True
    return Subgroup(top.parent, mask)


def is_abelian(H: GroupLike) -> bool:
    top = as_subgroup(H)
    idx = top.indices()
    sub = top.parent.mul[np.ix_(idx, idx)]
    return bool((sub == sub.T).all())


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.parent, A.members & B.members)


def join(G: Group, A: Subgroup, B: Subgroup) -> Subgroup:
    return subgroup_generated(G, np.flatnonzero(A.members | B.members))


def is_normal(G: Group, H: Subgroup) -> bool:
    h = H.indices()
    g = np.arange(G.order)
    conj = G.mul[G.mul[np.ix_(G.inv[g], h)], g[:, None]]
    return bool(H.members[conj].all())


def exponent(H: GroupLike) -> int:
    top = as_subgroup(H)
    orders = top.parent.element_orders[top.members]
    return math.lcm(*(int(o) for o in np.unique(orders)))


def element_order_histogram(H: GroupLike) -> dict[int, int]:
    top = as_subgroup(H)
    counts = Counter(int(o) for o in top.parent.element_orders[top.members])
    return dict(sorted(counts.items()))
