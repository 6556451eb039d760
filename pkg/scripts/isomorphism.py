"""Isomorphism test by invariant screen plus generator-image backtracking."""

from __future__ import annotations

import logging

import numpy as np

from scripts.abelian import abelian_invariants
from scripts.fpgroup import (
    Group,
    GroupLike,
    center,
    derived_subgroup,
    element_order_histogram,
    exponent,
    is_abelian,
    lower_central_series,
    subgroup_generated,
    whole,
)


def _as_group(H: GroupLike) -> Group:
    if isinstance(H, Group):
        return H
    if H.order == H.parent.order:
        return H.parent
    return H.as_group()


def invariant_screen(G: Group) -> tuple:
    """Isomorphism invariants compared before any search."""
    Z = center(G)
    D = derived_subgroup(G)
    return (
        G.order,
        exponent(G),
        tuple(s.order for s in lower_central_series(G)),
        tuple(element_order_histogram(G).items()),
        abelian_invariants(Z).factors,
        D.order,
        tuple(element_order_histogram(D).items()),
    )


def element_signatures(G: Group) -> np.ndarray:
    """Per-element invariants preserved by every isomorphism, one row per element."""
    n = G.order
    orders = G.element_orders
    in_center = center(G).members.astype(np.int64)
    in_derived = derived_subgroup(G).members.astype(np.int64)
    squares = G.mul[np.arange(n), np.arange(n)]
    root_counts = np.bincount(squares, minlength=n)
    return np.stack(
        [
            orders,
            G.centralizer_sizes,
            in_center,
            in_derived,
            root_counts,
            orders[squares],
            root_counts[squares],
        ],
        axis=1,
    )


def greedy_generators(G: Group) -> list[int]:
    """Generating set built by repeatedly adding the highest-order element outside the span."""
    orders = G.element_orders
    ranked = sorted(range(G.order), key=lambda x: (-int(orders[x]), x))
    gens: list[int] = []
    span = subgroup_generated(G, [])
    while span.order < G.order:
        best, best_size = None, -1
        for x in ranked:
            if x in span:
                continue
            size = subgroup_generated(G, gens + [x]).order
            if size > best_size:
                best, best_size = x, size
                if size == G.order:
                    break
        gens.append(best)
        span = subgroup_generated(G, gens)
    return gens


def _extend(G1: Group, G2: Group, gens: list[int], images: list[int]) -> bool:
    """Breadth-first map of <gens> consistent with x*g -> f(x)*f(g) and injective."""
    n1 = G1.order
    f = np.full(n1, -1, dtype=np.int64)
    used = np.zeros(G2.order, dtype=bool)
    f[0] = 0
    used[0] = True
    queue = [0]
    m1, m2 = G1.mul, G2.mul
    i = 0
    while i < len(queue):
        x = queue[i]
        fx = f[x]
        for g, c in zip(gens, images):
            y = m1[x, g]
            fy = m2[fx, c]
            if f[y] < 0:
                if used[fy]:
                    return False
                f[y] = fy
                used[fy] = True
                queue.append(int(y))
            elif f[y] != fy:
                return False
        i += 1
    return True


def is_isomorphic(H1: GroupLike, H2: GroupLike) -> bool:
    G1, G2 = _as_group(H1), _as_group(H2)
    if G1 is G2:
        return True
    if G1.order != G2.order:
        return False
    if invariant_screen(G1) != invariant_screen(G2):
        return False
    if is_abelian(whole(G1)):
        return abelian_invariants(G1) == abelian_invariants(G2)

    gens = greedy_generators(G1)
    sig1 = element_signatures(G1)
    sig2 = element_signatures(G2)
    candidates = [np.flatnonzero((sig2 == sig1[g]).all(axis=1)).tolist() for g in gens]
    logging.debug(
        "Backtracking %s -> %s over %s candidates", G1.label, G2.label, [len(c) for c in candidates]
    )

    images: list[int] = []

    def search(k: int) -> bool:
        if k == len(gens):
            return True
        for c in candidates[k]:
            images.append(c)
            if _extend(G1, G2, gens[: k + 1], images) and search(k + 1):
                return True
            images.pop()
        return False

    return search(0)
