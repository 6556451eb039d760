"""Lie dimension subgroups D_(m) of KG, char K = p, and the Jennings value of t^L(KG).

D_(m) is the join of gamma_i(G)^(p^j) over all (i, j) with (i-1) p^j >= m-1.
With p^d_(m) = |D_(m) : D_(m+1)|, t^L(KG) = 2 + (p-1) * sum_{m>=1} m d_(m+1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from sympy import isprime

from scripts.errors import NonPPowerIndex, NotLieNilpotent
from scripts.fpgroup import (
    Group,
    Subgroup,
    derived_subgroup,
    exponent,
    lower_central_series,
    nilpotency_class,
    power_subgroup,
    subgroup_generated,
    whole,
)


def require_prime(p: int) -> int:
    if not isprime(p):
        raise ValueError(f"p must be prime, got {p}")
    return int(p)


def p_log(x: int, p: int) -> int | None:
    """log_p(x) when x is a power of p, else None."""
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k if x == 1 else None


def check_lie_nilpotent(G: Group, p: int) -> bool:
    if nilpotency_class(G) is None:
        return False
    return p_log(derived_subgroup(G).order, p) is not None


def _require(G: Group, p: int) -> None:
    if not check_lie_nilpotent(G, p):
        raise NotLieNilpotent(
            f"{G.label}: KG is not Lie nilpotent for p={p} (G must be nilpotent with |G'| a power of p)"
        )


class _PowerTerms:
    """gamma_i(G)^(p^j) with memoisation; the series already ends in the trivial term."""

    def __init__(self, G: Group, p: int) -> None:
        self.G = G
        self.p = p
        self.series = lower_central_series(G)
        self.exp = exponent(G)
        self._cache: dict[tuple[int, int], Subgroup] = {}

    def term(self, i: int, q: int) -> Subgroup:
        key = (i, q)
        if key not in self._cache:
            self._cache[key] = power_subgroup(self.G, self.series[i - 1], q)
        return self._cache[key]

    def dimension_subgroup(self, m: int) -> Subgroup:
        if m <= 1:
            return whole(self.G)
        mask = np.zeros(self.G.order, dtype=bool)
        for i in range(2, len(self.series) + 1):
            q = 1
            while q <= self.exp:
                if (i - 1) * q >= m - 1:
                    mask |= self.term(i, q).members
                q *= self.p
        return subgroup_generated(self.G, np.flatnonzero(mask))


def lie_dimension_subgroup(G: Group, p: int, m: int) -> Subgroup:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    _require(G, p)
    return _PowerTerms(G, p).dimension_subgroup(m)


@dataclass(frozen=True)
class JenningsData:
    p: int
    n: int
    dim_subgroups: tuple[Subgroup, ...]
    d: dict[int, int]
    t_upper: int
    t_upper_formula: int
    commutative: bool
    e: int
    nilpotency_class: int

    @property
    def chain_orders(self) -> list[int]:
        """|D_(2)|, |D_(3)|, ... ending with 1."""
        return [D.order for D in self.dim_subgroups]

    def d_seq(self) -> dict[str, int]:
        return {str(m): v for m, v in sorted(self.d.items())}

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "e": self.e,
            "class": self.nilpotency_class,
            "d_seq": self.d_seq(),
            "t_upper": self.t_upper,
            "t_upper_formula": self.t_upper_formula,
            "commutative": self.commutative,
            "chain_orders": self.chain_orders,
        }


def jennings_t_upper(d: dict[int, int], p: int) -> int:
    return 2 + (p - 1) * sum((m - 1) * v for m, v in d.items())


def jennings_data(G: Group, p: int) -> JenningsData:
    _require(G, p)
    terms = _PowerTerms(G, p)
    derived = derived_subgroup(G)
    n = p_log(derived.order, p)

    chain: list[Subgroup] = []
    m = 2
    while True:
        D = terms.dimension_subgroup(m)
        chain.append(D)
        if D.is_trivial():
            break
        m += 1

    d: dict[int, int] = {}
    for offset, (upper, lower) in enumerate(zip(chain, chain[1:])):
        if not lower.issubset(upper):
            raise NonPPowerIndex(f"{G.label}: D_({offset + 3}) is not inside D_({offset + 2})")
        k = p_log(upper.order // lower.order, p)
        if k is None or upper.order % lower.order:
            raise NonPPowerIndex(f"{G.label}: |D_({offset + 2}) : D_({offset + 3})| is not a power of {p}")
        if k:
            d[offset + 2] = k

    formula = jennings_t_upper(d, p)
    commutative = derived.is_trivial()
    e = p_log(exponent(derived), p)
    data = JenningsData(
        p=p,
        n=n,
        dim_subgroups=tuple(chain),
        d=d,
        t_upper=1 if commutative else formula,
        t_upper_formula=formula,
        commutative=commutative,
        e=e,
        nilpotency_class=nilpotency_class(G),
    )
    logging.debug("%s: d=%s t^L=%d", G.label, d, data.t_upper)
    return data


def cyclic_derived_law(G: Group, p: int) -> bool:
    """For cyclic nontrivial G', t^L(KG) = |G'| + 1."""
    data = jennings_data(G, p)
    derived = derived_subgroup(G)
    if derived.is_trivial() or exponent(derived) != derived.order:
        return True
    return data.t_upper == derived.order + 1


def bounds_hold(data: JenningsData, t_lower: int) -> bool:
    """p+1 <= t_L <= t^L <= |G'|+1 whenever G' != 1."""
    if data.commutative:
        return True
    return data.p + 1 <= t_lower <= data.t_upper <= data.p**data.n + 1 and sum(data.d.values()) == data.n
