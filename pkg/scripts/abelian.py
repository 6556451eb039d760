from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np
from sympy import factorint

from scripts.errors import NotAbelian
from scripts.fpgroup import GroupLike, as_subgroup, is_abelian


_POWER_TOKEN = re.compile(r"^\(C(\d+)\)\^(\d+)$")
_CYCLIC_TOKEN = re.compile(r"^C(\d+)$")


@dataclass(frozen=True)
class AbelianType:
    """Invariant factors d_1 | d_2 | ... of a finite abelian group; () is trivial."""

    factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors {list(self.factors)} do not form a divisor chain")
        if any(f < 2 for f in self.factors):
            raise ValueError(f"invariant factors must be >= 2, got {list(self.factors)}")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    @property
    def rank(self) -> int:
        return len(self.factors)

    def is_cyclic(self) -> bool:
        return len(self.factors) <= 1

    @classmethod
    def from_cyclic_orders(cls, orders: list[int]) -> AbelianType:
        """Normalise any direct product of cyclic groups to invariant factors."""
        primary: dict[int, list[int]] = {}
        for n in orders:
            for p, e in factorint(n).items():
                primary.setdefault(p, []).append(p**e)
        width = max((len(v) for v in primary.values()), default=0)
        factors = [1] * width
        for powers in primary.values():
            powers.sort(reverse=True)
            for i, q in enumerate(powers):
                factors[i] *= q
        return cls(tuple(sorted(f for f in factors if f > 1)))

    @classmethod
    def parse(cls, text: str) -> AbelianType:
        """Read C-notation: "1", "C8", "C4xC2", "(C2)^3", "C4x(C2)^2"."""
        text = text.strip().replace(" ", "").replace("×", "x")
        if text in ("1", ""):
            return cls()
        orders: list[int] = []
        for tok in text.split("x"):
            m = _POWER_TOKEN.match(tok)
            if m:
                orders.extend([int(m.group(1))] * int(m.group(2)))
                continue
            m = _CYCLIC_TOKEN.match(tok)
            if not m:
                raise ValueError(f"cannot read abelian type {text!r}")
            orders.append(int(m.group(1)))
        return cls.from_cyclic_orders(orders)

    def render(self) -> str:
        if not self.factors:
            return "1"
        counts = Counter(self.factors)
        if len(counts) == 1 and len(self.factors) >= 3:
            return f"(C{self.factors[0]})^{len(self.factors)}"
        return "x".join(f"C{f}" for f in sorted(self.factors, reverse=True))

    def __str__(self) -> str:
        return self.render()


def abelian_invariants(H: GroupLike) -> AbelianType:
    """Invariant factors from element-order counts.

    For each prime p, log_p #{x : x^(p^k) = 1} = sum_i min(e_i, k), so successive
    differences give how many cyclic p-factors have exponent at least k.
    """
    top = as_subgroup(H)
    if not is_abelian(top):
        raise NotAbelian(f"{top.parent.label}: subgroup of order {top.order} is not abelian")
    orders = top.parent.element_orders[top.members]
    cyclic: list[int] = []
    for p in factorint(top.order):
        logs = [0]
        k = 1
        while True:
            count = int(np.count_nonzero(p**k % orders == 0))
            logs.append(round(math.log(count, p)))
            if logs[-1] == logs[-2] and k > 1:
                break
            k += 1
        at_least = [logs[i] - logs[i - 1] for i in range(1, len(logs))] + [0]
        for e in range(1, len(at_least)):
            cyclic.extend([p**e] * (at_least[e - 1] - at_least[e]))
    return AbelianType.from_cyclic_orders(cyclic)
