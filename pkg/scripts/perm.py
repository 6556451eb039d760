from __future__ import annotations

import re
from dataclasses import dataclass

from scripts.errors import NotABijection


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """Permutation of {0, ..., degree-1} stored as its image list."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise NotABijection(f"images {list(self.images)} are not a bijection on 0..{n - 1}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    def then(self, other: Permutation) -> Permutation:
        """Apply self first, then other."""
        img = other.images
        return Permutation(tuple(img[x] for x in self.images))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse 1-based cycle notation like "(1,2,3)(4,5)"; "()" is the identity."""
    text = text.strip()
    rest = _CYCLE_RE.sub("", text).strip()
    if rest:
        raise NotABijection(f"unexpected text {rest!r} in cycle notation {text!r}")

    images = list(range(degree))
    seen: set[int] = set()
    for body in _CYCLE_RE.findall(text):
        body = body.strip()
        if not body:
            continue
        try:
            points = [int(tok) - 1 for tok in body.split(",")]
        except ValueError as exc:
            raise NotABijection(f"non-integer point in cycle ({body})") from exc
        for pt in points:
            if pt < 0 or pt >= degree:
                raise NotABijection(f"point {pt + 1} outside 1..{degree}")
            if pt in seen:
                raise NotABijection(f"point {pt + 1} appears twice in {text!r}")
            seen.add(pt)
        for i, pt in enumerate(points):
            images[pt] = points[(i + 1) % len(points)]
    return Permutation(tuple(images))


def format_cycles(perm: Permutation) -> str:
    seen = [False] * perm.degree
    out: list[str] = []
    for start in range(perm.degree):
        if seen[start] or perm.images[start] == start:
            seen[start] = True
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(str(x + 1))
            x = perm.images[x]
        out.append("(" + ",".join(cycle) + ")")
    return "".join(out) if out else "()"
