"""Exceptions raised by the group and group-algebra modules.

All of them are ValueErrors so callers that only care about "bad input" can keep
catching ValueError, the way the validation scripts always have.
"""

from __future__ import annotations


class GroupAlgebraError(ValueError):
    pass


# ── Group construction ────────────────────────────────────────────────────────

class NotABijection(GroupAlgebraError):
    pass


class DegreeMismatch(GroupAlgebraError):
    pass


class ClosureExceedsCap(GroupAlgebraError):
    def __init__(self, cap: int, label: str = "group") -> None:
        super().__init__(f"{label}: closure exceeds the group cap of {cap} elements")
        self.cap = cap


class NotAbelian(GroupAlgebraError):
    pass


# ── Catalog ───────────────────────────────────────────────────────────────────

class ParseError(GroupAlgebraError):
    def __init__(self, path: str, line: int, column: int, message: str) -> None:
        super().__init__(f"{path}:{line}:{column}: {message}")
        self.path = path
        self.line = line
        self.column = column


class OrderMismatch(GroupAlgebraError):
    pass


class NotInCatalog(GroupAlgebraError):
    pass


class MissingEntries(GroupAlgebraError):
    def __init__(self, missing: list[str]) -> None:
        super().__init__(f"catalog is missing {len(missing)} entries: {missing}")
        self.missing = list(missing)


# ── Lie dimension / solver / oracle ───────────────────────────────────────────

class NotLieNilpotent(GroupAlgebraError):
    pass


class NonPPowerIndex(GroupAlgebraError):
    pass


class TargetNotRepresentable(GroupAlgebraError):
    pass


class CapExceeded(GroupAlgebraError):
    def __init__(self, order: int, cap: int) -> None:
        super().__init__(f"group of order {order} exceeds the cap of {cap}")
        self.order = order
        self.cap = cap


class NoConvergence(GroupAlgebraError):
    pass
