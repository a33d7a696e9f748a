from __future__ import annotations

from dataclasses import dataclass, replace

from .symbolic import Expr

PRIMARY = "primary"
SECONDARY = "secondary"

FIRST = "first"
SECOND = "second"
UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class Constraint:
    """A phase-space constraint phi(q, p) = 0 with its provenance."""

    expr: Expr
    origin: str = PRIMARY
    generation: int = 0
    klass: str = UNCLASSIFIED
    label: int = 0

    def __post_init__(self):
        if self.expr.is_zero:
            raise ValueError("a constraint must be a nonzero expression")
        if self.origin == SECONDARY and self.generation < 1:
            raise ValueError("secondary constraints have generation >= 1")

    def with_class(self, klass: str) -> "Constraint":
        return replace(self, klass=klass)

    @property
    def origin_label(self) -> str:
        if self.origin == PRIMARY:
            return PRIMARY
        return f"{SECONDARY}({self.generation})"
