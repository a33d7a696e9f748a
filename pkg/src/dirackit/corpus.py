"""Bundled models with hand-traced expectations, used for golden tests."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    source: str
    feature: str
    J: int
    primaries: int
    secondaries: int
    first_class: int
    second_class: int
    free_multipliers: int
    dof: Fraction
    constraints: tuple    # (expr, origin, class) in label order
    cases: tuple          # trichotomy labels seen, in order of first appearance

    def expected(self) -> dict:
        return {
            "J": self.J,
            "I": self.primaries,
            "K": self.secondaries,
            "N": self.first_class,
            "S": self.second_class,
            "P": self.free_multipliers,
            "dof": str(self.dof),
            "constraints": [list(c) for c in self.constraints],
            "cases": list(self.cases),
        }


CORPUS = (
    CorpusEntry(
        name="free_particle",
        source="dim 2\nL = 1/2*v1^2 + 1/2*v2^2\n",
        feature="regular Lagrangian: invertible Legendre map, no constraints",
        J=0, primaries=0, secondaries=0, first_class=0, second_class=0,
        free_multipliers=0, dof=Fraction(2),
        constraints=(),
        cases=(),
    ),
    CorpusEntry(
        name="first_order",
        source="dim 2\nL = v1*q2\n",
        feature="case (b) only: both multipliers fixed; pure second class",
        J=2, primaries=2, secondaries=0, first_class=0, second_class=2,
        free_multipliers=0, dof=Fraction(1),
        constraints=(("p1 - q2", "primary", "second"), ("p2", "primary", "second")),
        cases=("b",),
    ),
    CorpusEntry(
        name="shift_gauge",
        source="dim 2\nL = 1/2*(v1 - q2)^2\n",
        feature="case (c) then case (a): secondary constraint, pure first class",
        J=2, primaries=1, secondaries=1, first_class=2, second_class=0,
        free_multipliers=1, dof=Fraction(0),
        constraints=(("p2", "primary", "first"), ("p1", "secondary", "first")),
        cases=("c", "a"),
    ),
    CorpusEntry(
        name="mixed_class",
        source="dim 3\nL = v1*q2 - 1/2*q1^2\n",
        feature="cases (b) and (a) together: one first-class and two second-class constraints",
        J=3, primaries=3, secondaries=0, first_class=1, second_class=2,
        free_multipliers=1, dof=Fraction(1),
        constraints=(
            ("p1 - q2", "primary", "second"),
            ("p2", "primary", "second"),
            ("p3", "primary", "first"),
        ),
        cases=("b", "a"),
    ),
    CorpusEntry(
        name="auxiliary",
        source="dim 2\nL = 1/2*v1^2 + 1/2*q2^2\n",
        feature="case (c) then case (b): a secondary constraint fixes the multiplier",
        J=2, primaries=1, secondaries=1, first_class=0, second_class=2,
        free_multipliers=0, dof=Fraction(1),
        constraints=(("p2", "primary", "second"), ("q2", "secondary", "second")),
        cases=("c", "a", "b"),
    ),
)


def get(name: str) -> CorpusEntry:
    for e in CORPUS:
        if e.name == name:
            return e
    raise KeyError(name)


def observed(analysis) -> dict:
    """Headline results of an analysis in the same shape as ``expected``."""
    cases = []
    for rec in analysis.iteration_log:
        for r in rec.residuals:
            if r.case not in cases:
                cases.append(r.case)
    return {
        "J": analysis.J,
        "I": analysis.I,
        "K": analysis.K,
        "N": analysis.N,
        "S": analysis.S,
        "P": analysis.P,
        "dof": str(analysis.dof),
        "constraints": [[str(c.expr), c.origin, c.klass] for c in analysis.constraints],
        "cases": cases,
    }
