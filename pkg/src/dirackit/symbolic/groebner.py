"""Buchberger completion and normal forms for constraint ideals.

Weak equality on the constraint surface is decided by reducing to the
normal form modulo a reduced Groebner basis.  Completion is bounded by a
degree cap; a basis that hit the cap is flagged ``truncated`` and any
zero-test made against it is only "unconfirmed".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .expr import Expr, VarTable, grlex_key

DEFAULT_DEGREE_CAP = 12

COMPLETE = "complete"
TRUNCATED = "truncated-at-cap"


@dataclass(frozen=True)
class IdealBasis:
    table: VarTable
    generators: tuple
    order: str = "grlex"
    cap: int = DEFAULT_DEGREE_CAP
    status: str = COMPLETE

    @property
    def complete(self) -> bool:
        return self.status == COMPLETE

    @property
    def is_unit(self) -> bool:
        """True when the ideal is the whole ring (contradictory constraints)."""
        return any(g.is_constant for g in self.generators)

    @classmethod
    def empty(cls, table: VarTable, cap: int = DEFAULT_DEGREE_CAP) -> "IdealBasis":
        return cls(table, (), cap=cap)

    def verdict(self) -> str:
        """Label attached to any weak-equality answer derived from this basis."""
        return "complete" if self.complete else "unconfirmed"


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _reduce_terms(terms: dict, divisors: Sequence, table: VarTable) -> dict:
    """Full multivariate division; returns the remainder's term map.

    ``divisors`` are (leading monomial, leading coeff, Expr) triples.
    """
    p = dict(terms)
    rem = {}
    while p:
        lm = max(p, key=grlex_key)
        c = p[lm]
        for glm, glc, g in divisors:
            if _divides(glm, lm):
                shift = tuple(x - y for x, y in zip(lm, glm))
                factor = c / glc
                for m, gc in g.items():
                    mm = tuple(x + y for x, y in zip(m, shift))
                    s = p.get(mm, 0) - factor * gc
                    if s:
                        p[mm] = s
                    else:
                        p.pop(mm, None)
                break
        else:
            rem[lm] = c
            del p[lm]
    return rem


def _divisors(gens):
    return [(g.leading_monomial(), g.leading_coefficient(), g) for g in gens]


def reduce_mod(f: Expr, basis: IdealBasis) -> Expr:
    """Normal form of ``f`` modulo the ideal; zero iff f vanishes weakly."""
    if not basis.generators or f.is_zero:
        return f
    if f.table != basis.table:
        from ..errors import VarTableMismatch

        raise VarTableMismatch("expression and ideal over different tables")
    return Expr._raw(f.table, _reduce_terms(f.terms, _divisors(basis.generators), f.table))


def divide(f: Expr, divisors: Sequence[Expr]) -> tuple:
    """Multivariate division in the given divisor order.

    Returns ``(quotients, remainder)`` with ``f == sum(q_i * g_i) + remainder``.
    """
    t = f.table
    divs = [(g.leading_monomial(), g.leading_coefficient(), g) for g in divisors]
    quotients = [dict() for _ in divisors]
    p = dict(f.terms)
    rem = {}
    while p:
        lm = max(p, key=grlex_key)
        c = p[lm]
        for k, (glm, glc, g) in enumerate(divs):
            if _divides(glm, lm):
                shift = tuple(x - y for x, y in zip(lm, glm))
                factor = c / glc
                quotients[k][shift] = quotients[k].get(shift, 0) + factor
                for m, gc in g.items():
                    mm = tuple(x + y for x, y in zip(m, shift))
                    s = p.get(mm, 0) - factor * gc
                    if s:
                        p[mm] = s
                    else:
                        p.pop(mm, None)
                break
        else:
            rem[lm] = c
            del p[lm]
    return [Expr(t, q) for q in quotients], Expr._raw(t, rem)


def exact_quotient(f: Expr, g: Expr):
    """``f / g`` when g divides f exactly as polynomials, else ``None``."""
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    (q,), r = divide(f, [g])
    return q if r.is_zero else None


def _spoly(f: Expr, g: Expr) -> Expr:
    fm, gm = f.leading_monomial(), g.leading_monomial()
    lcm = tuple(max(a, b) for a, b in zip(fm, gm))
    fs = tuple(a - b for a, b in zip(lcm, fm))
    gs = tuple(a - b for a, b in zip(lcm, gm))
    return f.mul_monomial(fs, 1 / f.leading_coefficient()) - g.mul_monomial(
        gs, 1 / g.leading_coefficient()
    )


def _interreduce(gens: list) -> list:
    # Drop generators whose leading monomial is divisible by another's.
    gens = sorted(gens, key=lambda g: grlex_key(g.leading_monomial()))
    minimal = []
    for g in gens:
        lm = g.leading_monomial()
        if not any(_divides(h.leading_monomial(), lm) for h in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = Expr._raw(g.table, _reduce_terms(g.terms, _divisors(others), g.table))
        reduced.append(r.monic())
    return sorted(reduced, key=lambda g: grlex_key(g.leading_monomial()))


def groebner_complete(gens: Sequence[Expr], cap: int = DEFAULT_DEGREE_CAP) -> IdealBasis:
    """Reduced Groebner basis under grlex, discarding S-polynomials above ``cap``."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        raise ValueError("groebner_complete needs at least one nonzero generator")
    table = gens[0].table
    for g in gens:
        if g.table != table:
            from ..errors import VarTableMismatch

            raise VarTableMismatch("generators over different tables")
    if any(g.is_constant for g in gens):
        return IdealBasis(table, (table.const(1),), cap=cap)

    basis = [g.monic() for g in gens]
    pairs = list(combinations(range(len(basis)), 2))
    status = COMPLETE
    while pairs:
        # Normal strategy: smallest lcm first.
        def lcm_key(ij):
            a = basis[ij[0]].leading_monomial()
            b = basis[ij[1]].leading_monomial()
            return grlex_key(tuple(max(x, y) for x, y in zip(a, b)))

        pairs.sort(key=lcm_key)
        i, j = pairs.pop(0)
        fm, gm = basis[i].leading_monomial(), basis[j].leading_monomial()
        if all(not (a and b) for a, b in zip(fm, gm)):
            continue  # coprime leading monomials: S-poly reduces to 0
        s = _spoly(basis[i], basis[j])
        if s.degree() > cap:
            status = TRUNCATED
            continue
        h = Expr._raw(table, _reduce_terms(s.terms, _divisors(basis), table))
        if h.is_zero:
            continue
        if h.is_constant:
            return IdealBasis(table, (table.const(1),), cap=cap, status=status)
        basis.append(h.monic())
        k = len(basis) - 1
        pairs.extend((m, k) for m in range(k))
    return IdealBasis(table, tuple(_interreduce(basis)), cap=cap, status=status)


def complete_or_empty(table: VarTable, gens: Sequence[Expr], cap: int = DEFAULT_DEGREE_CAP) -> IdealBasis:
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return IdealBasis.empty(table, cap)
    return groebner_complete(gens, cap)


def is_weakly_zero(f: Expr, basis: IdealBasis) -> bool:
    return reduce_mod(f, basis).is_zero


