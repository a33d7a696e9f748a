"""Legendre map, velocity Hessian and primary constraints.

With velocity degree <= 2 the momenta are affine in the velocities,
``p = W(q) v + b(q)``, so inverting the Legendre map is a linear-algebra
problem over polynomials in q.  Rows of ``[W | p - b]`` that eliminate to a
zero W-part are exactly the primary constraints; the pivot rows give the
solvable velocities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constraint import PRIMARY, Constraint
from .errors import AlgorithmError, UnsupportedError
from .model import Model
from .symbolic import Expr, differentiate, exact_quotient, substitute
from .symbolic.linalg import row_reduce, span_rref


@dataclass(frozen=True)
class LegendreResult:
    model: Model
    hessian: tuple
    rank: int
    momenta: tuple
    velocity_solution: dict = field(hash=False)
    primaries: tuple
    h_canonical: Expr

    @property
    def dim(self) -> int:
        return self.model.dim

    @property
    def regular(self) -> bool:
        return self.rank == self.model.dim

    @property
    def basis_dependent(self) -> bool:
        # With more than one primary the choice of basis is a normalization.
        return len(self.primaries) > 1


def momenta_map(model: Model) -> list:
    L = model.lagrangian
    return [differentiate(L, f"v{a}") for a in range(1, model.dim + 1)]


def hessian(model: Model) -> tuple:
    """``(W, rank)`` with ``W[a][b] = d2L / dv^a dv^b`` and its generic rank."""
    moms = momenta_map(model)
    W = [[differentiate(pa, f"v{b}") for b in range(1, model.dim + 1)] for pa in moms]
    return W, row_reduce(W).rank


def _strip_factors(phi: Expr, factors) -> Expr:
    # Fraction-free elimination may multiply a row by pivot polynomials in q;
    # divide them back out so the constraint surface gains no spurious locus.
    for g in factors:
        if g.is_constant:
            continue
        while True:
            quo = exact_quotient(phi, g)
            if quo is None:
                break
            phi = quo
    return phi


def legendre_transform(model: Model) -> LegendreResult:
    t = model.table
    d = model.dim
    moms = momenta_map(model)
    W = [[differentiate(pa, f"v{b}") for b in range(1, d + 1)] for pa in moms]
    at_rest = {f"v{a}": 0 for a in range(1, d + 1)}
    rhs = [t.p(a + 1) - substitute(moms[a], at_rest) for a in range(d)]

    ech = row_reduce([W[a] + [rhs[a]] for a in range(d)], ncols=d)
    pivot_values = [ech.rows[r][c] for r, c in ech.pivots]
    raw_primaries = [_strip_factors(ech.rows[r][d], pivot_values) for r in ech.zero_rows()]
    primaries = span_rref(raw_primaries)
    if len(primaries) != d - ech.rank:
        raise AlgorithmError("primary constraints are not independent")

    on_image = {f"p{a}": moms[a - 1] for a in range(1, d + 1)}
    for phi in primaries:
        if not substitute(phi, on_image).is_zero:
            raise AlgorithmError(f"primary {phi} does not vanish on the Legendre image")

    pivot_cols = {c for _, c in ech.pivots}
    solution = {}
    for r, c in ech.pivots:
        row = ech.rows[r]
        num = row[d]
        for f in range(d):
            if f not in pivot_cols and not row[f].is_zero:
                num = num - row[f] * t.v(f + 1)
        piv = row[c]
        if piv.is_constant:
            val = num.scale(1 / piv.constant_value())
        else:
            val = exact_quotient(num, piv)
            if val is None:
                raise UnsupportedError(
                    f"solving for v{c + 1} divides by {piv}; the canonical Hamiltonian "
                    "would not be polynomial"
                )
        solution[f"v{c + 1}"] = val

    energy = sum((t.v(a + 1) * moms[a] for a in range(d)), t.zero()) - model.lagrangian
    h_c = substitute(energy, solution)
    if h_c.involves("v"):
        raise AlgorithmError(
            f"canonical Hamiltonian retains velocities ({h_c}); Lagrangian outside supported class"
        )

    constraints = tuple(
        Constraint(phi, PRIMARY, 0, label=i + 1) for i, phi in enumerate(primaries)
    )
    return LegendreResult(
        model=model,
        hessian=tuple(tuple(row) for row in W),
        rank=ech.rank,
        momenta=tuple(moms),
        velocity_solution=solution,
        primaries=constraints,
        h_canonical=h_c,
    )
