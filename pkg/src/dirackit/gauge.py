"""Gauge structure generated by first-class constraints.

Covers infinitesimal gauge variations, structure functions of the
first-class algebra, observable tests, Hamiltonian vector fields and the
explicit reduced phase space when every constraint is affine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .dirac import ConstraintAnalysis
from .errors import ClosureError, UnsupportedError
from .symbolic import Expr, IdealBasis, differentiate, divide, poisson_bracket, reduce_mod
from .symbolic.linalg import (
    inverse_rational,
    matmul_rational,
    nullspace_rational,
    rank_rational,
    transpose,
)


@dataclass(frozen=True)
class GaugeVariation:
    raw: Expr    # {f, G} on all of phase space
    weak: Expr   # its normal form on the constraint surface


def gauge_variation(f: Expr, G: Expr, basis: Optional[IdealBasis] = None) -> GaugeVariation:
    raw = poisson_bracket(f, G)
    return GaugeVariation(raw, reduce_mod(raw, basis) if basis is not None else raw)


@dataclass(frozen=True)
class ClosureEntry:
    n: int
    m: int
    coefficients: tuple   # f^p_{nm}, p = 1..N
    residual: Expr


@dataclass(frozen=True)
class ClosureTable:
    generators: tuple
    entries: tuple
    basis_dependent: bool = True

    def coefficient(self, n: int, m: int, p: int) -> Expr:
        """f^p_{nm} with 1-based indices; antisymmetric in (n, m)."""
        table = self.generators[0].table
        if n == m:
            return table.zero()
        for e in self.entries:
            if (e.n, e.m) == (n, m):
                return e.coefficients[p - 1]
            if (e.n, e.m) == (m, n):
                return -e.coefficients[p - 1]
        raise KeyError((n, m))


def close_pair(Gn: Expr, Gm: Expr, generators: Sequence[Expr], basis: IdealBasis) -> tuple:
    """Write ``{Gn, Gm}`` as ``sum_p f^p G_p`` plus a weakly vanishing remainder."""
    quotients, rem = divide(poisson_bracket(Gn, Gm), list(generators))
    return tuple(quotients), reduce_mod(rem, basis)


def closure_table(generators: Sequence[Expr], basis: IdealBasis) -> ClosureTable:
    generators = tuple(generators)
    entries = []
    for n in range(len(generators)):
        for m in range(n + 1, len(generators)):
            coeffs, residual = close_pair(generators[n], generators[m], generators, basis)
            if not residual.is_zero:
                raise ClosureError(
                    f"first-class closure violated for pair ({n + 1}, {m + 1}): residual {residual}"
                )
            entries.append(ClosureEntry(n + 1, m + 1, coeffs, residual))
    return ClosureTable(generators, tuple(entries))


def closure_coefficients(analysis: ConstraintAnalysis) -> ClosureTable:
    return closure_table(analysis.first_class_basis, analysis.basis)


def is_observable(f: Expr, analysis: ConstraintAnalysis) -> tuple:
    """``(True, [])`` if f is gauge invariant on the surface, else ``(False, witnesses)``.

    Witnesses are ``(n, weak residual of {f, G_n})`` pairs with 1-based n.
    """
    witnesses = []
    for n, G in enumerate(analysis.first_class_basis, start=1):
        r = reduce_mod(poisson_bracket(f, G), analysis.basis)
        if not r.is_zero:
            witnesses.append((n, r))
    return not witnesses, witnesses


def hamiltonian_vector_field(G: Expr, analysis: Optional[ConstraintAnalysis] = None) -> list:
    """Components ``(dG/dp_1..dG/dp_d, -dG/dq^1..-dG/dq^d)`` of X with X(f) = {f, G}.

    When an analysis is supplied the field is checked to be tangent to the
    constraint surface.
    """
    t = G.table
    d = t.dim
    comps = [differentiate(G, f"p{a}") for a in range(1, d + 1)]
    comps += [-differentiate(G, f"q{a}") for a in range(1, d + 1)]
    if analysis is not None:
        for c in analysis.constraints:
            if not reduce_mod(apply_field(comps, c.expr), analysis.basis).is_zero:
                raise ClosureError(f"vector field of {G} is not tangent to {c.expr} = 0")
    return comps


def apply_field(components: Sequence[Expr], f: Expr) -> Expr:
    t = f.table
    d = t.dim
    out = t.zero()
    for a in range(d):
        out = out + components[a] * differentiate(f, f"q{a + 1}")
        out = out + components[d + a] * differentiate(f, f"p{a + 1}")
    return out


def flow_preserves_surface(G: Expr, analysis: ConstraintAnalysis, order: int = 2) -> bool:
    """Each Lie-series term ``ad_G^k(phi)/k!`` of every constraint vanishes weakly."""
    for c in analysis.constraints:
        term = c.expr
        for _ in range(order):
            term = poisson_bracket(term, G)
            if not reduce_mod(term, analysis.basis).is_zero:
                return False
    return True


# --- affine reduction -------------------------------------------------------

@dataclass(frozen=True)
class ReducedSpace:
    dimension: int
    basis: tuple          # linear coordinate functions on the reduced space
    form: tuple           # symplectic matrix in those coordinates
    brackets: tuple       # induced Poisson brackets of the coordinates
    tangent_dim: int
    kernel_dim: int
    kernel_matches_gauge: bool


def _linear_part(f: Expr) -> tuple:
    """Gradient vector over (q, p) of an affine phase-space function."""
    t = f.table
    if f.degree() > 1 or f.involves("v") or f.involves("u"):
        raise UnsupportedError(f"nonlinear reduction unsupported: {f} is not affine in (q, p)")
    return [f.terms.get(t.var(name).leading_monomial(), Fraction(0))
            for name in t.names[: 2 * t.dim]]


def _poisson_matrix(d: int) -> list:
    J = [[Fraction(0)] * (2 * d) for _ in range(2 * d)]
    for a in range(d):
        J[a][d + a] = Fraction(1)
        J[d + a][a] = Fraction(-1)
    return J


def _columns(vectors) -> list:
    return transpose(vectors) if vectors else []


def _greedy_extend(start: list, candidates: list, target: int) -> list:
    """Pick up to ``target`` candidates independent of ``start`` and each other."""
    chosen = []
    base = rank_rational(start) if start else 0
    for v in candidates:
        if len(chosen) == target:
            break
        if rank_rational(start + chosen + [v]) == base + len(chosen) + 1:
            chosen.append(v)
    return chosen


def linear_reduction(analysis: ConstraintAnalysis) -> ReducedSpace:
    t = analysis.table
    d = t.dim
    n2 = 2 * d
    A = [_linear_part(c.expr) for c in analysis.constraints]
    J = _poisson_matrix(d)

    tangent = nullspace_rational(A) if A else [
        [Fraction(int(i == j)) for i in range(n2)] for j in range(n2)
    ]
    gauge = [[sum(J[i][k] * g[k] for k in range(n2)) for i in range(n2)]
             for g in (_linear_part(G) for G in analysis.first_class_basis)]
    for X in gauge:
        if any(sum(a * x for a, x in zip(row, X)) for row in A):
            raise ClosureError("gauge vector field leaves the constraint surface")

    # omega(X, Y) = X^T J Y restricted to the tangent space
    if tangent:
        B = _columns(tangent)
        induced = matmul_rational(matmul_rational(tangent, J), B)
        kernel = [
            [sum(c * v[i] for c, v in zip(coef, tangent)) for i in range(n2)]
            for coef in nullspace_rational(induced)
        ]
    else:
        kernel = []
    rk_kernel = rank_rational(kernel) if kernel else 0
    rk_gauge = rank_rational(gauge) if gauge else 0
    rk_both = rank_rational(kernel + gauge) if (kernel or gauge) else 0
    kernel_matches = rk_kernel == rk_gauge == rk_both

    target = len(tangent) - rk_kernel
    complement = _greedy_extend(kernel, tangent, target)

    # coordinate functionals constant along the kernel, independent modulo
    # the constraint functionals themselves
    admissible = nullspace_rational(kernel) if kernel else [
        [Fraction(int(i == j)) for i in range(n2)] for j in range(n2)
    ]
    units = [[Fraction(int(i == j)) for i in range(n2)] for j in range(n2)]
    units = [u for u in units if all(sum(a * b for a, b in zip(u, k)) == 0 for k in kernel)]
    coords = _greedy_extend(A, units + admissible, target)
    if len(coords) != target or len(complement) != target:
        raise ClosureError("could not build a basis of the reduced space")

    if target == 0:
        return ReducedSpace(0, (), (), (), len(tangent), rk_kernel, kernel_matches)

    E = _columns(complement)
    W = matmul_rational(matmul_rational(complement, J), E)
    try:
        W_inv = inverse_rational(W)
    except ZeroDivisionError:
        raise ClosureError("induced form on the reduced space is degenerate") from None
    L = matmul_rational(coords, E)
    Pi = [[-x for x in row] for row in matmul_rational(matmul_rational(L, W_inv), transpose(L))]
    Omega = [[-x for x in row] for row in inverse_rational(Pi)]

    names = t.names[:n2]
    basis = []
    for ell in coords:
        f = t.zero()
        for c, name in zip(ell, names):
            if c:
                f = f + t.var(name).scale(c)
        basis.append(f)
    return ReducedSpace(
        dimension=target,
        basis=tuple(basis),
        form=tuple(tuple(r) for r in Omega),
        brackets=tuple(tuple(r) for r in Pi),
        tangent_dim=len(tangent),
        kernel_dim=rk_kernel,
        kernel_matches_gauge=kernel_matches,
    )
