"""The Dirac-Bergmann consistency algorithm.

Starting from the primary constraints, each generation brackets every
constraint with the total Hamiltonian ``H = H_c + sum_i u^i phi_i`` and
reduces the result modulo the current constraint ideal.  The residual is
either weakly zero, a condition on the multipliers, or a new u-free relation
which becomes a secondary constraint when it is independent of the ones
already known.  At the fixed point the multiplier equations are solved, the
constraint set is split into first and second class, and the Dirac bracket
data is prepared.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .constraint import FIRST, PRIMARY, SECOND, SECONDARY, Constraint
from .errors import (
    AlgorithmError,
    ClassificationError,
    InconsistentModelError,
    NonTerminatingError,
    UnsupportedError,
)
from .legendre import LegendreResult, legendre_transform
from .model import Model
from .symbolic import (
    DEFAULT_DEGREE_CAP,
    Expr,
    IdealBasis,
    coefficient_split,
    complete_or_empty,
    exact_quotient,
    poisson_bracket,
    reduce_mod,
)
from .symbolic.linalg import adjugate, determinant, nullspace_from, row_reduce, span_rref

log = logging.getLogger(__name__)

DEFAULT_MAX_GENERATIONS = 20

# Trichotomy of consistency residuals.
CASE_IDENTICAL = "a"     # weakly zero: condition holds identically
CASE_MULTIPLIER = "b"    # restricts the multipliers
CASE_NEW = "c"           # u-free relation: candidate secondary constraint

CASE_NAMES = {
    CASE_IDENTICAL: "identically satisfied",
    CASE_MULTIPLIER: "restricts multipliers",
    CASE_NEW: "u-free relation",
}


@dataclass(frozen=True)
class Residual:
    label: int
    value: Expr
    case: str


@dataclass(frozen=True)
class MultiplierEquation:
    """``sum_i coeffs[i] * u^i + const ~ 0``."""

    label: int
    coeffs: tuple
    const: Expr


@dataclass(frozen=True)
class StepResult:
    residuals: tuple
    equations: tuple
    new_constraints: tuple
    mixed: tuple = ()


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    residuals: tuple
    new_constraints: tuple
    mixed: tuple
    ideal_status: str


@dataclass(frozen=True)
class MultiplierSolution:
    """General solution ``u = particular / denominator + span(free_directions)``."""

    particular: tuple
    denominator: Expr
    free_directions: tuple
    free_count: int


@dataclass(frozen=True)
class Classification:
    bracket_matrix: tuple
    first_class: tuple
    second_class: tuple
    constraint_classes: tuple


@dataclass(frozen=True)
class DiracData:
    """Second-class bracket matrix C with its adjugate and determinant."""

    matrix: tuple
    adjugate: tuple
    determinant: Expr


@dataclass(frozen=True)
class ConstraintAnalysis:
    model: Model
    legendre: LegendreResult
    hamiltonian: Expr
    constraints: tuple
    basis: IdealBasis
    multipliers: MultiplierSolution
    bracket_matrix: tuple
    first_class_basis: tuple
    second_class_basis: tuple
    dirac: Optional[DiracData]
    dof: Fraction
    iteration_log: tuple = field(default=())
    mixed_cases: tuple = field(default=())

    @property
    def dim(self) -> int:
        return self.model.dim

    @property
    def table(self):
        return self.model.table

    @property
    def J(self) -> int:
        return len(self.constraints)

    @property
    def I(self) -> int:
        return sum(1 for c in self.constraints if c.origin == PRIMARY)

    @property
    def K(self) -> int:
        return self.J - self.I

    @property
    def N(self) -> int:
        return len(self.first_class_basis)

    @property
    def S(self) -> int:
        return len(self.second_class_basis)

    @property
    def P(self) -> int:
        return self.multipliers.free_count

    @property
    def generations(self) -> int:
        return max((c.generation for c in self.constraints), default=0)

    @property
    def verdict(self) -> str:
        return self.basis.verdict()

    def exprs(self) -> list:
        return [c.expr for c in self.constraints]


def total_hamiltonian(lr: LegendreResult) -> Expr:
    t = lr.model.table
    H = lr.h_canonical
    for i, c in enumerate(lr.primaries, start=1):
        H = H + t.u(i) * c.expr
    return H


def _split_residual(r: Expr, n_mult: int) -> tuple:
    const, coeffs = coefficient_split(r, "u")
    if any(not c.is_zero for c in coeffs[n_mult:]):
        raise AlgorithmError("residual depends on an undeclared multiplier")
    return const, tuple(coeffs[:n_mult])


def consistency_step(
    current: Sequence[Constraint],
    H: Expr,
    basis: IdealBasis,
    n_mult: Optional[int] = None,
    cap: int = DEFAULT_DEGREE_CAP,
) -> StepResult:
    """One generation of ``{phi_j, H} ~ 0`` conditions."""
    table = H.table
    if n_mult is None:
        n_mult = sum(1 for c in current if c.origin == PRIMARY)

    def weak(f):
        return reduce_mod(f, basis)

    residuals = []
    equations = []
    candidates = []
    for c in current:
        r = weak(poisson_bracket(c.expr, H))
        const, coeffs = _split_residual(r, n_mult)
        if r.is_zero:
            case = CASE_IDENTICAL
        elif any(not x.is_zero for x in coeffs):
            case = CASE_MULTIPLIER
            equations.append(MultiplierEquation(c.label, coeffs, const))
        else:
            case = CASE_NEW
            candidates.append(const)
        residuals.append(Residual(c.label, r, case))

    # Eliminating u between several multiplier equations can leave u-free
    # relations; those are candidates too and get flagged as mixed.
    mixed = []
    if equations and n_mult:
        rows = [list(eq.coeffs) + [eq.const] for eq in equations]
        ech = row_reduce(rows, weak, ncols=n_mult)
        for r in ech.zero_rows():
            rel = ech.rows[r][n_mult]
            if not rel.is_zero:
                mixed.append(rel)
                candidates.append(rel)

    accepted = []
    work = basis
    for cand in candidates:
        nf = reduce_mod(cand, work)
        if nf.is_zero:
            continue
        if nf.is_constant:
            raise InconsistentModelError(
                f"consistency requires {cand} = 0, which contradicts the constraints"
            )
        nf = nf.monic()
        accepted.append(nf)
        work = complete_or_empty(table, list(work.generators) + [nf], cap)
    return StepResult(tuple(residuals), tuple(equations), tuple(accepted), tuple(mixed))


def solve_multipliers(equations: Sequence[MultiplierEquation], basis: IdealBasis, n_mult: int) -> MultiplierSolution:
    """Particular solution plus homogeneous directions of ``A u + b ~ 0``."""
    table = basis.table

    def weak(f):
        return reduce_mod(f, basis)

    if n_mult == 0:
        return MultiplierSolution((), table.const(1), (), 0)
    rows = [list(eq.coeffs) + [-eq.const] for eq in equations]
    if not rows:
        units = tuple(
            tuple(table.const(int(i == j)) for i in range(n_mult)) for j in range(n_mult)
        )
        return MultiplierSolution(tuple(table.zero() for _ in range(n_mult)), table.const(1), units, n_mult)

    ech = row_reduce(rows, weak, ncols=n_mult)
    for r in ech.zero_rows():
        if not ech.rows[r][n_mult].is_zero:
            raise InconsistentModelError(
                f"multiplier equations are inconsistent: {ech.rows[r][n_mult]} ~ 0 required"
            )

    particular = [table.zero() for _ in range(n_mult)]
    pivots = {c: ech.rows[r] for r, c in ech.pivots}
    if all(row[c].is_constant for c, row in pivots.items()):
        den = table.const(1)
        for c, row in pivots.items():
            particular[c] = row[n_mult].scale(1 / row[c].constant_value())
    else:
        den = table.const(1)
        for row_c in pivots:
            den = den * pivots[row_c][row_c]
        den = weak(den)
        for c, row in pivots.items():
            others = table.const(1)
            for cc, rr in pivots.items():
                if cc != c:
                    others = others * rr[cc]
            particular[c] = weak(row[n_mult] * others)
        quotients = [exact_quotient(p, den) for p in particular]
        if all(q is not None for q in quotients):
            particular, den = quotients, table.const(1)

    directions = nullspace_from(ech, n_mult, weak)

    for eq in equations:
        lhs = eq.const * den
        for a, x in zip(eq.coeffs, particular):
            lhs = lhs + a * x
        if not weak(lhs).is_zero:
            raise AlgorithmError("particular multiplier solution fails verification")
        for vec in directions:
            hom = table.zero()
            for a, x in zip(eq.coeffs, vec):
                hom = hom + a * x
            if not weak(hom).is_zero:
                raise AlgorithmError("free multiplier direction fails verification")

    return MultiplierSolution(
        tuple(particular), den, tuple(tuple(v) for v in directions), n_mult - ech.rank
    )


def bracket_matrix(exprs: Sequence[Expr], basis: IdealBasis) -> list:
    n = len(exprs)
    M = [[None] * n for _ in range(n)]
    for j in range(n):
        M[j][j] = basis.table.zero()
        for k in range(j + 1, n):
            b = reduce_mod(poisson_bracket(exprs[j], exprs[k]), basis)
            M[j][k] = b
            M[k][j] = -b
    return M


def classify(constraints: Sequence, basis: IdealBasis) -> Classification:
    """Split a consistent constraint set into first- and second-class parts.

    The number of second-class constraints is the generic rank of the weak
    bracket matrix; first-class combinations span its null space.
    """
    exprs = [c.expr if isinstance(c, Constraint) else c for c in constraints]
    if not exprs:
        return Classification((), (), (), ())

    def weak(f):
        return reduce_mod(f, basis)

    M = bracket_matrix(exprs, basis)
    ech = row_reduce(M, weak)
    if ech.rank % 2:
        raise ClassificationError(
            f"bracket matrix has odd rank {ech.rank}; an antisymmetric matrix cannot"
        )
    second = [exprs[c] for c in ech.pivot_columns]
    combos = []
    for vec in nullspace_from(ech, len(exprs), weak):
        g = basis.table.zero()
        for lam, phi in zip(vec, exprs):
            g = g + lam * phi
        combos.append(g)
    first = span_rref(combos)
    if len(first) != len(combos):
        raise ClassificationError("first-class combinations are linearly dependent")
    classes = tuple(
        FIRST if all(x.is_zero for x in row) else SECOND for row in M
    )
    return Classification(
        tuple(tuple(row) for row in M), tuple(first), tuple(second), classes
    )


def _dirac_data(second: Sequence[Expr], basis: IdealBasis) -> Optional[DiracData]:
    if not second:
        return None

    def weak(f):
        return reduce_mod(f, basis)

    C = bracket_matrix(second, basis)
    det = determinant(C, weak)
    if det.is_zero:
        raise ClassificationError("second-class bracket matrix is weakly singular")
    adj = adjugate(C, weak)
    return DiracData(tuple(tuple(r) for r in C), tuple(tuple(r) for r in adj), det)


def dirac_bracket(f: Expr, g: Expr, analysis: ConstraintAnalysis, weak: bool = True) -> Expr:
    """``{f,g}_D = {f,g} - {f,chi_r} (C^-1)^{rs} {chi_s,g}``.

    With ``weak=False`` the result is returned unreduced, which is what nested
    brackets need.
    """
    basis = analysis.basis
    pb = poisson_bracket(f, g)
    data = analysis.dirac
    if data is None:
        return reduce_mod(pb, basis) if weak else pb
    chis = analysis.second_class_basis
    left = [poisson_bracket(f, chi) for chi in chis]
    right = [poisson_bracket(chi, g) for chi in chis]
    corr = f.table.zero()
    for r, fl in enumerate(left):
        if fl.is_zero:
            continue
        for s, gr in enumerate(right):
            a = data.adjugate[r][s]
            if gr.is_zero or a.is_zero:
                continue
            corr = corr + fl * a * gr
    det = data.determinant
    if det.is_constant:
        out = pb - corr.scale(1 / det.constant_value())
    else:
        num = pb * det - corr
        out = exact_quotient(num, det)
        if out is None:
            out = exact_quotient(reduce_mod(num, basis), det)
        if out is None:
            raise UnsupportedError(
                f"Dirac bracket needs division by non-constant {det}; not polynomial"
            )
    return reduce_mod(out, basis) if weak else out


def dof_count(analysis: ConstraintAnalysis) -> Fraction:
    return _dof(analysis.dim, analysis.N, analysis.S)


def _dof(d: int, n_first: int, n_second: int) -> Fraction:
    dof = Fraction(d) - n_first - Fraction(n_second, 2)
    if dof < 0:
        raise AlgorithmError(f"negative degree-of-freedom count {dof}")
    return dof


def run_algorithm(
    model: Model,
    max_gen: int = DEFAULT_MAX_GENERATIONS,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> ConstraintAnalysis:
    lr = legendre_transform(model)
    t = model.table
    H = total_hamiltonian(lr)
    n_mult = len(lr.primaries)
    constraints = list(lr.primaries)
    basis = complete_or_empty(t, [c.expr for c in constraints], degree_cap)

    history = []
    mixed_all = []
    gen = 0
    while True:
        step = consistency_step(constraints, H, basis, n_mult, degree_cap)
        history.append(
            GenerationRecord(gen, step.residuals, step.new_constraints, step.mixed, basis.status)
        )
        mixed_all.extend(step.mixed)
        if not step.new_constraints:
            break
        gen += 1
        if gen > max_gen:
            raise NonTerminatingError(f"non-terminating at cap: {max_gen} generations")
        for e in step.new_constraints:
            constraints.append(Constraint(e, SECONDARY, gen, label=len(constraints) + 1))
        basis = complete_or_empty(t, [c.expr for c in constraints], degree_cap)
        log.debug("generation %d added %s", gen, [str(e) for e in step.new_constraints])

    multipliers = solve_multipliers(step.equations, basis, n_mult)
    cls = classify(constraints, basis)
    constraints = [c.with_class(k) for c, k in zip(constraints, cls.constraint_classes)]
    dirac = _dirac_data(cls.second_class, basis)
    dof = _dof(model.dim, len(cls.first_class), len(cls.second_class))
    return ConstraintAnalysis(
        model=model,
        legendre=lr,
        hamiltonian=H,
        constraints=tuple(constraints),
        basis=basis,
        multipliers=multipliers,
        bracket_matrix=cls.bracket_matrix,
        first_class_basis=cls.first_class,
        second_class_basis=cls.second_class,
        dirac=dirac,
        dof=dof,
        iteration_log=tuple(history),
        mixed_cases=tuple(mixed_all),
    )


def primary_first_class_count(analysis: ConstraintAnalysis) -> int:
    """Dimension of the first-class subspace within the span of the primaries."""
    primaries = [c.expr for c in analysis.constraints if c.origin == PRIMARY]
    if not primaries:
        return 0
    basis = analysis.basis
    all_exprs = analysis.exprs()

    def weak(f):
        return reduce_mod(f, basis)

    # rows: brackets of every constraint with each primary -> A (J x I)
    A = [[weak(poisson_bracket(phi, prim)) for prim in primaries] for phi in all_exprs]
    return len(primaries) - row_reduce(A, weak).rank
