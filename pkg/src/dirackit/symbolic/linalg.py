"""Exact linear algebra over polynomial rings and over the rationals.

Matrices of :class:`Expr` are eliminated fraction-free (cross multiplication,
no division), so every intermediate stays a polynomial.  A ``normalize``
callback maps entries to canonical representatives; passing a reduction
modulo the constraint ideal makes the zero test a weak one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .expr import Expr, content, grlex_key

Normalizer = Callable[[Expr], Expr]


def _identity(f: Expr) -> Expr:
    return f


@dataclass
class Echelon:
    rows: list          # reduced rows (lists of Expr)
    pivots: list        # (row index, column index) in elimination order

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_columns(self) -> list:
        return sorted(c for _, c in self.pivots)

    def pivot_value(self, col: int) -> Expr:
        for r, c in self.pivots:
            if c == col:
                return self.rows[r][col]
        raise KeyError(col)

    def zero_rows(self) -> list:
        used = {r for r, _ in self.pivots}
        return [r for r in range(len(self.rows)) if r not in used]


def _primitive(row: list) -> list:
    g = content(row)
    if g == 1:
        return row
    inv = 1 / g
    return [e.scale(inv) for e in row]


def row_reduce(
    matrix: Sequence[Sequence[Expr]],
    normalize: Optional[Normalizer] = None,
    ncols: Optional[int] = None,
) -> Echelon:
    """Fraction-free Gauss-Jordan elimination.

    Pivots are searched only in the first ``ncols`` columns (all by default);
    trailing columns ride along, which is how augmented systems are solved.
    Each step picks the nonzero entry of lowest total degree, ties broken by
    column then row index.
    """
    norm = normalize or _identity
    rows = [[norm(e) for e in row] for row in matrix]
    if not rows:
        return Echelon([], [])
    width = len(rows[0])
    ncols = width if ncols is None else ncols
    pivots = []
    used_rows = set()
    used_cols = set()
    while True:
        best = None
        for c in range(ncols):
            if c in used_cols:
                continue
            for r, row in enumerate(rows):
                if r in used_rows or row[c].is_zero:
                    continue
                key = (row[c].degree(), c, r)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, c, r = best
        piv = rows[r][c]
        for s, row in enumerate(rows):
            if s == r or row[c].is_zero:
                continue
            b = row[c]
            if piv.is_constant and b.is_constant:
                factor = b.constant_value() / piv.constant_value()
                new = [norm(x - y.scale(factor)) for x, y in zip(row, rows[r])]
            else:
                new = [norm(piv * x - b * y) for x, y in zip(row, rows[r])]
            rows[s] = _primitive(new)
        pivots.append((r, c))
        used_rows.add(r)
        used_cols.add(c)
    return Echelon(rows, pivots)


def rank(matrix, normalize: Optional[Normalizer] = None) -> int:
    return row_reduce(matrix, normalize).rank


def _product(exprs, table):
    out = table.const(1)
    for e in exprs:
        out = out * e
    return out


def nullspace_from(ech: Echelon, ncols: int, normalize: Optional[Normalizer] = None) -> list:
    """Polynomial null vectors, one per free column of the eliminated block."""
    norm = normalize or _identity
    if not ech.rows:
        return []
    table = ech.rows[0][0].table
    pivot_of = {c: r for r, c in ech.pivots}
    free = [c for c in range(ncols) if c not in pivot_of]
    basis = []
    for f in free:
        vec = [table.zero() for _ in range(ncols)]
        pivot_vals = {c: ech.rows[r][c] for c, r in pivot_of.items()}
        if all(v.is_constant for v in pivot_vals.values()):
            vec[f] = table.const(1)
            for c, r in pivot_of.items():
                vec[c] = norm(-ech.rows[r][f].scale(1 / pivot_vals[c].constant_value()))
        else:
            vec[f] = norm(_product(pivot_vals.values(), table))
            for c, r in pivot_of.items():
                others = [v for cc, v in pivot_vals.items() if cc != c]
                vec[c] = norm(-ech.rows[r][f] * _product(others, table))
        basis.append(_primitive(vec))
    return basis


def nullspace(matrix, normalize: Optional[Normalizer] = None) -> list:
    if not matrix:
        return []
    ech = row_reduce(matrix, normalize)
    return nullspace_from(ech, len(matrix[0]), normalize)


def mat_vec(matrix, vec, normalize: Optional[Normalizer] = None) -> list:
    norm = normalize or _identity
    out = []
    for row in matrix:
        acc = vec[0].table.zero() if vec else None
        for a, x in zip(row, vec):
            acc = acc + a * x
        out.append(norm(acc))
    return out


def determinant(matrix, normalize: Optional[Normalizer] = None) -> Expr:
    """Cofactor expansion; fine for the small matrices met here."""
    norm = normalize or _identity
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return norm(matrix[0][0])
    if n == 2:
        return norm(matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0])
    total = matrix[0][0].table.zero()
    for j in range(n):
        if matrix[0][j].is_zero:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor, norm)
        total = total + term if j % 2 == 0 else total - term
    return norm(total)


def adjugate(matrix, normalize: Optional[Normalizer] = None) -> list:
    norm = normalize or _identity
    n = len(matrix)
    table = matrix[0][0].table
    if n == 1:
        return [[table.const(1)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(matrix) if k != i]
            cof = determinant(minor, norm)
            adj[j][i] = cof if (i + j) % 2 == 0 else norm(-cof)
    return adj


def span_rref(exprs: Sequence[Expr]) -> List[Expr]:
    """Reduced row echelon form of polynomials viewed as vectors over Q.

    The result spans the same Q-vector space, has pairwise distinct leading
    monomials and monic leading coefficients, ascending by leading monomial;
    used to give constraint bases a reproducible normal form.
    """
    exprs = [e for e in exprs if not e.is_zero]
    if not exprs:
        return []
    table = exprs[0].table
    monos = sorted({m for e in exprs for m, _ in e.items()}, key=grlex_key, reverse=True)
    col = {m: i for i, m in enumerate(monos)}
    rows = []
    for e in exprs:
        row = [Fraction(0)] * len(monos)
        for m, c in e.items():
            row[col[m]] = c
        rows.append(row)
    reduced, pivots = rref_rational(rows)
    out = []
    for row in reduced[: len(pivots)]:
        out.append(Expr(table, {monos[i]: c for i, c in enumerate(row) if c}))
    return out[::-1]


# --- rational matrices ------------------------------------------------------

def rref_rational(matrix) -> tuple:
    """Row reduced echelon form over Q; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in matrix]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank_rational(matrix) -> int:
    if not matrix or not matrix[0]:
        return 0
    return len(rref_rational(matrix)[1])


def nullspace_rational(matrix, ncols: Optional[int] = None) -> list:
    """Basis (list of column vectors) of {x : matrix @ x = 0} over Q."""
    if not matrix:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols or 0)]
    ncols = len(matrix[0])
    rows, pivots = rref_rational(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, c in enumerate(pivots):
            x[c] = -rows[i][f]
        basis.append(x)
    return basis


def inverse_rational(matrix) -> list:
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    rows, pivots = rref_rational(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in rows[:n]]


def matmul_rational(a, b) -> list:
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def transpose(a) -> list:
    return [list(col) for col in zip(*a)]
