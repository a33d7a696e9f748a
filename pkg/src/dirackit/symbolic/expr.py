"""Exact multivariate polynomials over phase-space indeterminates.

Every polynomial lives over a :class:`VarTable` of dimension ``d`` which
declares, in this fixed order, the indeterminates

    q1 .. qd, p1 .. pd, v1 .. vd, u1 .. ud

Positions, momenta, velocities and Lagrange multipliers.  Monomials are
exponent tuples over that list and coefficients are :class:`fractions.Fraction`.
The monomial order is graded lexicographic with ``q1 < ... < qd < p1 < ... < pd``
(velocities and multipliers rank above momenta).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Mapping, Union

from ..errors import UndeclaredVariable, VarTableMismatch

KINDS = ("q", "p", "v", "u")

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class VarTable:
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")

    @cached_property
    def names(self) -> tuple:
        return tuple(f"{k}{a}" for k in KINDS for a in range(1, self.dim + 1))

    @cached_property
    def _index(self) -> dict:
        return {n: i for i, n in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return 4 * self.dim

    def index(self, var) -> int:
        """Resolve a name (``"q2"``), an index, or a single-variable Expr."""
        if isinstance(var, Expr):
            if var.table != self:
                raise VarTableMismatch("variable from another table")
            if len(var.terms) == 1:
                mono, c = next(iter(var.terms.items()))
                if c == 1 and sum(mono) == 1:
                    return mono.index(1)
            raise UndeclaredVariable(str(var))
        if isinstance(var, int):
            if 0 <= var < self.nvars:
                return var
            raise UndeclaredVariable(var)
        try:
            return self._index[var]
        except KeyError:
            raise UndeclaredVariable(var) from None

    def kind(self, index: int) -> tuple:
        """``(kind, a)`` with 1-based ``a`` for a variable index."""
        return KINDS[index // self.dim], index % self.dim + 1

    def offset(self, kind: str) -> int:
        return KINDS.index(kind) * self.dim

    def var(self, name) -> "Expr":
        i = self.index(name)
        mono = [0] * self.nvars
        mono[i] = 1
        return Expr(self, {tuple(mono): Fraction(1)})

    def q(self, a: int) -> "Expr":
        return self.var(f"q{a}")

    def p(self, a: int) -> "Expr":
        return self.var(f"p{a}")

    def v(self, a: int) -> "Expr":
        return self.var(f"v{a}")

    def u(self, i: int) -> "Expr":
        return self.var(f"u{i}")

    def const(self, c: Scalar) -> "Expr":
        return Expr(self, {self.zero_mono: Fraction(c)})

    def zero(self) -> "Expr":
        return Expr(self, {})

    @cached_property
    def zero_mono(self) -> tuple:
        return (0,) * self.nvars

    def coordinates(self) -> list:
        """Phase-space coordinate functions q1..qd, p1..pd."""
        return [self.q(a) for a in range(1, self.dim + 1)] + [
            self.p(a) for a in range(1, self.dim + 1)
        ]


def grlex_key(mono: tuple) -> tuple:
    # Largest variable sits last in the layout, so reverse for lex comparison.
    return (sum(mono), mono[::-1])


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Expr:
    """Immutable polynomial with exact rational coefficients.

    Zero coefficients are never stored, so two equal polynomials always have
    identical term maps.
    """

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VarTable, terms: Mapping[tuple, Scalar] = None):
        self.table = table
        clean = {}
        if terms:
            n = table.nvars
            for mono, c in terms.items():
                if len(mono) != n:
                    raise ValueError(f"exponent vector length {len(mono)} != {n}")
                c = _as_fraction(c)
                if c:
                    clean[tuple(mono)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, table, terms):
        # Trusted constructor: terms already clean.
        obj = cls.__new__(cls)
        obj.table = table
        obj._terms = terms
        obj._hash = None
        return obj

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self._terms.get(self.table.zero_mono, Fraction(0))

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, kind: str) -> int:
        """Maximum total degree of any term in the given variable kind."""
        lo = self.table.offset(kind)
        hi = lo + self.table.dim
        return max((sum(m[lo:hi]) for m in self._terms), default=0)

    def variables(self) -> set:
        used = set()
        for m in self._terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    def involves(self, kind: str) -> bool:
        lo = self.table.offset(kind)
        return any(lo <= i < lo + self.table.dim for i in self.variables())

    def leading_monomial(self) -> tuple:
        return max(self._terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.leading_monomial()]

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def monic(self) -> "Expr":
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coefficient())

    def scale(self, c: Scalar) -> "Expr":
        c = _as_fraction(c)
        if not c:
            return Expr._raw(self.table, {})
        return Expr._raw(self.table, {m: v * c for m, v in self._terms.items()})

    def _coerce(self, other) -> "Expr":
        if isinstance(other, Expr):
            if other.table != self.table:
                raise VarTableMismatch(
                    f"dimension {self.table.dim} vs {other.table.dim}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.table.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Expr._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return Expr._raw(self.table, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Expr._raw(self.table, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = self.table.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, mono: tuple, c: Fraction) -> "Expr":
        return Expr._raw(
            self.table,
            {tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self._terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self == self.table.const(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self.table == other.table and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table.dim, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Expr({self})"

    def __str__(self):
        return format_expr(self)


def format_monomial(table: VarTable, mono: tuple) -> str:
    parts = []
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(table.names[i])
        elif e > 1:
            parts.append(f"{table.names[i]}^{e}")
    return "*".join(parts)


def format_expr(f: Expr) -> str:
    """Render in the model-language syntax, highest term first, exact rationals."""
    if f.is_zero:
        return "0"
    out = []
    for k, (mono, c) in enumerate(f.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        body = format_monomial(f.table, mono)
        if not body:
            text = str(a)
        elif a == 1:
            text = body
        else:
            text = f"{a}*{body}"
        if k == 0:
            out.append(f"-{text}" if neg else text)
        else:
            out.append(f" - {text}" if neg else f" + {text}")
    return "".join(out)


def arith(lhs: Expr, rhs, kind) -> Expr:
    """Functional form of the ring operations.

    ``kind`` is ``"add"``, ``"sub"``, ``"mul"`` or ``("scale", c)``; for scaling
    ``rhs`` is ignored.
    """
    if isinstance(kind, tuple) and kind[0] == "scale":
        return lhs.scale(kind[1])
    if isinstance(rhs, Expr) and rhs.table != lhs.table:
        raise VarTableMismatch(f"dimension {lhs.table.dim} vs {rhs.table.dim}")
    if kind == "add":
        return lhs + rhs
    if kind == "sub":
        return lhs - rhs
    if kind == "mul":
        return lhs * rhs
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def differentiate(f: Expr, var) -> Expr:
    i = f.table.index(var)
    out = {}
    for m, c in f.items():
        e = m[i]
        if e:
            dm = list(m)
            dm[i] = e - 1
            out[tuple(dm)] = c * e
    return Expr._raw(f.table, out)


def poisson_bracket(f: Expr, g: Expr) -> Expr:
    """Canonical bracket sum_a (df/dq^a dg/dp_a - dg/dq^a df/dp_a).

    Velocities and multipliers are treated as constants.
    """
    if f.table != g.table:
        raise VarTableMismatch(f"dimension {f.table.dim} vs {g.table.dim}")
    t = f.table
    result = t.zero()
    if f.is_constant or g.is_constant:
        return result
    for a in range(t.dim):
        qi, pi = a, t.dim + a
        dfq = differentiate(f, qi)
        dgp = differentiate(g, pi)
        if dfq and dgp:
            result = result + dfq * dgp
        dgq = differentiate(g, qi)
        dfp = differentiate(f, pi)
        if dgq and dfp:
            result = result - dgq * dfp
    return result


def substitute(f: Expr, assignments: Mapping) -> Expr:
    """Simultaneous substitution ``var -> Expr`` (keys: names, indices or variables)."""
    t = f.table
    subs = {}
    for k, val in assignments.items():
        if not isinstance(val, Expr):
            val = t.const(val)
        elif val.table != t:
            raise VarTableMismatch("substituted value from another table")
        subs[t.index(k)] = val
    if not subs:
        return f
    powers = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            powers[key] = subs[i] ** e
        return powers[key]

    result = t.zero()
    for m, c in f.items():
        kept = list(m)
        term = None
        for i in subs:
            e = m[i]
            if e:
                kept[i] = 0
                term = power(i, e) if term is None else term * power(i, e)
        base = Expr._raw(t, {tuple(kept): c})
        result = result + (base if term is None else base * term)
    return result


def coefficient_split(f: Expr, kind: str) -> tuple:
    """Split an expression affine in one variable kind.

    Returns ``(constant_part, [coefficient of kind_1, ..., kind_d])``; raises
    ``ValueError`` when some term has degree > 1 in that kind.
    """
    t = f.table
    lo = t.offset(kind)
    base = {}
    coeffs = [dict() for _ in range(t.dim)]
    for m, c in f.items():
        block = m[lo:lo + t.dim]
        deg = sum(block)
        if deg == 0:
            base[m] = c
        elif deg == 1:
            j = block.index(1)
            mm = list(m)
            mm[lo + j] = 0
            coeffs[j][tuple(mm)] = c
        else:
            raise ValueError(f"{f} is not affine in {kind}")
    return Expr._raw(t, base), [Expr._raw(t, c) for c in coeffs]


def content(exprs: Iterable[Expr]) -> Fraction:
    """Positive rational g such that every coefficient / g is an integer with gcd 1."""
    from math import gcd

    num = 0
    den = 1
    for f in exprs:
        for c in f._terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
    if num == 0:
        return Fraction(1)
    return Fraction(num, den)
