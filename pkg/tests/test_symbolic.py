import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from dirackit.errors import UndeclaredVariable, VarTableMismatch
from dirackit.symbolic import (
    COMPLETE,
    TRUNCATED,
    Expr,
    VarTable,
    arith,
    differentiate,
    divide,
    exact_quotient,
    format_expr,
    groebner_complete,
    poisson_bracket,
    reduce_mod,
    substitute,
)
from dirackit.symbolic.linalg import (
    determinant,
    inverse_rational,
    nullspace,
    nullspace_rational,
    rank_rational,
    row_reduce,
    span_rref,
)

from strategies import polys, random_poly

T1 = VarTable(1)
T2 = VarTable(2)
q1, q2, p1, p2 = T2.q(1), T2.q(2), T2.p(1), T2.p(2)
v1 = T2.v(1)


# --- representation -------------------------------------------------------

def test_zero_coefficients_are_not_stored():
    f = (q1 + p1) - p1
    assert f == q1
    assert len(f.terms) == 1


def test_exponent_vector_length_checked():
    with pytest.raises(ValueError):
        Expr(T2, {(1, 0): 1})


def test_floats_rejected():
    with pytest.raises(TypeError):
        Expr(T2, {T2.zero_mono(): 0.5})


def test_equal_polynomials_hash_equal():
    a = (q1 + p2) * (q1 - p2)
    b = q1 * q1 - p2 * p2
    assert a == b and hash(a) == hash(b)


def test_names_follow_declared_layout():
    assert VarTable(2).names == ("q1", "q2", "p1", "p2", "v1", "v2", "u1", "u2")


def test_format_uses_rationals():
    assert format_expr(q1.scale(Fraction(1, 3))) == "1/3*q1"
    assert str(q1 * q1 * p1 - 2) == "q1^2*p1 - 2"


# --- arithmetic -----------------------------------------------------------

def test_add_cancels():
    assert arith(q1 + p1, q1 - p1, "add") == q1.scale(2)


def test_mul_by_zero():
    assert arith(q1 * p2, T2.zero(), "mul").is_zero


def test_exponents_add():
    assert arith(q1 ** 2, q1 ** 3, "mul") == q1 ** 5


def test_scale():
    assert arith(q1, None, ("scale", Fraction(2, 3))) == q1.scale(Fraction(2, 3))


def test_mismatched_tables():
    with pytest.raises(VarTableMismatch):
        arith(T1.q(1), q1, "add")
    with pytest.raises(VarTableMismatch):
        poisson_bracket(T1.q(1), q1)


# --- calculus -------------------------------------------------------------

def test_power_rule():
    assert differentiate(q1 ** 2 * p1, "q1") == (q1 * p1).scale(2)


def test_independent_variable():
    assert differentiate(q1, "p2").is_zero


def test_velocity_derivative():
    L = ((v1 - q2) ** 2).scale(Fraction(1, 2))
    assert differentiate(L, "v1") == v1 - q2


def test_undeclared_variable():
    with pytest.raises(UndeclaredVariable):
        differentiate(q1, "q3")


@pytest.mark.parametrize(
    "f, g, expected",
    [
        (q1, p1, T2.const(1)),
        (q1, q2, T2.zero()),
        (p1, p2, T2.zero()),
        (p1 - q2, p2, T2.const(-1)),
    ],
)
def test_canonical_brackets(f, g, expected):
    assert poisson_bracket(f, g) == expected


def test_substitution():
    assert substitute(v1 * p1, {"v1": p1 + q2}) == p1 * p1 + q2 * p1


def test_identity_substitution():
    f = v1 * p1 + q2
    assert substitute(f, {"v1": v1}) == f


def test_substitute_zero():
    assert substitute((v1 * v1).scale(Fraction(1, 2)), {"v1": 0}).is_zero


# --- Poisson algebra properties ---------------------------------------------

@st.composite
def triples(draw):
    table = VarTable(draw(st.integers(1, 3)))
    return tuple(draw(polys(table)) for _ in range(3))


@settings(max_examples=60, deadline=None)
@given(triples())
def test_antisymmetry(fgh):
    f, g, _ = fgh
    assert (poisson_bracket(f, g) + poisson_bracket(g, f)).is_zero


@settings(max_examples=60, deadline=None)
@given(triples())
def test_jacobi(fgh):
    f, g, h = fgh
    pb = poisson_bracket
    assert (pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))).is_zero


@settings(max_examples=60, deadline=None)
@given(triples())
def test_leibniz(fgh):
    f, g, h = fgh
    pb = poisson_bracket
    assert pb(f, g * h) == pb(f, g) * h + g * pb(f, h)


@settings(max_examples=60, deadline=None)
@given(triples())
def test_ring_laws(fgh):
    f, g, h = fgh
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f - f == f.table.zero()


# --- ideals ---------------------------------------------------------------

def test_single_generator():
    b = groebner_complete([p1])
    assert b.generators == (p1,) and b.status == COMPLETE


def test_second_class_pair_is_already_a_basis():
    b = groebner_complete([p1 - q2, p2])
    assert set(b.generators) == {p1 - q2, p2}
    assert b.complete


def test_completion_finds_new_element():
    b = groebner_complete([q1, q1 * q1 + p1])
    assert p1 in b.generators


def test_empty_generators_rejected():
    with pytest.raises(ValueError):
        groebner_complete([])


def test_unit_ideal():
    b = groebner_complete([q1, q1 + 1])
    assert b.is_unit


@pytest.mark.parametrize(
    "f, gens, expected",
    [
        (p1 + p2, [p1 + p2], T2.zero()),
        (q1, [p1], q1),
        (q2 * p2, [p1 - q2, p2], T2.zero()),
    ],
)
def test_reduce_mod_examples(f, gens, expected):
    assert reduce_mod(f, groebner_complete(gens)) == expected


def test_degree_cap_truncates():
    t = VarTable(2)
    x, y = t.q(1), t.q(2)
    b = groebner_complete([x ** 3 - y, x * y ** 2 - x], cap=2)
    assert b.status == TRUNCATED and b.verdict() == "unconfirmed"


def test_division_identity():
    rng = random.Random(3)
    for _ in range(30):
        f = random_poly(rng, T2)
        gs = [random_poly(rng, T2, max_degree=2) for _ in range(2)]
        gs = [g for g in gs if not g.is_zero]
        qs, r = divide(f, gs)
        total = r
        for qq, g in zip(qs, gs):
            total = total + qq * g
        assert total == f


def test_exact_quotient():
    assert exact_quotient(q1 * q1 - p1 * p1, q1 - p1) == q1 + p1
    assert exact_quotient(q1, p1) is None


def test_reduce_is_idempotent_and_sound():
    rng = random.Random(7)
    for _ in range(20):
        gens = [random_poly(rng, T2, max_degree=2, max_terms=3) for _ in range(2)]
        gens = [g for g in gens if not g.is_zero]
        if not gens:
            continue
        b = groebner_complete(gens)
        if not b.complete or b.is_unit:
            continue
        f = random_poly(rng, T2)
        r = reduce_mod(f, b)
        assert reduce_mod(r, b) == r
        member = sum((random_poly(rng, T2, 2) * g for g in gens), T2.zero())
        assert reduce_mod(member, b).is_zero


def _to_sympy(f, symbols):
    return sum(
        (sp.Rational(c.numerator, c.denominator) * sp.prod([s ** e for s, e in zip(symbols, m)])
         for m, c in f.items()),
        sp.Integer(0),
    )


def test_groebner_matches_sympy():
    # sympy ranks the first generator highest; ours ranks p_d highest.
    t = VarTable(2)
    names = t.names[:4]
    syms = sp.symbols(" ".join(names) + " v1 v2 u1 u2")
    order = [syms[3], syms[2], syms[1], syms[0]]
    rng = random.Random(11)
    checked = 0
    for _ in range(25):
        gens = [random_poly(rng, t, max_degree=2, max_terms=3) for _ in range(2)]
        gens = [g for g in gens if not g.is_zero]
        if not gens:
            continue
        ours = groebner_complete(gens)
        if not ours.complete:
            continue
        theirs = sp.groebner([_to_sympy(g, syms) for g in gens], *order, order="grlex")
        assert {sp.expand(_to_sympy(g, syms)) for g in ours.generators} == {
            sp.expand(g) for g in theirs.exprs
        }
        checked += 1
    assert checked >= 15


# --- linear algebra ---------------------------------------------------------

def test_fraction_free_rank_over_polynomials():
    M = [[q1, p1], [q1 * q2, p1 * q2]]
    assert row_reduce(M).rank == 1


def test_polynomial_nullspace_annihilates():
    M = [[q1, p1, T2.const(1)], [q2, T2.zero(), p2]]
    for vec in nullspace(M):
        for row in M:
            assert sum((a * x for a, x in zip(row, vec)), T2.zero()).is_zero


def test_determinant_cofactor():
    M = [[q1, p1], [q2, p2]]
    assert determinant(M) == q1 * p2 - p1 * q2


def test_rational_helpers_match_sympy():
    rng = random.Random(5)
    for _ in range(10):
        A = [[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(3)]
        S = sp.Matrix(A)
        assert rank_rational(A) == S.rank()
        assert len(nullspace_rational(A)) == len(S.nullspace())
    B = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    assert inverse_rational(B) == [[1, -1], [-1, 2]]


def test_span_rref_is_reproducible():
    a = span_rref([p1 + q2, p1 - q2])
    b = span_rref([p1.scale(3), q2.scale(-2)])
    assert a == b == [q2, p1]
