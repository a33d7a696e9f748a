import random
from fractions import Fraction

import pytest
import sympy as sp

from dirackit.errors import UnsupportedError
from dirackit.legendre import hessian, legendre_transform
from dirackit.model import Model, parse_model
from dirackit.symbolic import VarTable, substitute


def _model(text):
    return parse_model(text)


def test_free_hessian_is_identity():
    W, rank = hessian(_model("dim 2; L = 1/2*v1^2 + 1/2*v2^2"))
    t = VarTable(2)
    assert W == [[t.const(1), t.zero()], [t.zero(), t.const(1)]]
    assert rank == 2


def test_first_order_hessian_vanishes():
    W, rank = hessian(_model("dim 2; L = v1*q2"))
    assert all(e.is_zero for row in W for e in row) and rank == 0


def test_shift_hessian():
    W, rank = hessian(_model("dim 2; L = 1/2*(v1 - q2)^2"))
    assert [[str(e) for e in row] for row in W] == [["1", "0"], ["0", "0"]]
    assert rank == 1


def test_regular_transform():
    lr = legendre_transform(_model("dim 2; L = 1/2*v1^2 + 1/2*v2^2"))
    t = lr.model.table
    assert lr.primaries == ()
    assert lr.h_canonical == (t.p(1) ** 2 + t.p(2) ** 2).scale(Fraction(1, 2))
    assert lr.regular


def test_first_order_transform():
    lr = legendre_transform(_model("dim 2; L = v1*q2"))
    t = lr.model.table
    assert [c.expr for c in lr.primaries] == [t.p(1) - t.q(2), t.p(2)]
    assert lr.h_canonical.is_zero


def test_shift_transform():
    lr = legendre_transform(_model("dim 2; L = 1/2*(v1 - q2)^2"))
    t = lr.model.table
    assert [c.expr for c in lr.primaries] == [t.p(2)]
    assert lr.h_canonical == (t.p(1) ** 2).scale(Fraction(1, 2)) + t.q(2) * t.p(1)


@pytest.mark.parametrize(
    "text",
    [
        "dim 2; L = v1*q2",
        "dim 2; L = 1/2*(v1 - q2)^2",
        "dim 3; L = v1*q2 - 1/2*q1^2",
        "dim 3; L = 1/2*(v1 + v2)^2 + v3*q1",
        "dim 2; L = 1/2*v1^2 + q1*v2 - q2^2",
    ],
)
def test_image_identity_and_count_law(text):
    lr = legendre_transform(_model(text))
    on_image = {f"p{a + 1}": m for a, m in enumerate(lr.momenta)}
    for c in lr.primaries:
        assert substitute(c.expr, on_image).is_zero
        assert c.expr.leading_coefficient() == 1
    assert len(lr.primaries) == lr.dim - lr.rank
    assert not lr.h_canonical.involves("v")


def test_non_polynomial_inverse_is_unsupported():
    with pytest.raises(UnsupportedError):
        legendre_transform(_model("dim 1; L = 1/2*q1^2*v1^2"))


def test_random_regular_quadratic_matches_sympy():
    rng = random.Random(2)
    d = 2
    t = VarTable(d)
    for _ in range(5):
        B = sp.Matrix(d, d, lambda i, j: rng.randint(-2, 2))
        A = B.T * B + sp.eye(d)
        L = t.zero()
        for i in range(d):
            for j in range(d):
                L = L + (t.v(i + 1) * t.v(j + 1)).scale(Fraction(int(A[i, j]), 2))
        lr = legendre_transform(Model(d, L))
        ps = sp.symbols("p1 p2")
        pv = sp.Matrix(ps)
        oracle = sp.expand(sp.Rational(1, 2) * (pv.T * A.inv() * pv)[0])
        ours = sum(sp.Rational(c.numerator, c.denominator) * ps[0] ** m[2] * ps[1] ** m[3]
                   for m, c in lr.h_canonical.items())
        assert sp.expand(ours - oracle) == 0
