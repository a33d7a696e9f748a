from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirackit.errors import ModelError
from dirackit.model import parse_model, print_model, tokenize
from dirackit.symbolic import Expr, VarTable


def test_free_particle():
    m = parse_model("dim 1; L = 1/2*v1^2")
    t = m.table
    assert m.dim == 1
    assert m.lagrangian == (t.v(1) * t.v(1)).scale(Fraction(1, 2))


def test_first_order_model():
    m = parse_model("dim 2; L = v1*q2")
    t = m.table
    assert m.lagrangian == t.v(1) * t.q(2)


def test_comments_and_newlines():
    m = parse_model("# comment\ndim 2\n\nL = (v1 - q2)^2  # trailing\n")
    assert m.dim == 2


@pytest.mark.parametrize("text", ["dim 1; L = 1/2*v1^2", "dim 2; L = v1*q2", "dim 2\nL = 1/3*q1 - v2^2"])
def test_round_trip(text):
    m = parse_model(text)
    assert parse_model(print_model(m)) == m


def test_rational_prints_exactly():
    m = parse_model("dim 1; L = 1/3*q1")
    assert "1/3" in print_model(m)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("dim 2; L = v1^3", "velocity degree"),
        ("dim 2; L = q3", "q3"),
        ("dim 2; L = p1*v1", "p1"),
        ("dim 2; L = ", "empty"),
        ("dim 2", "missing"),
        ("dim 2; L = v1 +", "end of expression"),
        ("dim 2; L = v1 $ q1", "$"),
        ("L = v1", "dim"),
    ],
)
def test_rejections(text, fragment):
    with pytest.raises(ModelError) as err:
        parse_model(text)
    assert fragment in str(err.value)


def test_error_position():
    with pytest.raises(ModelError) as err:
        parse_model("dim 2\nL = 1/2*v1^2 +* q2\n")
    assert (err.value.line, err.value.column) == (2, 15)


def test_tokens_carry_positions():
    toks = tokenize("dim 2\nL = v1")
    ident = [t for t in toks if t.text == "v1"][0]
    assert (ident.line, ident.col) == (2, 5)


@st.composite
def lagrangians(draw):
    d = draw(st.integers(1, 3))
    t = VarTable(d)
    f = t.zero()
    for _ in range(draw(st.integers(1, 4))):
        term = t.const(Fraction(draw(st.integers(-6, 6)), draw(st.integers(1, 4))))
        for _ in range(draw(st.integers(0, 2))):
            term = term * t.v(draw(st.integers(1, d)))
        for _ in range(draw(st.integers(0, 2))):
            term = term * t.q(draw(st.integers(1, d)))
        f = f + term
    return d, f


@settings(max_examples=80, deadline=None)
@given(lagrangians())
def test_print_parse_round_trip_property(dl):
    d, L = dl
    if L.is_zero:
        return
    from dirackit.model import Model

    m = Model(d, L)
    assert parse_model(print_model(m)) == m
    assert isinstance(m.lagrangian, Expr)
