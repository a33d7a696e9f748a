"""Exact polynomial layer: arithmetic, brackets, ideals, linear algebra."""

from .expr import (
    Expr,
    VarTable,
    arith,
    coefficient_split,
    differentiate,
    format_expr,
    grlex_key,
    poisson_bracket,
    substitute,
)
from .groebner import (
    COMPLETE,
    DEFAULT_DEGREE_CAP,
    TRUNCATED,
    IdealBasis,
    complete_or_empty,
    divide,
    exact_quotient,
    groebner_complete,
    is_weakly_zero,
    reduce_mod,
)

__all__ = [
    "COMPLETE",
    "DEFAULT_DEGREE_CAP",
    "Expr",
    "IdealBasis",
    "TRUNCATED",
    "VarTable",
    "arith",
    "coefficient_split",
    "complete_or_empty",
    "differentiate",
    "divide",
    "exact_quotient",
    "format_expr",
    "grlex_key",
    "groebner_complete",
    "is_weakly_zero",
    "poisson_bracket",
    "reduce_mod",
    "substitute",
]
