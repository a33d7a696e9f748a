"""The model input language.

A model file is a sequence of statements separated by ``;`` or newlines::

    # comments run to end of line
    dim 2
    L = 1/2*(v1 - q2)^2

Identifiers are ``q1..qN`` and ``v1..vN``; operators ``+ - * ^`` and
parentheses; numeric literals are integers or rationals ``a/b``.  Exponents
must be non-negative integer literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ModelError
from .symbolic import Expr, VarTable, format_expr

MAX_VELOCITY_DEGREE = 2

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<semi>;)
  | (?P<rational>\d+[ \t]*/[ \t]*\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^=()])
  | (?P<slash>/)
""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class Model:
    dim: int
    lagrangian: Expr

    @property
    def table(self) -> VarTable:
        return self.lagrangian.table

    @property
    def var_names(self) -> tuple:
        return tuple(f"q{a}" for a in range(1, self.dim + 1))


def tokenize(text: str) -> list:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ModelError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "slash":
            raise ModelError("'/' is only allowed inside rational literals a/b", line, col)
        if kind in ("newline", "semi"):
            tokens.append(Token("sep", m.group(), line, col))
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        if kind == "newline":
            line += 1
            line_start = m.end()
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0
        self.table = None

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.cur
        return ModelError(msg, tok.line, tok.col)

    def skip_seps(self):
        while self.cur.kind == "sep":
            self.advance()

    def expect_end_of_statement(self):
        if self.cur.kind not in ("sep", "eof"):
            raise self.error(f"unexpected {self.cur.text!r}, expected end of statement")

    def parse(self) -> Model:
        dim = None
        lagrangian = None
        self.skip_seps()
        while self.cur.kind != "eof":
            tok = self.cur
            if tok.kind == "ident" and tok.text == "dim":
                if dim is not None:
                    raise self.error("duplicate 'dim' statement")
                if lagrangian is not None:
                    raise self.error("'dim' must precede the Lagrangian")
                self.advance()
                n = self.cur
                if n.kind != "int":
                    raise self.error("expected a positive integer after 'dim'")
                dim = int(n.text)
                if dim < 1:
                    raise self.error("dimension must be >= 1", n)
                self.advance()
                self.table = VarTable(dim)
            elif tok.kind == "ident" and tok.text == "L":
                if dim is None:
                    raise self.error("'dim N' must be declared before 'L'")
                if lagrangian is not None:
                    raise self.error("duplicate Lagrangian statement")
                self.advance()
                if self.cur.kind != "op" or self.cur.text != "=":
                    raise self.error("expected '=' after 'L'")
                self.advance()
                if self.cur.kind in ("sep", "eof"):
                    raise self.error("empty Lagrangian")
                start = self.cur
                lagrangian = self.expr()
                vdeg = lagrangian.degree_in("v")
                if vdeg > MAX_VELOCITY_DEGREE:
                    raise self.error(
                        f"velocity degree {vdeg} > {MAX_VELOCITY_DEGREE} is not supported", start
                    )
            else:
                raise self.error(f"unexpected {tok.text!r}, expected 'dim' or 'L'")
            self.expect_end_of_statement()
            self.skip_seps()
        if dim is None:
            raise self.error("missing 'dim' statement")
        if lagrangian is None:
            raise self.error("empty Lagrangian: missing 'L = ...' statement")
        return Model(dim, lagrangian)

    # expr := term (('+'|'-') term)*
    def expr(self) -> Expr:
        value = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    # term := unary ('*' unary)*
    def term(self) -> Expr:
        value = self.unary()
        while self.cur.kind == "op" and self.cur.text == "*":
            self.advance()
            value = value * self.unary()
        return value

    def unary(self) -> Expr:
        if self.cur.kind == "op" and self.cur.text in "+-":
            op = self.advance().text
            inner = self.unary()
            return -inner if op == "-" else inner
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.cur.kind == "op" and self.cur.text == "^":
            self.advance()
            tok = self.cur
            if tok.kind != "int":
                raise self.error("exponent must be a non-negative integer literal")
            self.advance()
            return base ** int(tok.text)
        return base

    def atom(self) -> Expr:
        tok = self.cur
        if tok.kind == "int":
            self.advance()
            return self.table.const(int(tok.text))
        if tok.kind == "rational":
            self.advance()
            num, den = (int(s) for s in tok.text.replace(" ", "").split("/"))
            if den == 0:
                raise self.error("zero denominator in rational literal", tok)
            return self.table.const(Fraction(num, den))
        if tok.kind == "ident":
            self.advance()
            m = re.fullmatch(r"([qv])([1-9]\d*)", tok.text)
            if m is None or int(m.group(2)) > self.table.dim:
                raise self.error(f"undeclared variable {tok.text!r}", tok)
            return self.table.var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            inner = self.expr()
            if not (self.cur.kind == "op" and self.cur.text == ")"):
                raise self.error("expected ')'")
            self.advance()
            return inner
        if tok.kind in ("sep", "eof"):
            raise self.error("unexpected end of expression")
        raise self.error(f"unexpected {tok.text!r} in expression")


def parse_model(text: str) -> Model:
    """Parse and validate model text; raises :class:`ModelError` with a position."""
    return _Parser(tokenize(text)).parse()


def print_model(model: Model) -> str:
    return f"dim {model.dim}\nL = {format_expr(model.lagrangian)}\n"


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())
