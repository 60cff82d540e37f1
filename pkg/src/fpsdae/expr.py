"""Expression DSL for the defining map G of a DAE.

Grammar (whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' uint] | '-' factor
    atom   := number | 'x' | yref | func '(' expr ')' | '(' expr ')'
    yref   := 'y' ["'"*] ['(' uint ')'] ['[' uint ']']
    func   := 'exp' | 'log' | 'sin' | 'cos'

``y`` alone means ``y(0)``, ``y'`` means ``y(1)`` (at most three primes) and
the component index may be omitted when ``d = 1``.  A quotient of two
constants is folded into a single rational constant, so ``3/4`` is a
rational literal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import ParseError, SingularEvaluationError, ValidationError
from .field import Field
from .jet import ANALYTIC, Jet, SensitivityJet, apply_function

MAX_PRIMES = 3


@dataclass(frozen=True)
class Span:
    line: int
    column: int


@dataclass(frozen=True)
class Const:
    value: Fraction
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class XVar:
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class YVar:
    deriv: int
    comp: int | None
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    arg: "Expr"
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"
    span: Span | None = field(default=None, compare=False)


Expr = Union[Const, XVar, YVar, Neg, BinOp, Pow, Call]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()\[\]'])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    span: Span


def _tokenize(source: str):
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "ws":
            for i, ch in enumerate(text):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        else:
            toks.append(_Tok(kind, text, Span(line, col)))
        pos = m.end()
    toks.append(_Tok("eof", "", Span(line, pos - line_start + 1)))
    return toks


class _Parser:
    def __init__(self, source, n=None, d=None):
        self.toks = _tokenize(source)
        self.i = 0
        self.n = n
        self.d = d

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        tok = self.take()
        if tok.text != text:
            found = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", tok.span.line, tok.span.column)
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok.span.line, tok.span.column)

    def parse(self):
        e = self.expr()
        if self.peek().kind != "eof":
            raise self.error(f"unexpected {self.peek().text!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek().text in ("+", "-"):
            tok = self.take()
            e = BinOp(tok.text, e, self.term(), tok.span)
        return e

    def term(self):
        e = self.factor()
        while self.peek().text in ("*", "/"):
            tok = self.take()
            rhs = self.factor()
            if tok.text == "/" and isinstance(e, Const) and isinstance(rhs, Const):
                if rhs.value == 0:
                    raise ParseError("division by zero constant", tok.span.line, tok.span.column)
                e = Const(e.value / rhs.value, e.span)
            else:
                e = BinOp(tok.text, e, rhs, tok.span)
        return e

    def factor(self):
        tok = self.peek()
        if tok.text == "-":
            self.take()
            arg = self.factor()
            if isinstance(arg, Const):
                return Const(-arg.value, tok.span)
            return Neg(arg, tok.span)
        base = self.atom()
        if self.peek().text == "^":
            caret = self.take()
            etok = self.take()
            if etok.kind != "number" or not etok.text.isdigit():
                raise self.error("exponent must be a nonnegative integer literal", etok)
            return Pow(base, int(etok.text), caret.span)
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "number":
            return Const(Fraction(tok.text), tok.span)
        if tok.text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "name":
            if tok.text == "x":
                return XVar(tok.span)
            if tok.text == "y":
                return self.yref(tok)
            if tok.text in ANALYTIC:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg, tok.span)
            raise self.error(f"unknown name {tok.text!r}", tok)
        raise self.error(f"unexpected {tok.text or 'end of input'!r}", tok)

    def _uint(self):
        tok = self.take()
        if tok.kind != "number" or not tok.text.isdigit():
            raise self.error("expected a nonnegative integer", tok)
        return int(tok.text)

    def yref(self, ytok):
        primes = 0
        while self.peek().text == "'":
            self.take()
            primes += 1
        if primes > MAX_PRIMES:
            raise self.error(f"at most {MAX_PRIMES} primes; write y({primes}) instead", ytok)
        deriv = primes
        if self.peek().text == "(":
            if primes:
                raise self.error("mixing primes with an explicit derivative order")
            self.take()
            deriv = self._uint()
            self.expect(")")
        comp = None
        if self.peek().text == "[":
            self.take()
            comp = self._uint()
            self.expect("]")
        if self.n is not None and deriv > self.n:
            raise ParseError(f"derivative order {deriv} exceeds n = {self.n}", ytok.span.line, ytok.span.column)
        if self.d is not None:
            if comp is None:
                if self.d != 1:
                    raise ParseError("component index required when d > 1", ytok.span.line, ytok.span.column)
                comp = 0
            elif comp >= self.d:
                raise ParseError(f"component index {comp} must be < d = {self.d}", ytok.span.line, ytok.span.column)
        elif comp is None:
            comp = 0
        return YVar(deriv, comp, ytok.span)


def parse(source: str, n: int | None = None, d: int | None = None) -> Expr:
    """Parse ``source`` into an AST, validating derivative orders against ``n`` and components against ``d``."""
    return _Parser(source, n, d).parse()


def _const_text(v: Fraction) -> str:
    if v.denominator == 1:
        text = str(v.numerator)
    else:
        text = f"{v.numerator}/{v.denominator}"
    if v < 0 or v.denominator != 1:
        return f"({text})"
    return text


def to_source(e: Expr) -> str:
    """Canonical, fully parenthesised rendering; ``parse(to_source(e)) == e``."""
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, XVar):
        return "x"
    if isinstance(e, YVar):
        return f"y({e.deriv})[{e.comp}]"
    if isinstance(e, Neg):
        return f"(-{to_source(e.arg)})"
    if isinstance(e, BinOp):
        return f"({to_source(e.left)} {e.op} {to_source(e.right)})"
    if isinstance(e, Pow):
        return f"{to_source(e.base)}^{e.exponent}"
    if isinstance(e, Call):
        return f"{e.func}({to_source(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def walk(e: Expr):
    yield e
    if isinstance(e, Neg):
        yield from walk(e.arg)
    elif isinstance(e, BinOp):
        yield from walk(e.left)
        yield from walk(e.right)
    elif isinstance(e, (Pow, Call)):
        yield from walk(e.base if isinstance(e, Pow) else e.arg)


def is_constant(e: Expr) -> bool:
    return not any(isinstance(node, (XVar, YVar)) for node in walk(e))


def validate(e: Expr, n: int, d: int, field_: Field) -> None:
    for node in walk(e):
        if isinstance(node, YVar):
            if not 0 <= node.deriv <= n:
                raise ValidationError(f"derivative order {node.deriv} outside 0..{n}")
            if not 0 <= node.comp < d:
                raise ValidationError(f"component index {node.comp} outside 0..{d - 1}")
        if field_.exact:
            if isinstance(node, Call):
                raise ValidationError(f"{node.func} is not allowed in rational mode")
            if isinstance(node, BinOp) and node.op == "/" and not is_constant(node.right):
                raise ValidationError("division by a non-constant is not allowed in rational mode")


def evaluate(e: Expr, x, ys):
    """Evaluate ``e`` with ``x`` and ``ys[j][i]`` (= y(j)[i]) in a common ring.

    The ring may be field scalars, :class:`Jet` or :class:`SensitivityJet`.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, XVar):
        return x
    if isinstance(e, YVar):
        return ys[e.deriv][e.comp]
    if isinstance(e, Neg):
        return -evaluate(e.arg, x, ys)
    if isinstance(e, BinOp):
        a = evaluate(e.left, x, ys)
        b = evaluate(e.right, x, ys)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if not isinstance(b, (Jet, SensitivityJet)) and b == 0:
            raise SingularEvaluationError("division by zero")
        try:
            return a / b
        except ZeroDivisionError as exc:
            raise SingularEvaluationError("division by zero") from exc
    if isinstance(e, Pow):
        return evaluate(e.base, x, ys) ** e.exponent
    if isinstance(e, Call):
        return apply_function(e.func, evaluate(e.arg, x, ys))
    raise TypeError(f"not an expression node: {e!r}")


@dataclass(frozen=True)
class Problem:
    """The DAE ``G[x, y, y', ..., y^(n)] = 0`` with ``r`` equations in ``d`` unknowns."""

    exprs: tuple
    n: int
    d: int
    field: Field = Field()

    def __post_init__(self):
        if self.n < 0 or self.d < 1 or not self.exprs:
            raise ValidationError("need n >= 0, d >= 1 and at least one equation")
        for e in self.exprs:
            validate(e, self.n, self.d, self.field)

    @classmethod
    def from_strings(cls, equations, n: int, d: int = 1, field: Field | str = "rational") -> "Problem":
        if isinstance(field, str):
            field = Field(field)
        if isinstance(equations, str):
            equations = [equations]
        return cls(tuple(parse(src, n, d) for src in equations), n, d, field)

    @property
    def r(self) -> int:
        return len(self.exprs)

    @property
    def quadratic(self) -> bool:
        return self.r == self.d

    @property
    def underdetermined(self) -> bool:
        return self.r < self.d

    def with_field(self, field: Field | str) -> "Problem":
        return Problem(self.exprs, self.n, self.d, Field(field) if isinstance(field, str) else field)

    def plus(self, other_exprs) -> "Problem":
        """Componentwise sum ``G + H``."""
        if len(other_exprs) != self.r:
            raise ValidationError("perturbation must have one component per equation")
        return Problem(
            tuple(BinOp("+", g, h) for g, h in zip(self.exprs, other_exprs)),
            self.n, self.d, self.field,
        )

    def sources(self):
        return [to_source(e) for e in self.exprs]

    def __call__(self, x, ys):
        return [evaluate(e, x, ys) for e in self.exprs]
