"""Scalar expressions in one variable ``t``.

Expressions are parsed into a small immutable tree that can be evaluated on
floats or numpy arrays and differentiated symbolically.  Only constant
folding and 0/1 identities are applied when building derivatives; no other
simplification is attempted.

Grammar (highest precedence first)::

    primary := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
    power   := primary ['^' unary]          # right-associative
    unary   := ('-' | '+') unary | power
    term    := unary (('*' | '/') unary)*
    expr    := term (('+' | '-') term)*

Functions: sin cos tan exp log sqrt abs.  Exponents must be constant.
``abs`` is accepted but is not smooth at zero; its derivative is
``u/abs(u)``, which faults when evaluated at the kink.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvaluationError, ParseError

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs")
CONSTANTS = {"pi": math.pi}

_NUMPY_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}

# printing precedence
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


class Expr:
    """Base class for expression nodes."""

    __slots__ = ()

    def __call__(self, t):
        return evaluate(self, t)

    def __str__(self) -> str:
        return to_text(self)

    @property
    def has_variable(self) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    value: float

    @property
    def has_variable(self) -> bool:
        return False


@dataclass(frozen=True)
class Var(Expr):
    @property
    def has_variable(self) -> bool:
        return True


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # "neg" or a name from FUNCTIONS
    arg: Expr

    @property
    def has_variable(self) -> bool:
        return self.arg.has_variable


@dataclass(frozen=True)
class Binary(Expr):
    op: str  # one of + - * /
    left: Expr
    right: Expr

    @property
    def has_variable(self) -> bool:
        return self.left.has_variable or self.right.has_variable


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float

    @property
    def has_variable(self) -> bool:
        return self.base.has_variable


T = Var()
ZERO = Const(0.0)
ONE = Const(1.0)

Number = Union[float, np.ndarray]


# ---------------------------------------------------------------------------
# simplifying constructors (constant folding + 0/1 identities only)
# ---------------------------------------------------------------------------

def _is_const(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Binary("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    return Binary("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Binary("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        return Const(a.value / b.value)
    if _is_const(a, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    return Binary("/", a, b)


def neg(a: Expr) -> Expr:
    if _is_const(a):
        return Const(-a.value)
    return Unary("neg", a)


def power(base: Expr, exponent: float) -> Expr:
    exponent = float(exponent)
    if exponent == 0.0:
        return ONE
    if exponent == 1.0:
        return base
    if _is_const(base):
        with np.errstate(all="ignore"):
            value = float(np.power(base.value, exponent))
        if math.isfinite(value):
            return Const(value)
    return Pow(base, exponent)


def func(name: str, arg: Expr) -> Expr:
    return Unary(name, arg)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _eval(e: Expr, t):
    if isinstance(e, Const):
        return e.value if np.ndim(t) == 0 else np.full(np.shape(t), e.value)
    if isinstance(e, Var):
        return t
    if isinstance(e, Unary):
        x = _eval(e.arg, t)
        if e.op == "neg":
            return -x
        return _NUMPY_FUNCS[e.op](x)
    if isinstance(e, Binary):
        a = _eval(e.left, t)
        b = _eval(e.right, t)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        return np.divide(a, b)
    if isinstance(e, Pow):
        return np.power(_eval(e.base, t), e.exponent)
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e: Expr, t: Number) -> Number:
    """Evaluate ``e`` at ``t`` (float or array) in double precision.

    Raises EvaluationError carrying the first offending ``t`` if the result
    is not finite.
    """
    scalar = np.ndim(t) == 0
    tt = float(t) if scalar else np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        value = _eval(e, tt)
    if scalar:
        value = float(value)
        if not math.isfinite(value):
            raise EvaluationError(f"non-finite value of {to_text(e)}", t=tt)
        return value
    value = np.asarray(value, dtype=float)
    bad = ~np.isfinite(value)
    if bad.any():
        first = float(tt[np.argmax(bad)])
        raise EvaluationError(f"non-finite value of {to_text(e)}", t=first)
    return value


# ---------------------------------------------------------------------------
# differentiation
# ---------------------------------------------------------------------------

def differentiate(e: Expr) -> Expr:
    """Exact derivative with respect to ``t``."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Binary):
        a, b = e.left, e.right
        da, db = differentiate(a), differentiate(b)
        if e.op == "+":
            return add(da, db)
        if e.op == "-":
            return sub(da, db)
        if e.op == "*":
            return add(mul(da, b), mul(a, db))
        # (a/b)' = (a' b - a b') / b^2
        return div(sub(mul(da, b), mul(a, db)), power(b, 2.0))
    if isinstance(e, Pow):
        return mul(mul(Const(e.exponent), power(e.base, e.exponent - 1.0)),
                   differentiate(e.base))
    if isinstance(e, Unary):
        u = e.arg
        du = differentiate(u)
        if e.op == "neg":
            return neg(du)
        if e.op == "sin":
            outer = func("cos", u)
        elif e.op == "cos":
            outer = neg(func("sin", u))
        elif e.op == "tan":
            outer = add(ONE, power(func("tan", u), 2.0))
        elif e.op == "exp":
            outer = e
        elif e.op == "log":
            return div(du, u)
        elif e.op == "sqrt":
            return div(du, mul(Const(2.0), e))
        elif e.op == "abs":
            outer = div(u, e)
        else:
            raise TypeError(f"unknown function {e.op}")
        return mul(outer, du)
    raise TypeError(f"not an expression node: {e!r}")


def derivative(e: Expr, order: int) -> Expr:
    for _ in range(order):
        e = differentiate(e)
    return e


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        text = str(int(value))
        # keep the sign of negative zero
        return "-0" if text == "0" and math.copysign(1.0, value) < 0 else text
    return repr(float(value))


def _prec(e: Expr) -> int:
    if isinstance(e, Const):
        return _PREC_NEG if math.copysign(1.0, e.value) < 0 else _PREC_ATOM
    if isinstance(e, Binary):
        return _PREC_ADD if e.op in "+-" else _PREC_MUL
    if isinstance(e, Unary) and e.op == "neg":
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    return _PREC_ATOM


def to_text(e: Expr) -> str:
    """Render ``e`` so that ``parse(to_text(e)) == e``."""
    if isinstance(e, Const):
        return format_number(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Unary):
        if e.op == "neg":
            inner = to_text(e.arg)
            if _prec(e.arg) < _PREC_NEG:
                inner = f"({inner})"
            return f"-{inner}"
        return f"{e.op}({to_text(e.arg)})"
    if isinstance(e, Binary):
        p = _prec(e)
        left = to_text(e.left)
        right = to_text(e.right)
        if _prec(e.left) < p:
            left = f"({left})"
        if _prec(e.right) <= p:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    if isinstance(e, Pow):
        base = to_text(e.base)
        if _prec(e.base) <= _PREC_POW:
            base = f"({base})"
        return f"{base}^{format_number(e.exponent)}"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                col = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
                raise ParseError(f"unexpected character {text[col]!r}", col)
            kind = m.lastgroup
            value = m.group(kind)
            start = m.start(kind)
            if value == "**":
                value = "^"
            self.tokens.append((kind, value, start))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, got, pos = self.take()
        if got != value:
            found = "end of input" if kind == "end" else repr(got)
            raise ParseError(f"expected {value!r}, found {found}", pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"expected operator or end of input, found {value!r}", pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            e = Binary(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            e = Binary(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.take()
            operand = self.unary()
            # a negated literal is itself a literal
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Unary("neg", operand)
        if kind == "op" and value == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.take()
            exp_pos = self.peek()[2]
            exponent = self.unary()
            if exponent.has_variable:
                raise ParseError("exponent must be constant", exp_pos)
            try:
                value = evaluate(exponent, 0.0)
            except EvaluationError as exc:
                raise ParseError(f"exponent is not finite: {exc}", exp_pos) from None
            return Pow(base, value)
        return base

    def primary(self) -> Expr:
        kind, value, pos = self.take()
        if kind == "num":
            number = float(value)
            if not math.isfinite(number):
                raise ParseError(f"number literal {value!r} overflows", pos)
            return Const(number)
        if kind == "name":
            if value == "t":
                return T
            if value in CONSTANTS:
                return Const(CONSTANTS[value])
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(value, arg)
            raise ParseError(f"unknown identifier {value!r}", pos)
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"expected number, 't', function or '(', found {found}", pos)


def parse(text: str) -> Expr:
    """Parse an infix expression in ``t``."""
    return _Parser(text).parse()


def parse_constant(text: str) -> float:
    """Parse a constant expression such as ``3/4`` or ``2*pi``."""
    e = parse(text)
    if e.has_variable:
        raise ParseError("expected a constant, found an expression in t", 0)
    return evaluate(e, 0.0)
