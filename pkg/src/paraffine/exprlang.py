"""Symbolic expressions in one variable, used to describe input curves.

The language is deliberately tiny: numeric literals, the single variable
``t``, the four arithmetic operators, integer powers and the function set
``sin, cos, sinh, cosh, exp``.  That is enough to express every curve the
constructors need while keeping symbolic differentiation closed: the
derivative of any expression is again an expression of the same language.

Grammar (whitespace is insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' nonneg_integer)?
    atom   := number | 't' | func '(' expr ')' | '(' expr ')'

Binding strength is ``^`` above unary minus above ``* /`` above ``+ -``,
so ``-t^2`` means ``-(t^2)``.  Expression nodes are frozen dataclasses and
therefore hashable, comparable structurally and safe to share between
threads; differentiation returns new trees and never mutates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp")

_FN_EVAL: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "exp": math.exp,
}


class ParseError(ValueError):
    """Syntax or vocabulary error, with the byte offset and the expected tokens."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = int(offset)
        self.expected = tuple(expected)
        detail = f"{message} at offset {self.offset}"
        if self.expected:
            detail += " (expected " + " or ".join(self.expected) + ")"
        super().__init__(detail)


class EvaluationError(ArithmeticError):
    """Raised when evaluation hits a pole; carries the offending subexpression."""

    def __init__(self, message: str, subexpression: str):
        self.subexpression = subexpression
        super().__init__(f"{message} in '{subexpression}'")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    """The single independent variable ``t``."""


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    power: int


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Num, Var, Add, Sub, Mul, Div, Neg, Pow, Call]


# --------------------------------------------------------------------------
# tokenizer
# --------------------------------------------------------------------------

_OPS = set("+-*/^()")


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, offset) triples; kinds are NUM, IDENT, OP, END."""
    tokens = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append(("OP", ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            seen_dot = False
            while j < n and (source[j].isdigit() or (source[j] == "." and not seen_dot)):
                seen_dot = seen_dot or source[j] == "."
                j += 1
            # exponent part of a float literal, e.g. 2.5e-3
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    while k < n and source[k].isdigit():
                        k += 1
                    j = k
            text = source[i:j]
            try:
                float(text)
            except ValueError:
                raise ParseError(f"malformed number '{text}'", i, ("number",)) from None
            tokens.append(("NUM", text, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(("IDENT", source[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character '{ch}'", i, ())
    tokens.append(("END", "", n))
    return tokens


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, expected: tuple[str, ...]):
        kind, text, offset = self.peek()
        shown = text if kind != "END" else "end of input"
        raise ParseError(f"{message}, got '{shown}'", offset, expected)

    def expect_op(self, op: str):
        kind, text, _ = self.peek()
        if kind == "OP" and text == op:
            return self.advance()
        self.fail("syntax error", (f"'{op}'",))

    def parse(self) -> Expr:
        node = self.expr()
        kind, text, offset = self.peek()
        if kind != "END":
            raise ParseError(
                f"trailing input '{text}'", offset, ("'+'", "'-'", "'*'", "'/'", "end of input")
            )
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "OP" and text in "+-":
                self.advance()
                rhs = self.term()
                node = Add(node, rhs) if text == "+" else Sub(node, rhs)
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "OP" and text in "*/":
                self.advance()
                rhs = self.factor()
                node = Mul(node, rhs) if text == "*" else Div(node, rhs)
            else:
                return node

    def factor(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "OP" and text == "-":
            self.advance()
            operand = self.factor()
            # fold a negated literal so that printing round-trips structurally
            if isinstance(operand, Num):
                return Num(-operand.value)
            return Neg(operand)
        node = self.atom()
        kind, text, _ = self.peek()
        if kind == "OP" and text == "^":
            self.advance()
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> int:
        kind, text, offset = self.peek()
        if kind != "NUM":
            self.fail("exponent must be a literal", ("non-negative integer",))
        value = float(text)
        if value != int(value):
            raise ParseError(
                f"exponent must be an integer, got '{text}'", offset, ("non-negative integer",)
            )
        self.advance()
        return int(value)

    def atom(self) -> Expr:
        kind, text, offset = self.advance()
        if kind == "NUM":
            return Num(float(text))
        if kind == "IDENT":
            if text == "t":
                return Var()
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            raise ParseError(
                f"unknown identifier '{text}'", offset, ("t",) + FUNCTIONS
            )
        if kind == "OP" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        self.pos -= 1
        self.fail("syntax error", ("number", "'t'", "function", "'('"))
        raise AssertionError("unreachable")


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree, or raise :class:`ParseError`."""
    return _Parser(source).parse()


# --------------------------------------------------------------------------
# printing
# --------------------------------------------------------------------------

# precedence levels used for minimal parenthesisation
_LEVEL_ADD, _LEVEL_MUL, _LEVEL_NEG, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _level(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _LEVEL_ADD
    if isinstance(e, (Mul, Div)):
        return _LEVEL_MUL
    if isinstance(e, Neg):
        return _LEVEL_NEG
    if isinstance(e, Num) and e.value < 0:
        return _LEVEL_NEG
    if isinstance(e, Pow):
        return _LEVEL_POW
    return _LEVEL_ATOM


def _num_text(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def to_source(e: Expr) -> str:
    """Render a tree back to source; ``parse(to_source(x))`` equals ``x``."""

    def wrap(child: Expr, minimum: int) -> str:
        text = to_source(child)
        return f"({text})" if _level(child) < minimum else text

    if isinstance(e, Num):
        return _num_text(e.value)
    if isinstance(e, Var):
        return "t"
    # right operands get parens at equal level so that the parse tree (not
    # just the value) survives a print/parse round trip: a + (b + c)
    if isinstance(e, Add):
        return f"{wrap(e.left, _LEVEL_ADD)} + {wrap(e.right, _LEVEL_ADD + 1)}"
    if isinstance(e, Sub):
        return f"{wrap(e.left, _LEVEL_ADD)} - {wrap(e.right, _LEVEL_ADD + 1)}"
    if isinstance(e, Mul):
        return f"{wrap(e.left, _LEVEL_MUL)}*{wrap(e.right, _LEVEL_MUL + 1)}"
    if isinstance(e, Div):
        return f"{wrap(e.left, _LEVEL_MUL)}/{wrap(e.right, _LEVEL_MUL + 1)}"
    if isinstance(e, Neg):
        return f"-{wrap(e.operand, _LEVEL_NEG)}"
    if isinstance(e, Pow):
        return f"{wrap(e.base, _LEVEL_ATOM)}^{e.power}"
    if isinstance(e, Call):
        return f"{e.fn}({to_source(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------


def evaluate(e: Expr, t: float) -> float:
    """Evaluate at ``t`` with IEEE double semantics; poles raise EvaluationError."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return float(t)
    if isinstance(e, Add):
        return evaluate(e.left, t) + evaluate(e.right, t)
    if isinstance(e, Sub):
        return evaluate(e.left, t) - evaluate(e.right, t)
    if isinstance(e, Mul):
        return evaluate(e.left, t) * evaluate(e.right, t)
    if isinstance(e, Div):
        denom = evaluate(e.right, t)
        if denom == 0.0:
            raise EvaluationError("division by zero", to_source(e))
        return evaluate(e.left, t) / denom
    if isinstance(e, Neg):
        return -evaluate(e.operand, t)
    if isinstance(e, Pow):
        return evaluate(e.base, t) ** e.power
    if isinstance(e, Call):
        return _FN_EVAL[e.fn](evaluate(e.arg, t))
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------------------
# differentiation
# --------------------------------------------------------------------------

# smart constructors: fold constants so repeated differentiation does not
# balloon the trees (and so d^4 cos(t) / dt^4 comes back as cos(t) exactly)


def _num(v: float) -> Num:
    return Num(float(v))


def _is_const(e: Expr, v: float) -> bool:
    return isinstance(e, Num) and e.value == v


def _add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return _num(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return _num(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return _neg(b)
    return Sub(a, b)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Num):
        return _num(-a.value)
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


def _mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return _num(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return _num(0.0)
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0):
        return _num(0.0)
    if _is_const(b, 1.0):
        return a
    return Div(a, b)


def _pow(base: Expr, power: int) -> Expr:
    if power == 0:
        return _num(1.0)
    if power == 1:
        return base
    return Pow(base, power)


_FN_DERIV: dict[str, Callable[[Expr], Expr]] = {
    "sin": lambda u: Call("cos", u),
    "cos": lambda u: _neg(Call("sin", u)),
    "sinh": lambda u: Call("cosh", u),
    "cosh": lambda u: Call("sinh", u),
    "exp": lambda u: Call("exp", u),
}


def differentiate(e: Expr) -> Expr:
    """Symbolic derivative with respect to ``t``."""
    if isinstance(e, Num):
        return _num(0.0)
    if isinstance(e, Var):
        return _num(1.0)
    if isinstance(e, Add):
        return _add(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Sub):
        return _sub(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Neg):
        return _neg(differentiate(e.operand))
    if isinstance(e, Mul):
        return _add(
            _mul(differentiate(e.left), e.right), _mul(e.left, differentiate(e.right))
        )
    if isinstance(e, Div):
        num = _sub(
            _mul(differentiate(e.left), e.right), _mul(e.left, differentiate(e.right))
        )
        return _div(num, _pow(e.right, 2))
    if isinstance(e, Pow):
        inner = differentiate(e.base)
        return _mul(_mul(_num(e.power), _pow(e.base, e.power - 1)), inner)
    if isinstance(e, Call):
        return _mul(_FN_DERIV[e.fn](e.arg), differentiate(e.arg))
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------------------
# curves
# --------------------------------------------------------------------------


class CurveSpec:
    """A vector-valued curve whose components are expressions in ``t``.

    Components may be given as source strings or pre-built trees.  Derivative
    curves are computed symbolically on first use and cached on the instance;
    the cache only ever gains idempotent entries, so sharing a CurveSpec
    between threads is safe.
    """

    def __init__(self, components: Sequence[Union[str, Expr]]):
        parsed = []
        sources = []
        for comp in components:
            if isinstance(comp, str):
                parsed.append(parse(comp))
                sources.append(comp)
            else:
                parsed.append(comp)
                sources.append(to_source(comp))
        self.components: tuple[Expr, ...] = tuple(parsed)
        self.sources: tuple[str, ...] = tuple(sources)
        self._derivative: CurveSpec | None = None

    @property
    def dim(self) -> int:
        return len(self.components)

    def derivative(self) -> "CurveSpec":
        if self._derivative is None:
            self._derivative = CurveSpec([differentiate(c) for c in self.components])
        return self._derivative

    def eval(self, t: float) -> np.ndarray:
        return np.array([evaluate(c, t) for c in self.components], dtype=float)

    def derivatives(self, t: float, order: int) -> np.ndarray:
        """Values of the curve and its first ``order`` derivatives at ``t``.

        Returns an array of shape ``(order + 1, dim)`` whose row ``k`` is the
        k-th derivative vector.
        """
        rows = []
        curve: CurveSpec = self
        for _ in range(order + 1):
            rows.append(curve.eval(t))
            curve = curve.derivative()
        return np.array(rows, dtype=float)

    def __repr__(self) -> str:
        return f"CurveSpec({list(self.sources)!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CurveSpec):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)
