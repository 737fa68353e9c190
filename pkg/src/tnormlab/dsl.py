"""Expression DSL for user-supplied binary functions on the unit square.

Grammar (stable public contract)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | power
    power  := atom ("^" factor)?
    atom   := NUMBER | "x" | "y" | "(" expr ")"
            | ("min" | "max") "(" expr "," expr ")"

"^" is right-associative and binds tighter than unary minus on its left
("-x^2" is -(x^2), "a^b^c" is a^(b^c)).  NUMBER is an unsigned decimal
literal with optional fraction and exponent ("2", "0.25", "1e-3").
Whitespace is insignificant.  Implicit multiplication is rejected; "*" is
always explicit.  There is no lambda variable: scaling checks substitute
the scale factor into ``x`` of a two-variable expression.

``serialize`` emits a fully parenthesized canonical form that reparses to
a structurally identical tree.

Evaluation follows IEEE-754 double semantics and is total except for three
conditions, each reported as :class:`EvalError` naming the offending AST
node: division by zero, zero raised to a negative power, and any NaN
produced in the tree.  Both scalars and numpy arrays are accepted.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Expression",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "ParseError",
    "EvalError",
    "parse",
    "serialize",
    "eval_expr",
]


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v) or math.isinf(v):
            raise ValueError("constants must be finite")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class Var:
    name: str  # "x" or "y"

    def __post_init__(self):
        if self.name not in ("x", "y"):
            raise ValueError(f"unknown variable {self.name!r}")


@dataclass(frozen=True)
class Neg:
    operand: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Call:
    func: str  # "min" or "max"
    left: "Expression"
    right: "Expression"


Expression = Union[Const, Var, Neg, BinOp, Call]


# --------------------------------------------------------------------------
# Errors
# --------------------------------------------------------------------------

class ParseError(Exception):
    """Syntax error with the offset, what was expected, and what was found."""

    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"at offset {position}: expected {expected}, found {found}")


class EvalError(Exception):
    """Evaluation failure attributed to one AST node.

    ``kind`` is one of ``"division_by_zero"``, ``"zero_to_negative_power"``,
    ``"nan"``.
    """

    def __init__(self, kind: str, node: Expression, point: tuple[float, float]):
        self.kind = kind
        self.node = node
        self.point = point
        label = {
            "division_by_zero": "division by zero",
            "zero_to_negative_power": "zero raised to a negative power",
            "nan": "NaN produced",
        }[kind]
        super().__init__(f"{label} in {serialize(node)} at (x, y) = {point}")


# --------------------------------------------------------------------------
# Tokenizer
# --------------------------------------------------------------------------

_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_PUNCT = "+-*/^(),"


@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "ident", a punctuation char, or "end"
    text: str
    position: int

    def describe(self) -> str:
        if self.kind == "end":
            return "end of input"
        if self.kind == "number":
            return f"number {self.text!r}"
        return repr(self.text)


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            m = _NUMBER_RE.match(source, i)
            tokens.append(_Token("number", m.group(), i))
            i = m.end()
            continue
        if ch.isalpha() or ch == "_":
            m = _IDENT_RE.match(source, i)
            tokens.append(_Token("ident", m.group(), i))
            i = m.end()
            continue
        if ch in _PUNCT:
            tokens.append(_Token(ch, ch, i))
            i += 1
            continue
        raise ParseError(i, "a token", repr(ch))
    tokens.append(_Token("end", "", n))
    return tokens


# --------------------------------------------------------------------------
# Pratt parser
# --------------------------------------------------------------------------

_LBP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_RIGHT_ASSOC = {"^"}
_UNARY_BP = 25  # between "*" and "^": -x^2 parses as -(x^2), -x*y as (-x)*y


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(tok.position, expected, tok.describe())
        return self.advance()

    def parse_expression(self, min_bp: int = 0) -> Expression:
        node = self._nud()
        while True:
            tok = self.peek()
            bp = _LBP.get(tok.kind)
            if bp is None or bp < min_bp:
                return node
            self.advance()
            next_bp = bp if tok.kind in _RIGHT_ASSOC else bp + 1
            node = BinOp(tok.kind, node, self.parse_expression(next_bp))

    def _nud(self) -> Expression:
        tok = self.advance()
        if tok.kind == "number":
            return Const(float(tok.text))
        if tok.kind == "ident":
            if tok.text in ("x", "y"):
                return Var(tok.text)
            if tok.text in ("min", "max"):
                self.expect("(", "'('")
                left = self.parse_expression(0)
                self.expect(",", "','")
                right = self.parse_expression(0)
                self.expect(")", "')'")
                return Call(tok.text, left, right)
            raise ParseError(tok.position, "'x', 'y', 'min' or 'max'", tok.describe())
        if tok.kind == "-":
            return Neg(self.parse_expression(_UNARY_BP))
        if tok.kind == "(":
            inner = self.parse_expression(0)
            self.expect(")", "')'")
            return inner
        raise ParseError(tok.position, "an expression", tok.describe())


def parse(source: str) -> Expression:
    """Parse ``source`` into an AST; raises :class:`ParseError` on any violation."""
    parser = _Parser(_tokenize(source))
    node = parser.parse_expression(0)
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(tail.position, "end of input", tail.describe())
    return node


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

def serialize(node: Expression) -> str:
    """Fully parenthesized canonical form; reparses to an identical tree."""
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{serialize(node.operand)})"
    if isinstance(node, BinOp):
        return f"({serialize(node.left)} {node.op} {serialize(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({serialize(node.left)}, {serialize(node.right)})"
    raise TypeError(f"not an expression node: {node!r}")


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

def _first_bad_point(mask, x, y) -> tuple[float, float]:
    """Coordinates of the first True entry of ``mask`` (row-major)."""
    if np.ndim(mask) == 0:
        xs = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        return float(np.ravel(xs[0])[0]), float(np.ravel(xs[1])[0])
    idx = np.argmax(np.ravel(mask))
    xb, yb = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float),
                                 np.asarray(mask))[:2]
    return float(np.ravel(xb)[idx]), float(np.ravel(yb)[idx])


def _check_nan(value, node: Expression, x, y):
    bad = np.isnan(value)
    if np.any(bad):
        raise EvalError("nan", node, _first_bad_point(bad, x, y))
    return value


def _eval(node: Expression, x, y):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x if node.name == "x" else y
    if isinstance(node, Neg):
        return -_eval(node.operand, x, y)
    if isinstance(node, Call):
        a = _eval(node.left, x, y)
        b = _eval(node.right, x, y)
        fn = np.minimum if node.func == "min" else np.maximum
        return _check_nan(fn(a, b), node, x, y)
    if isinstance(node, BinOp):
        a = _eval(node.left, x, y)
        b = _eval(node.right, x, y)
        if node.op == "+":
            value = a + b
        elif node.op == "-":
            value = a - b
        elif node.op == "*":
            value = a * b
        elif node.op == "/":
            zero = np.broadcast_to(np.asarray(b) == 0, np.broadcast(a, b).shape)
            if np.any(zero):
                raise EvalError("division_by_zero", node, _first_bad_point(zero, x, y))
            value = a / b
        else:  # "^"
            bad = np.broadcast_to((np.asarray(a) == 0) & (np.asarray(b) < 0),
                                  np.broadcast(a, b).shape)
            if np.any(bad):
                raise EvalError("zero_to_negative_power", node,
                                _first_bad_point(bad, x, y))
            with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
                value = np.power(a, b)
        return _check_nan(value, node, x, y)
    raise TypeError(f"not an expression node: {node!r}")


def eval_expr(node: Expression, x, y):
    """Evaluate ``node`` at (x, y); scalars in give a float out, arrays in
    give an array out.  Deterministic: identical inputs produce identical
    bits."""
    with np.errstate(all="ignore"):
        value = _eval(node, x, y)
    if np.ndim(value) == 0 and np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(value)
    return np.broadcast_to(np.asarray(value, float),
                           np.broadcast(np.asarray(x), np.asarray(y)).shape).copy()
