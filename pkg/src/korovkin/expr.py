"""Arithmetic expressions over the variables ``x`` and ``y``.

Grammar (highest binding last)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?          # right-associative
    primary := NUMBER | 'x' | 'y' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
    FUNC    := sin | cos | sqrt | abs | exp

so ``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``. Evaluation is
vectorized over numpy arrays and refuses to return non-finite values.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError, ExprSyntaxError

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "exp": np.exp,
}
VARIABLES = ("x", "y")
CONSTANTS = {"pi": math.pi}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Num:
    value: float
    offset: int = 0


@dataclass(frozen=True)
class Var:
    name: str
    offset: int = 0


@dataclass(frozen=True)
class Unary:
    op: str
    arg: object
    offset: int = 0


@dataclass(frozen=True)
class Call:
    func: str
    arg: object
    offset: int = 0


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object
    offset: int = 0


def _tokenize(src):
    tokens = []
    pos = 0
    data = src.encode()
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            bad = len(src[:pos].encode()) + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {src[pos:].lstrip()[:1]!r}", bad)
        kind = m.lastgroup
        text = m.group(kind)
        start = len(src[:m.start(kind)].encode())
        tokens.append((kind, text, start))
        pos = m.end()
    tokens.append(("end", "", len(data)))
    return tokens


class _Parser:
    def __init__(self, src):
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, got, off = self.tok
        if got != text or kind == "end":
            found = "end of input" if kind == "end" else repr(got)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", off)
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, text, off = self.tok
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {text!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            _, op, off = self.advance()
            node = Binary(op, node, self.term(), off)
        return node

    def term(self):
        node = self.unary()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            _, op, off = self.advance()
            node = Binary(op, node, self.unary(), off)
        return node

    def unary(self):
        kind, text, off = self.tok
        if kind == "op" and text in ("-", "+"):
            self.advance()
            arg = self.unary()
            return Unary("-", arg, off) if text == "-" else arg
        return self.power()

    def power(self):
        base = self.primary()
        if self.tok[0] == "op" and self.tok[1] == "^":
            _, _, off = self.advance()
            return Binary("^", base, self.unary(), off)
        return base

    def primary(self):
        kind, text, off = self.advance()
        if kind == "num":
            return Num(float(text), off)
        if kind == "name":
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg, off)
            if text in VARIABLES:
                return Var(text, off)
            if text in CONSTANTS:
                return Num(CONSTANTS[text], off)
            raise ExprSyntaxError(f"unknown identifier {text!r}", off)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"expected an operand, found {found}", off)


def parse_function(src: str):
    """Parse ``src`` into an expression tree.

    Raises ExprSyntaxError carrying the byte offset of the failure.
    """
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(src).parse()


def variables(node) -> set[str]:
    """Names of the variables referenced by ``node``."""
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, (Unary, Call)):
        return variables(node.arg)
    if isinstance(node, Binary):
        return variables(node.left) | variables(node.right)
    return set()


def to_source(node) -> str:
    """Fully parenthesized source text; ``parse_function(to_source(t))`` evaluates like ``t``."""
    if isinstance(node, Num):
        return repr(float(node.value)) if node.value >= 0 else f"({node.value!r})"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        return f"(-{to_source(node.arg)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    return f"({to_source(node.left)}{node.op}{to_source(node.right)})"


def _check(value, node):
    if not np.all(np.isfinite(value)):
        raise EvaluationError(f"non-finite value produced by the expression at offset {node.offset}")
    return value


def evaluate(node, x=None, y=None):
    """Evaluate the tree at arrays (or scalars) ``x`` and ``y``."""
    env = {"x": x, "y": y}
    shape = np.broadcast(*[np.asarray(v) for v in (x, y) if v is not None]).shape if (x is not None or y is not None) else ()

    def ev(n):
        if isinstance(n, Num):
            return np.full(shape, n.value) if shape else n.value
        if isinstance(n, Var):
            val = env[n.name]
            if val is None:
                raise EvaluationError(f"variable {n.name!r} is not bound (offset {n.offset})")
            return np.asarray(val, dtype=np.float64)
        if isinstance(n, Unary):
            return -ev(n.arg)
        if isinstance(n, Call):
            return _check(FUNCTIONS[n.func](ev(n.arg)), n)
        a = ev(n.left)
        b = ev(n.right)
        if n.op == "+":
            out = a + b
        elif n.op == "-":
            out = a - b
        elif n.op == "*":
            out = a * b
        elif n.op == "/":
            out = np.divide(a, b)
        else:
            out = np.power(a, b)
        return _check(out, n)

    with np.errstate(all="ignore"):
        return ev(node)
