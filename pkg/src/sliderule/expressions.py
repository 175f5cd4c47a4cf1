"""Small arithmetic expression language for scale functions.

One statement of the grammar is a single formula over one free variable
plus named parameters: standard precedence (``^`` right-associative, then
unary minus, then ``* /``, then ``+ -``), parentheses, decimal or
scientific literals, and a fixed set of intrinsics.  Trees are immutable;
evaluation is plain float arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import EvalError, ParseError

__all__ = [
    "Expr", "Const", "Name", "Neg", "BinOp", "Call",
    "parse_expression", "to_text", "evaluate", "names_in", "loggamma",
]


# ---------------------------------------------------------------------------
# Lanczos log-gamma (g = 7, 9 coefficients).  Kept here because the grammar
# exposes it as an intrinsic; accuracy is pinned by the test suite at
# |relative error| <= 1e-10 against integer factorials on [0.5, 170].

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def loggamma(x: float) -> float:
    """log(Gamma(x)) for x > 0 via the Lanczos series."""
    if x <= 0.0:
        raise ValueError(f"loggamma requires x > 0, got {x!r}")
    if x < 0.5:
        # reflection keeps the series in its accurate region
        return math.log(math.pi / math.sin(math.pi * x)) - loggamma(1.0 - x)
    z = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(acc)


# ---------------------------------------------------------------------------
# Tree


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Name:
    """An identifier: the scale's free variable or a bound parameter.
    Which one it is gets decided by the caller supplying bindings."""
    ident: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]


Expr = Union[Const, Name, Neg, BinOp, Call]

_UNARY_INTRINSICS = {
    "ln": math.log,
    "log10": math.log10,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "abs": abs,
    "arccos": math.acos,
    "arcsin": math.asin,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "loggamma": loggamma,
}
_INTRINSIC_ARITY = {name: 1 for name in _UNARY_INTRINSICS} | {"pow": 2}


def names_in(expr: Expr) -> set[str]:
    """All identifiers appearing in the tree."""
    if isinstance(expr, Name):
        return {expr.ident}
    if isinstance(expr, Neg):
        return names_in(expr.arg)
    if isinstance(expr, BinOp):
        return names_in(expr.left) | names_in(expr.right)
    if isinstance(expr, Call):
        out: set[str] = set()
        for a in expr.args:
            out |= names_in(a)
        return out
    return set()


def evaluate(expr: Expr, bindings: Mapping[str, float]) -> float:
    """Evaluate the tree with every identifier bound in ``bindings``.

    Raises EvalError when the arithmetic is undefined at the point."""
    try:
        return _eval(expr, bindings)
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise EvalError(str(exc)) from exc


def _eval(expr: Expr, bindings: Mapping[str, float]) -> float:
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Name):
        try:
            return bindings[expr.ident]
        except KeyError:
            raise EvalError(f"unbound identifier {expr.ident!r}") from None
    if isinstance(expr, Neg):
        return -_eval(expr.arg, bindings)
    if isinstance(expr, BinOp):
        a = _eval(expr.left, bindings)
        b = _eval(expr.right, bindings)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return a * b
        if expr.op == "/":
            return a / b
        # ^: float pow; 0^negative and negative^fractional raise below
        out = a ** b
        if isinstance(out, complex):
            raise ValueError(f"non-real power {a!r} ^ {b!r}")
        return out
    if isinstance(expr, Call):
        vals = [_eval(a, bindings) for a in expr.args]
        if expr.func == "pow":
            out = vals[0] ** vals[1]
            if isinstance(out, complex):
                raise ValueError(f"non-real pow({vals[0]!r}, {vals[1]!r})")
            return out
        return _UNARY_INTRINSICS[expr.func](vals[0])
    raise TypeError(f"not an expression node: {expr!r}")


# ---------------------------------------------------------------------------
# Parser: plain recursive descent over the byte string.


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, expected: tuple[str, ...] = ()) -> ParseError:
        return ParseError(message, offset=self.pos, expected=expected)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, token: str) -> bool:
        self.skip_ws()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def parse(self) -> Expr:
        node = self.sum()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error(f"unexpected {self.peek()!r}", ("operator", "end of input"))
        return node

    def sum(self) -> Expr:
        node = self.product()
        while True:
            self.skip_ws()
            c = self.peek()
            if c == "+":
                self.pos += 1
                node = BinOp("+", node, self.product())
            elif c == "-":
                self.pos += 1
                node = BinOp("-", node, self.product())
            else:
                return node

    def product(self) -> Expr:
        node = self.unary()
        while True:
            self.skip_ws()
            c = self.peek()
            if c == "*":
                self.pos += 1
                node = BinOp("*", node, self.unary())
            elif c == "/":
                self.pos += 1
                node = BinOp("/", node, self.unary())
            else:
                return node

    def unary(self) -> Expr:
        self.skip_ws()
        if self.peek() == "-":
            self.pos += 1
            node = self.unary()
            # fold literal negation so -1 and x^-1 carry plain constants
            if isinstance(node, Const):
                return Const(-node.value)
            return Neg(node)
        if self.peek() == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        self.skip_ws()
        if self.peek() == "^":
            self.pos += 1
            # right-associative, binds tighter than unary minus on its right
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        self.skip_ws()
        c = self.peek()
        if c == "(":
            self.pos += 1
            node = self.sum()
            if not self.take(")"):
                raise self.error("unbalanced parenthesis", (")",))
            return node
        if c.isdigit() or c == ".":
            return self.number()
        if c.isalpha() or c == "_":
            return self.identifier()
        if c == "":
            raise self.error("unexpected end of input", ("number", "identifier", "("))
        raise self.error(f"unexpected {c!r}", ("number", "identifier", "("))

    def number(self) -> Expr:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "."):
            self.pos += 1
        if self.pos < len(self.text) and self.text[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < len(self.text) and self.text[self.pos] in "+-":
                self.pos += 1
            if self.pos < len(self.text) and self.text[self.pos].isdigit():
                while self.pos < len(self.text) and self.text[self.pos].isdigit():
                    self.pos += 1
            else:
                self.pos = mark  # the e belonged to an identifier after all
        lit = self.text[start:self.pos]
        try:
            return Const(float(lit))
        except ValueError:
            self.pos = start
            raise self.error(f"bad numeric literal {lit!r}", ("number",)) from None

    def identifier(self) -> Expr:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        ident = self.text[start:self.pos]
        self.skip_ws()
        if self.peek() == "(":
            if ident not in _INTRINSIC_ARITY:
                self.pos = start
                raise self.error(f"unknown function {ident!r}",
                                 tuple(sorted(_INTRINSIC_ARITY)))
            self.pos += 1
            args = [self.sum()]
            while self.take(","):
                args.append(self.sum())
            if not self.take(")"):
                raise self.error("unbalanced parenthesis in call", (")",))
            if len(args) != _INTRINSIC_ARITY[ident]:
                self.pos = start
                raise self.error(
                    f"{ident} takes {_INTRINSIC_ARITY[ident]} argument(s), got {len(args)}")
            return Call(ident, tuple(args))
        return Name(ident)


def parse_expression(text: str, known: set[str] | None = None) -> Expr:
    """Parse ``text`` into an expression tree.

    With ``known`` given, any identifier outside that set is rejected
    immediately (the DSL front end passes the declared variable plus all
    bound parameter names)."""
    if not text.strip():
        raise ParseError("empty expression", offset=0)
    tree = _Parser(text).parse()
    if known is not None:
        stray = names_in(tree) - known
        if stray:
            raise ParseError(
                f"unknown identifier(s) {', '.join(sorted(stray))}",
                offset=text.find(sorted(stray)[0]),
                expected=tuple(sorted(known)))
    return tree


# ---------------------------------------------------------------------------
# Pretty printer.  Emits the minimal parenthesisation under the grammar's
# precedence so that printing a parsed canonical formula gives the original
# text back, up to whitespace.

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _fmt_const(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def to_text(expr: Expr) -> str:
    return _print(expr, 0)


def _print(expr: Expr, parent_prec: int) -> str:
    # a leading minus re-parses fine everywhere except as the base of ^
    # (only that position is reached without passing through unary)
    if isinstance(expr, Const):
        s = _fmt_const(expr.value)
        return f"({s})" if expr.value < 0 and parent_prec > _PREC["^"] else s
    if isinstance(expr, Name):
        return expr.ident
    if isinstance(expr, Neg):
        inner = _print(expr.arg, _PREC["neg"])
        s = f"-{inner}"
        return f"({s})" if parent_prec > _PREC["^"] else s
    if isinstance(expr, Call):
        return f"{expr.func}({', '.join(_print(a, 0) for a in expr.args)})"
    prec = _PREC[expr.op]
    left = _print(expr.left, prec if expr.op != "^" else prec + 1)
    # - and / are left-associative: their right operand needs one step more
    right_needs = prec + (1 if expr.op in "-/" else 0)
    right = _print(expr.right, right_needs if expr.op != "^" else prec)
    s = f"{left} {expr.op} {right}" if expr.op in "+-" else f"{left}{expr.op}{right}"
    if prec < parent_prec:
        return f"({s})"
    return s
