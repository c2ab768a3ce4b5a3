"""Bracket expressions in the positive Chevalley generators.

Grammar (whitespace insignificant):

    expr   := ['-'] term (('+' | '-') term)*
    term   := [integer] factor
    factor := 'x' index | '[' expr ',' expr ']'

Coefficients are kept as the integers written in the source text and are
reduced mod p only when an expression is evaluated in a model, so a text
like "- 2[x1,x2]" survives printing and re-parsing unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

__all__ = [
    "Generator",
    "Bracket",
    "Scaled",
    "Sum",
    "BracketExpr",
    "RelationSyntaxError",
    "IndexOutOfRange",
    "MixedWeight",
    "parse",
    "to_text",
    "multidegree",
]


@dataclass(frozen=True)
class Generator:
    index: int  # 1-based


@dataclass(frozen=True)
class Bracket:
    left: "BracketExpr"
    right: "BracketExpr"


@dataclass(frozen=True)
class Scaled:
    coeff: int  # nonzero integer, verbatim from the source text
    node: "BracketExpr"


@dataclass(frozen=True)
class Sum:
    terms: tuple["BracketExpr", ...]  # flattened; each term is not a Sum


BracketExpr = Union[Generator, Bracket, Scaled, Sum]


class RelationSyntaxError(ValueError):
    """Parse failure; carries the 0-based offset in .position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class IndexOutOfRange(ValueError):
    """Generator index outside 1..n."""


class MixedWeight(ValueError):
    """Sum of terms with different multidegrees."""


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> RelationSyntaxError:
        return RelationSyntaxError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def factor(self) -> BracketExpr:
        c = self.peek()
        if c == "x":
            self.pos += 1
            return Generator(self.integer())
        if c == "[":
            self.pos += 1
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take("]")
            return Bracket(left, right)
        raise self.error("expected 'x<k>' or '['")

    def term(self, sign: int) -> BracketExpr:
        coeff = sign
        if self.peek().isdigit():
            value = self.integer()
            if value == 0:
                raise self.error("zero coefficient")
            coeff = sign * value
        node = self.factor()
        return node if coeff == 1 else Scaled(coeff, node)

    def expr(self) -> BracketExpr:
        terms = []
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        terms.append(self.term(sign))
        while True:
            c = self.peek()
            if c == "+":
                self.pos += 1
                terms.append(self.term(1))
            elif c == "-":
                self.pos += 1
                terms.append(self.term(-1))
            else:
                break
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def parse(text: str) -> BracketExpr:
    """Parse one bracket expression; raises RelationSyntaxError."""
    parser = _Parser(text)
    node = parser.expr()
    parser.skip_ws()
    if parser.pos != len(text):
        raise parser.error("trailing input")
    return node


def _term_text(node: BracketExpr) -> tuple[int, str]:
    """(sign, unsigned text) of a non-Sum node."""
    if isinstance(node, Scaled):
        mag = abs(node.coeff)
        body = _plain_text(node.node)
        text = body if mag == 1 else f"{mag}{body}"
        return (-1 if node.coeff < 0 else 1), text
    return 1, _plain_text(node)


def _plain_text(node: BracketExpr) -> str:
    if isinstance(node, Generator):
        return f"x{node.index}"
    if isinstance(node, Bracket):
        return f"[{to_text(node.left)},{to_text(node.right)}]"
    if isinstance(node, Scaled):
        sign, text = _term_text(node)
        return f"-{text}" if sign < 0 else text
    raise TypeError(f"unexpected node {node!r}")


def to_text(expr: BracketExpr) -> str:
    """Canonical text form; parse(to_text(e)) == e."""
    if isinstance(expr, Sum):
        parts = []
        for k, t in enumerate(expr.terms):
            sign, text = _term_text(t)
            if k == 0:
                parts.append(f"-{text}" if sign < 0 else text)
            else:
                parts.append(f"{'-' if sign < 0 else '+'} {text}")
        return " ".join(parts)
    return _plain_text(expr)


def multidegree(expr: BracketExpr, n: int) -> tuple[int, ...]:
    """Multidegree in x_1..x_n; raises MixedWeight on inhomogeneous sums
    and IndexOutOfRange on bad generator indices."""
    if isinstance(expr, Generator):
        if not 1 <= expr.index <= n:
            raise IndexOutOfRange(f"x{expr.index} outside x1..x{n}")
        return tuple(1 if k == expr.index - 1 else 0 for k in range(n))
    if isinstance(expr, Bracket):
        lw = multidegree(expr.left, n)
        rw = multidegree(expr.right, n)
        return tuple(a + b for a, b in zip(lw, rw))
    if isinstance(expr, Scaled):
        return multidegree(expr.node, n)
    if isinstance(expr, Sum):
        weights = {multidegree(t, n) for t in expr.terms}
        if len(weights) != 1:
            raise MixedWeight(f"terms of different weights: {sorted(weights)}")
        return next(iter(weights))
    raise TypeError(f"unexpected node {expr!r}")
