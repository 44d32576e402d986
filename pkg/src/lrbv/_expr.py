"""Recursive-descent parser shared by the polynomial and multivector text forms.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | IDENT | 'e' '[' INT (',' INT)* ']' | '(' expr ')'

Implicit multiplication is rejected. The parser does not know what the values
are: atoms are built by callbacks and combined with ``+``, ``-``, ``*`` and
``**``, so the same code parses into polynomials or multivectors.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, NamedTuple


class ParseError(ValueError):
    """Syntax or name error in a textual expression; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class Token(NamedTuple):
    kind: str
    value: str
    pos: int


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()\[\],])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExprParser:
    """Parse ``text`` using the supplied atom constructors.

    ``const(Fraction)`` builds scalars, ``var(name, pos)`` builds named atoms
    (and raises ``ParseError`` for unknown names), ``basis(indices, pos)``
    builds ``e[...]`` atoms; when ``basis`` is None the ``e[`` form is a
    syntax error.
    """

    def __init__(
        self,
        text: str,
        const: Callable[[Fraction], object],
        var: Callable[[str, int], object],
        basis: Callable[[list[int], int], object] | None = None,
    ):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.const = const
        self.var = var
        self.basis = basis

    def parse(self):
        if self.peek().kind == "end":
            raise ParseError("empty expression", 0, self.text)
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected token {tok.value!r}", tok)
        return value

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Token) -> ParseError:
        return ParseError(message, tok.pos, self.text)

    def expect(self, value: str) -> Token:
        tok = self.next()
        if tok.value != value or tok.kind not in ("op",):
            raise self.error(f"expected {value!r}, got {tok.value or 'end of input'!r}", tok)
        return tok

    def expr(self):
        value = self.term()
        while self.peek().value in ("+", "-") and self.peek().kind == "op":
            op = self.next().value
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.value == "*":
                self.next()
                value = value * self.unary()
            elif tok.kind in ("int", "ident") or tok.value == "(":
                raise self.error("implicit multiplication is not allowed", tok)
            else:
                return value

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.value in ("+", "-"):
            self.next()
            value = self.unary()
            return -value if tok.value == "-" else value
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.value == "^":
            self.next()
            exp_tok = self.next()
            if exp_tok.kind != "int":
                raise self.error("exponent must be a non-negative integer literal", exp_tok)
            return base ** int(exp_tok.value)
        return base

    def atom(self):
        tok = self.next()
        if tok.kind == "int":
            value = Fraction(int(tok.value))
            nxt = self.peek()
            if nxt.kind == "op" and nxt.value == "/":
                self.next()
                den = self.next()
                if den.kind != "int":
                    raise self.error("denominator must be an integer literal", den)
                if int(den.value) == 0:
                    raise self.error("zero denominator", den)
                value = Fraction(int(tok.value), int(den.value))
            return self.const(value)
        if tok.kind == "ident":
            nxt = self.peek()
            if self.basis is not None and tok.value == "e" and nxt.value == "[":
                return self.basis_atom(tok)
            return self.var(tok.value, tok.pos)
        if tok.kind == "op" and tok.value == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise self.error(f"unexpected token {tok.value or 'end of input'!r}", tok)

    def basis_atom(self, tok: Token):
        self.expect("[")
        indices = []
        while True:
            num = self.next()
            if num.kind != "int":
                raise self.error("basis index must be an integer literal", num)
            indices.append(int(num.value))
            sep = self.next()
            if sep.value == "]":
                break
            if sep.value != ",":
                raise self.error("expected ',' or ']'", sep)
        return self.basis(indices, tok.pos)
