# -*- coding: utf-8 -*-
"""
Tokenizer and recursive-descent parser for the element text form.

Grammar (elements):
    expr   := term (('+' | '-') term)*
    term   := unary (('*' unary) | ('/' NUMBER))*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] NUMBER)?
    atom   := NUMBER | 'q' | NAME | '(' expr ')'

The same token stream is shared with the workspace DSL parser, which hands
element positions to ElementParser and resumes after them.
"""

import re
from fractions import Fraction
from typing import List, NamedTuple, Optional

from comodule_algebra import Element, FreeAlgebra
from errors import ParseError
from phase_ring import Laurent

TOKEN_SPEC = [
    ("COMMENT", r"#[^\n]*"),
    ("NUMBER", r"\d+"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("STRING", r'"[^"\n]*"'),
    ("OPTION", r"--[A-Za-z][A-Za-z0-9-]*"),
    ("ARROW", r"->"),
    ("OP", r"[-+*/^(),;:=\[\]{}@]"),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("MISMATCH", r"."),
]
TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_SPEC))


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, column: int = 1) -> List[Token]:
    """Split text into tokens; positions are 1-based and offset by (line, column)."""
    tokens = []
    line_start = -(column - 1)
    for match in TOKEN_RE.finditer(text):
        kind = match.lastgroup
        value = match.group()
        col = match.start() - line_start + 1
        if kind == "NEWLINE":
            line += 1
            line_start = match.end()
            continue
        if kind in ("SKIP", "COMMENT"):
            continue
        if kind == "MISMATCH":
            raise ParseError(f"unexpected character {value!r}", line, col)
        if kind == "STRING":
            value = value[1:-1]
        tokens.append(Token(kind, value, line, col))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


class TokenStream:
    """Cursor over a token list."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, value: str, kind: Optional[str] = None) -> bool:
        tok = self.peek()
        if kind is not None and tok.kind != kind:
            return False
        return tok.value == value and tok.kind in ("OP", "ARROW", "NAME", "OPTION")

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.pos += 1
            return True
        return False

    def expect(self, value: str) -> Token:
        tok = self.peek()
        if not self.at(value):
            found = tok.value or tok.kind
            raise ParseError(f"expected {value!r}, found {found!r}", tok.line, tok.column)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            found = tok.value or tok.kind
            raise ParseError(f"expected {what}, found {found!r}", tok.line, tok.column)
        return self.next()

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.column)


class ElementParser:
    """Evaluate the element grammar directly into Elements of one algebra."""

    def __init__(self, stream: TokenStream, algebra: FreeAlgebra):
        self.stream = stream
        self.algebra = algebra

    def parse_expr(self) -> Element:
        value = self.parse_term()
        while True:
            if self.stream.accept("+"):
                value = value + self.parse_term()
            elif self.stream.accept("-"):
                value = value - self.parse_term()
            else:
                return value

    def parse_term(self) -> Element:
        value = self.parse_unary()
        while True:
            if self.stream.accept("*"):
                value = value * self.parse_unary()
            elif self.stream.at("/"):
                slash = self.stream.next()
                tok = self.stream.expect_kind("NUMBER", "an integer divisor")
                divisor = int(tok.value)
                if divisor == 0:
                    raise self.stream.error("division by zero", slash)
                value = value.scale(Fraction(1, divisor))
            else:
                return value

    def parse_unary(self) -> Element:
        if self.stream.accept("-"):
            return -self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> Element:
        start = self.stream.peek()
        base = self.parse_atom()
        if not self.stream.accept("^"):
            return base
        negative = self.stream.accept("-")
        tok = self.stream.expect_kind("NUMBER", "an integer exponent")
        k = int(tok.value)
        if not negative:
            return base ** k
        return self._inverse(base, start) ** k

    def _inverse(self, base: Element, tok: Token) -> Element:
        alg = self.algebra
        if len(base) == 1:
            mono, c = next(iter(base.items()))
            if sum(mono) == 0 and c.is_unit():
                return alg.scalar(c.inverse())
            if sum(mono) == 1 and c.is_one():
                i = mono.index(1)
                g = alg.generators[i]
                companion = alg.companion_index(g.name)
                if companion is not None:
                    return alg.gen(companion)
                if g.inverse_of:
                    return alg.gen(g.inverse_of)
                raise self.stream.error(f"generator {g.name!r} is not invertible", tok)
        raise self.stream.error("negative powers need an invertible generator or a unit scalar", tok)

    def parse_atom(self) -> Element:
        tok = self.stream.peek()
        if tok.kind == "NUMBER":
            self.stream.next()
            return self.algebra.scalar(int(tok.value))
        if tok.kind == "NAME":
            self.stream.next()
            if tok.value == "q":
                return self.algebra.scalar(Laurent.q_power(1))
            if not self.algebra.has_generator(tok.value):
                raise ParseError(f"unknown generator {tok.value!r}", tok.line, tok.column)
            return self.algebra.gen(tok.value)
        if self.stream.accept("("):
            value = self.parse_expr()
            self.stream.expect(")")
            return value
        found = tok.value or tok.kind
        raise ParseError(f"expected a number, 'q', a generator or '(', found {found!r}",
                         tok.line, tok.column)


def parse_element_text(algebra: FreeAlgebra, text: str, line: int = 1, column: int = 1) -> Element:
    stream = TokenStream(tokenize(text, line, column))
    value = ElementParser(stream, algebra).parse_expr()
    tok = stream.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected {tok.value!r} after element", tok.line, tok.column)
    return value
