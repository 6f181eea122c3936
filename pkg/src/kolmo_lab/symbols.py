"""Tiny closed grammar for disk symbols on the command line.

    expr  := term (('+' | '-') term)*
    term  := unary ('*' unary)*
    unary := '-' unary | atom
    atom  := NUMBER | 'z' | 'conj(z)' | '|z|^2' | '(' expr ')'

Numbers are real literals; the atoms cover constants, z, conj(z) and
|z|^2, so expressions like ``1 - |z|^2`` or ``0.5*z*conj(z)`` stay inside
bounded polynomial symbols in z and conj(z).  Parse failures carry the
character offset for error reporting.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import ParameterError
from .operators import SymbolField

__all__ = ["SymbolParseError", "parse_symbol"]


class SymbolParseError(ParameterError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?|\.\d+)"
    r"|(?P<conj>conj\(\s*z\s*\))"
    r"|(?P<abs2>\|z\|\^2)"
    r"|(?P<z>z)"
    r"|(?P<op>[+\-*()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise SymbolParseError(
                f"unrecognized input {stripped[:8]!r}", len(text) - len(stripped)
            )
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise SymbolParseError(f"expected {op!r}", offset)
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise SymbolParseError(f"unexpected {value!r}", offset)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                node = ("add" if value == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                node = ("mul", node, self.unary())
            else:
                return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return ("neg", self.unary())
        return self.atom()

    def atom(self):
        kind, value, offset = self.advance()
        if kind == "number":
            return ("const", float(value))
        if kind == "z":
            return ("z",)
        if kind == "conj":
            return ("conj",)
        if kind == "abs2":
            return ("abs2",)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise SymbolParseError("expected a value", offset)


def _evaluate(node, z):
    op = node[0]
    if op == "const":
        return np.full(np.shape(z), node[1], dtype=complex)
    if op == "z":
        return np.asarray(z, dtype=complex)
    if op == "conj":
        return np.conj(np.asarray(z, dtype=complex))
    if op == "abs2":
        return np.abs(np.asarray(z, dtype=complex)) ** 2 + 0j
    if op == "neg":
        return -_evaluate(node[1], z)
    if op == "add":
        return _evaluate(node[1], z) + _evaluate(node[2], z)
    if op == "sub":
        return _evaluate(node[1], z) - _evaluate(node[2], z)
    if op == "mul":
        return _evaluate(node[1], z) * _evaluate(node[2], z)
    raise ParameterError(f"unknown node {op!r}")


def parse_symbol(text):
    """Parse an expression into a symbol field (raises with offsets)."""
    ast = _Parser(text).parse()
    return SymbolField(func=lambda z: _evaluate(ast, z), description=text.strip())
