"""Single-variable expression grammar: tokenizer, recursive-descent parser, printer.

The grammar is LL(1); precedence from loosest to tightest is `+ -`, `* /`,
unary minus, `^` (right-associative). `docs/grammar.md` is the normative
description, including the exact floating-point evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import ParseError, UnknownFunctionError

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "abs")

NAMED_CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Variable:
    pass


@dataclass(frozen=True)
class Unary:
    op: str  # only "-"
    child: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    child: "Node"


Node = Union[Constant, Variable, Unary, Binary, Call]

# Alias used in signatures throughout the package.
ExprAst = Node

_PUNCT = "+-*/^()"


def _tokenize(source: str):
    """Yield (kind, text, offset) tokens; kinds: num, ident, punct, end."""
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c in _PUNCT:
            tokens.append(("punct", c, i))
            i += 1
            continue
        if c.isdigit():
            start = i
            while i < n and source[i].isdigit():
                i += 1
            if i < n and source[i] == ".":
                i += 1
                if i >= n or not source[i].isdigit():
                    raise ParseError("expected digits after decimal point", i)
                while i < n and source[i].isdigit():
                    i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            tokens.append(("num", source[start:i], start))
            continue
        if c.isalpha() or c == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(("ident", source[start:i], start))
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


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

    def fail(self, expected: str):
        kind, text, offset = self.peek()
        got = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"expected {expected}, got {got}", offset)

    def expect_punct(self, char: str, expected: str):
        kind, text, offset = self.peek()
        if kind == "punct" and text == char:
            return self.advance()
        self.fail(expected)

    def parse(self) -> Node:
        node = self.expr()
        kind, text, offset = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected input {text!r} after expression", offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "punct" and text in "+-":
                self.advance()
                node = Binary(text, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "punct" and text in "*/":
                self.advance()
                node = Binary(text, node, self.unary())
            else:
                return node

    def unary(self) -> Node:
        kind, text, _ = self.peek()
        if kind == "punct" and text == "-":
            self.advance()
            return Unary("-", self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "punct" and text == "^":
            self.advance()
            # right-associative; exponent may carry a unary minus
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Node:
        kind, text, offset = self.peek()
        if kind == "num":
            self.advance()
            return Constant(float(text))
        if kind == "ident":
            self.advance()
            nxt_kind, nxt_text, _ = self.peek()
            if nxt_kind == "punct" and nxt_text == "(":
                if text not in FUNCTIONS:
                    raise UnknownFunctionError(text, offset)
                self.advance()
                arg = self.expr()
                self.expect_punct(")", "')'")
                return Call(text, arg)
            if text == "x":
                return Variable()
            if text in NAMED_CONSTANTS:
                return Constant(NAMED_CONSTANTS[text])
            raise ParseError(f"unknown name {text!r}", offset)
        if kind == "punct" and text == "(":
            self.advance()
            node = self.expr()
            self.expect_punct(")", "')'")
            return node
        self.fail("a number, name, '(' or '-'")


def parse(source: str) -> Node:
    """Parse expression source into an immutable AST.

    Raises ParseError (with the byte offset of the problem) or
    UnknownFunctionError for an unsupported call target.
    """
    if not source or source.isspace():
        raise ParseError("empty expression", 0)
    return _Parser(source).parse()


def to_source(node: Node) -> str:
    """Print a fully parenthesized form; parse(to_source(t)) == t."""
    if isinstance(node, Constant):
        return repr(node.value)
    if isinstance(node, Variable):
        return "x"
    if isinstance(node, Unary):
        return f"(-{to_source(node.child)})"
    if isinstance(node, Binary):
        return f"({to_source(node.left)}{node.op}{to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.child)})"
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(ast: Node, x: float) -> float:
    """IEEE double evaluation of the expression at x.

    Domain violations (log of non-positive, sqrt of negative, 0^negative,
    division by zero, non-finite results) raise DomainError rather than
    returning NaN or infinity.
    """
    from .backend import eval_value
    from .program import compile_cached

    return eval_value(compile_cached(ast), x)
