"""Minimal arithmetic expression parser for command-line targets.

Grammar (recursive descent, ``^`` is right-associative and binds tighter
than unary minus applied to it from the left):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 'x' | NAME '(' expr ')' | '(' expr ')'

Supported function names: exp, log, sin, cos.  The compiled callable accepts
floats or numpy arrays.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import DomainError

__all__ = ["compile_expression"]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?|(?P<name>[A-Za-z_]+)|(?P<op>[-+*/^()]))"
)

_FUNCS = {"exp": np.exp, "log": np.log, "sin": np.sin, "cos": np.cos}


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DomainError(f"cannot parse expression at ...{text[pos:pos+12]!r}")
        if m.group("num") is not None:
            tokens.append(("num", float(m.group(0))))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise DomainError(f"unexpected token {tok[1]!r} in expression")
        self.pos += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = (lambda l, r: lambda x: l(x) + r(x))(node, rhs) if op == "+" else \
                   (lambda l, r: lambda x: l(x) - r(x))(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            op = self.take()[1]
            rhs = self.factor()
            node = (lambda l, r: lambda x: l(x) * r(x))(node, rhs) if op == "*" else \
                   (lambda l, r: lambda x: l(x) / r(x))(node, rhs)
        return node

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.factor()
            return lambda x: -inner(x)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            expo = self.factor()
            return lambda x: np.power(base(x), expo(x))
        return base

    def atom(self):
        kind, value = self.peek()
        if kind == "num":
            self.take()
            return lambda x, v=value: v * np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else v
        if kind == "name":
            self.take()
            if value == "x":
                return lambda x: np.asarray(x, dtype=float) if np.ndim(x) else float(x)
            if value in _FUNCS:
                self.take("op", "(")
                inner = self.expr()
                self.take("op", ")")
                fn = _FUNCS[value]
                return lambda x: fn(inner(x))
            raise DomainError(f"unknown name {value!r} in expression")
        if (kind, value) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise DomainError(f"unexpected token {value!r} in expression")


def compile_expression(text: str):
    """Compile ``text`` into a callable of one variable ``x``."""
    tokens = _tokenize(text)
    if not tokens:
        raise DomainError("empty expression")
    parser = _Parser(tokens)
    fn = parser.expr()
    if parser.pos != len(tokens):
        raise DomainError(f"trailing tokens in expression starting at {parser.peek()[1]!r}")
    return fn
