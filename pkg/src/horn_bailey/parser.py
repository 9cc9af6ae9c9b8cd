"""Recursive-descent parser for the fixture expression grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ['-'] base ['^' uint]
    base   := integer | symbol | '(' expr ')'

Whitespace (including newlines) is insignificant.  A leading minus binds
looser than ``^``, so ``-x^2`` is ``-(x^2)``.
"""
from __future__ import annotations

import re
from typing import List, Tuple, Union

from .exact import MultiPoly, Q, RationalFunction, UnknownSymbolError, symbol

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)


_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")


class ExpressionSyntaxError(ValueError):
    def __init__(self, message, text, offset):
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col} (offset {offset})")
        self.offset = offset
        self.line = line
        self.column = col


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("sym", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "+-*/^()":
                raise ExpressionSyntaxError(f"unexpected character {ch!r}", text, m.start(3))
            tokens.append(("op", ch, m.start(3)))
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

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExpressionSyntaxError(msg, self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()
            rhs = self.factor()
            if op[1] == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ExpressionSyntaxError("division by zero", self.text, op[2])
                value = value / rhs
        return value

    def factor(self):
        negate = False
        if self.peek()[:2] == ("op", "-"):
            self.take()
            negate = True
        value = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                self.error("expected unsigned integer exponent")
            self.take()
            value = value ** int(tok[1])
        return -value if negate else value

    def base(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return RationalFunction(MultiPoly.const(int(tok[1])))
        if tok[0] == "sym":
            self.take()
            try:
                return RationalFunction(MultiPoly.var(symbol(tok[1])))
            except UnknownSymbolError:
                raise ExpressionSyntaxError(f"unknown symbol {tok[1]!r}", self.text, tok[2]) from None
        if tok[:2] == ("op", "("):
            self.take()
            value = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return value
        self.error("expected integer, symbol or '('")


def parse_ratfunc(text: str) -> RationalFunction:
    return _Parser(text).parse()


def parse_expression(text: str) -> Union[MultiPoly, RationalFunction]:
    """Parse text; a polynomial comes back as MultiPoly, anything else as
    an (unreduced) RationalFunction."""
    rf = parse_ratfunc(text)
    if rf.den.is_constant():
        return rf.num * (1 / rf.den.constant_value())
    return rf


def parse_rational(text: str):
    """Rational literal such as ``-3/7`` or ``5``; decimals are refused."""
    if not _RATIONAL.fullmatch(text.strip()):
        raise ValueError(f"not a rational literal: {text!r}")
    try:
        return Q(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def serialize(value) -> str:
    return str(value)
