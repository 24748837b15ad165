"""Polynomial expressions in x, y (aliases x1, x2).

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (['*' | '/'] unary)*      # '*' may be omitted
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | VAR | '(' expr ')'

Division is only allowed by a nonzero constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .poly_core import ONE, CommPoly, QQ, RingContext, R_CTX

ALIASES = {"x": "x1", "y": "x2", "x1": "x1", "x2": "x2"}

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, msg: str, text: str, pos: int, line: int = 1):
        self.line = line
        self.column = pos + 1
        super().__init__(f"line {line}, column {self.column}: {msg}")


class UnknownVariable(ParseError):
    pass


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str, line: int) -> list[_Tok]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos, line)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    out.append(_Tok("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str, ctx: RingContext, aliases: dict, line: int):
        self.text = text
        self.ctx = ctx
        self.aliases = aliases
        self.line = line
        self.toks = _tokenize(text, line)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok.pos, self.line)

    def parse(self) -> CommPoly:
        if self.peek().kind == "end":
            self.error("empty expression")
        p = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected {self.peek().value!r}")
        return p

    def expr(self) -> CommPoly:
        p = self.term()
        while self.peek().value in ("+", "-") and self.peek().kind == "op":
            op = self.take().value
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def _starts_factor(self, t: _Tok) -> bool:
        return t.kind in ("num", "name") or (t.kind == "op" and t.value == "(")

    def term(self) -> CommPoly:
        p = self.unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.value == "*":
                self.take()
                p = p * self.unary()
            elif t.kind == "op" and t.value == "/":
                self.take()
                q = self.unary()
                if q.is_zero():
                    self.error("division by zero", t)
                if q.total_degree() != 0:
                    self.error("division is only allowed by constants", t)
                p = p * (ONE / q.coefficient((0,) * self.ctx.nvars))
            elif self._starts_factor(t):
                p = p * self.power()
            else:
                return p

    def unary(self) -> CommPoly:
        t = self.peek()
        if t.kind == "op" and t.value in ("+", "-"):
            self.take()
            p = self.unary()
            return -p if t.value == "-" else p
        return self.power()

    def power(self) -> CommPoly:
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.value == "^":
            self.take()
            e = self.peek()
            if e.kind != "num":
                self.error("exponent must be a nonnegative integer")
            self.take()
            return base ** int(e.value)
        return base

    def atom(self) -> CommPoly:
        t = self.take()
        if t.kind == "num":
            return CommPoly.constant(self.ctx, QQ(int(t.value)))
        if t.kind == "name":
            name = self.aliases.get(t.value, t.value)
            if name not in self.ctx.names:
                raise UnknownVariable(f"unknown variable {t.value}", self.text, t.pos, self.line)
            return self.ctx.gen(name)
        if t.kind == "op" and t.value == "(":
            p = self.expr()
            close = self.peek()
            if not (close.kind == "op" and close.value == ")"):
                self.error("expected ')'")
            self.take()
            return p
        if t.kind == "end":
            self.error("unexpected end of input", t)
        self.error(f"unexpected {t.value!r}", t)


def parse_polynomial(text: str, ctx: RingContext = R_CTX, aliases: dict | None = None,
                     line: int = 1) -> CommPoly:
    """Parse ``text`` into a polynomial of ``ctx`` (default Q[x1, x2])."""
    if aliases is None:
        aliases = ALIASES if ctx == R_CTX else {n: n for n in ctx.names}
    return _Parser(text, ctx, aliases, line).parse()


def read_ideal_file(text: str) -> list[CommPoly]:
    """Three non-empty lines (after stripping ``#`` comments), one polynomial each."""
    polys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        polys.append(parse_polynomial(body, line=lineno))
    if len(polys) != 3:
        raise ValueError(f"an ideal file must contain exactly three polynomials, found {len(polys)}")
    return polys


def format_xy(p: CommPoly) -> str:
    """Render with the surface names x, y (and T1..T3 in S)."""
    names = tuple({"x1": "x", "x2": "y"}.get(n, n) for n in p.ctx.names)
    return p.to_str(names)
