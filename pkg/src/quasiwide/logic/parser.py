"""Recursive-descent parser for the formula syntax.

    formula := "E" var formula | "A" var formula | "!" formula
             | "(" formula op formula ")" | atom
    op      := "&" | "|" | "->"
    atom    := NAME "(" term {"," term} ")" | NAME | term "=" term
             | "true" | "false"
    term    := var | "'" element "'"

``E``/``A`` directly followed by ``(`` is read as a relation symbol, so a
binary symbol named ``E`` works. A parenthesised group may chain one
operator, ``(a & b & c)``, which nests to the left.
"""

from __future__ import annotations

import re

from ..structures import Vocabulary
from .formula import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Const,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Var,
    implies,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<const>'[^'\s]+')
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:@\d+:\d+(?:,\d+:\d+)*)?)
  | (?P<punct>[()!&|=,])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, vocab: Vocabulary):
        self.toks = tokenize(text)
        self.i = 0
        self.vocab = vocab

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        kind, val, pos = self.peek()
        nxt = self.peek(1)
        if kind == "name" and val in ("E", "A") and nxt[0] == "name":
            self.i += 1
            var = self.take(kind="name")[1]
            body = self.formula()
            return Exists(var, body) if val == "E" else Forall(var, body)
        if val == "!":
            self.i += 1
            return Not(self.formula())
        if val == "(":
            self.i += 1
            left = self.formula()
            op = self.peek()
            if op[1] == ")":
                self.i += 1
                return left
            if op[1] not in ("&", "|", "->"):
                raise ParseError(f"expected '&', '|' or '->', found {op[1]!r}", op[2])
            while self.peek()[1] == op[1]:
                self.i += 1
                right = self.formula()
                if op[1] == "&":
                    left = And(left, right)
                elif op[1] == "|":
                    left = Or(left, right)
                else:
                    left = implies(left, right)
            close = self.peek()
            if close[1] in ("&", "|", "->"):
                raise ParseError("mixed operators need their own parentheses", close[2])
            self.take(")")
            return left
        return self.atom()

    def term(self):
        kind, val, pos = self.take()
        if kind == "name":
            return Var(val)
        if kind == "const":
            return Const(val[1:-1])
        raise ParseError(f"expected a variable, found {val or 'end of input'!r}", pos)

    def atom(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "name" and val == "true" and "true" not in self.vocab:
            self.i += 1
            return TOP
        if kind == "name" and val == "false" and "false" not in self.vocab:
            self.i += 1
            return BOTTOM
        if kind == "name" and self.peek(1)[1] == "(":
            self.i += 2
            args = [self.term()]
            while self.peek()[1] == ",":
                self.i += 1
                args.append(self.term())
            self.take(")")
            return self._check(Atom(val, tuple(args)), pos)
        if kind in ("name", "const") and self.peek(1)[1] == "=":
            left = self.term()
            self.take("=")
            right = self.term()
            return Eq(left, right)
        if kind == "name" and val in self.vocab:
            self.i += 1
            return self._check(Atom(val, ()), pos)
        if kind == "eof":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"cannot start a formula with {val!r}", pos)

    def _check(self, a: Atom, pos: int) -> Atom:
        if a.symbol not in self.vocab:
            raise ParseError(f"unknown relation symbol {a.symbol}", pos)
        want = self.vocab.arity[a.symbol]
        if want != len(a.args):
            raise ParseError(f"{a.symbol} has arity {want}, got {len(a.args)} arguments", pos)
        return a


def parse(text: str, vocab: Vocabulary) -> Formula:
    p = _Parser(text, vocab)
    phi = p.formula()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {val!r}", pos)
    return phi


def load_formula(path, vocab: Vocabulary) -> Formula:
    """One formula per file; lines starting with '#' are ignored."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if not ln.lstrip().startswith("#")]
    return parse(" ".join(lines), vocab)
