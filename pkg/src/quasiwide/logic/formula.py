"""First-order formula AST.

Nodes are frozen, hashable dataclasses. Binary connectives are binary;
use :func:`conj` / :func:`disj` for n-ary folds. ``Verum`` and ``Falsum``
stand for the empty conjunction and the empty disjunction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Union


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    """A named element; only the plebeian translation creates these."""

    value: str

    def __str__(self):
        return f"'{self.value}'"


Term = Union[Var, Const]


@dataclass(frozen=True, slots=True)
class Atom:
    symbol: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True, slots=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Verum:
    pass


@dataclass(frozen=True, slots=True)
class Falsum:
    pass


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Atom, Eq, Verum, Falsum, Not, And, Or, Exists, Forall]
TOP = Verum()
BOTTOM = Falsum()


def atom(symbol: str, *names: str) -> Atom:
    return Atom(symbol, tuple(Var(n) for n in names))


def eq(x: str, y: str) -> Eq:
    return Eq(Var(x), Var(y))


def conj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return BOTTOM
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def exists_many(names: Iterable[str], body: Formula) -> Formula:
    for n in reversed(list(names)):
        body = Exists(n, body)
    return body


def forall_many(names: Iterable[str], body: Formula) -> Formula:
    for n in reversed(list(names)):
        body = Forall(n, body)
    return body


# ---------------------------------------------------------------------------
# structural queries


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (Not, Exists, Forall)):
        return (phi.body,)
    if isinstance(phi, (And, Or)):
        return (phi.left, phi.right)
    return ()


def terms_of(phi: Formula) -> tuple[Term, ...]:
    if isinstance(phi, Atom):
        return phi.args
    if isinstance(phi, Eq):
        return (phi.left, phi.right)
    return ()


@lru_cache(maxsize=None)
def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Atom, Eq)):
        return frozenset(t.name for t in terms_of(phi) if isinstance(t, Var))
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    out = frozenset()
    for c in children(phi):
        out |= free_vars(c)
    return out


def all_vars(phi: Formula) -> set[str]:
    out = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, (Exists, Forall)):
            out.add(node.var)
        out.update(t.name for t in terms_of(node) if isinstance(t, Var))
        stack.extend(children(node))
    return out


def constants(phi: Formula) -> set[str]:
    out = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        out.update(t.value for t in terms_of(node) if isinstance(t, Const))
        stack.extend(children(node))
    return out


def symbols(phi: Formula) -> set[str]:
    out = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            out.add(node.symbol)
        stack.extend(children(node))
    return out


@lru_cache(maxsize=None)
def quantifier_rank(phi: Formula) -> int:
    if isinstance(phi, (Exists, Forall)):
        return 1 + quantifier_rank(phi.body)
    return max((quantifier_rank(c) for c in children(phi)), default=0)


def is_existential_positive(phi: Formula) -> bool:
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, (Not, Forall)):
            return False
        stack.extend(children(node))
    return True


def size(phi: Formula) -> int:
    return 1 + sum(size(c) for c in children(phi))


def check_arities(phi: Formula, vocab) -> None:
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            if node.symbol not in vocab:
                raise ValueError(f"unknown symbol {node.symbol}")
            if len(node.args) != vocab.arity[node.symbol]:
                raise ValueError(
                    f"{node.symbol} has arity {vocab.arity[node.symbol]}, used with {len(node.args)}"
                )
        stack.extend(children(node))


# ---------------------------------------------------------------------------
# renaming and substitution


class FreshNames:
    """Generates variable names that avoid a given set."""

    def __init__(self, avoid: Iterable[str] = (), stem: str = "v"):
        self.avoid = set(avoid)
        self.stem = stem
        self._count = itertools.count(1)

    def __call__(self, stem: str | None = None) -> str:
        stem = stem or self.stem
        while True:
            name = f"{stem}{next(self._count)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def _map_terms(phi: Formula, fn) -> Formula:
    if isinstance(phi, Atom):
        return Atom(phi.symbol, tuple(fn(t) for t in phi.args))
    return Eq(fn(phi.left), fn(phi.right))


def substitute(phi: Formula, mapping: Mapping[str, Term], fresh: FreshNames | None = None) -> Formula:
    """Capture-avoiding substitution of free variables by terms."""
    if not mapping:
        return phi
    if fresh is None:
        avoid = all_vars(phi) | {t.name for t in mapping.values() if isinstance(t, Var)}
        fresh = FreshNames(avoid)
    incoming = {t.name for t in mapping.values() if isinstance(t, Var)}

    def go(node: Formula, sub: dict[str, Term]) -> Formula:
        if not sub:
            return node
        if isinstance(node, (Atom, Eq)):
            return _map_terms(node, lambda t: sub.get(t.name, t) if isinstance(t, Var) else t)
        if isinstance(node, (Verum, Falsum)):
            return node
        if isinstance(node, Not):
            return Not(go(node.body, sub))
        if isinstance(node, (And, Or)):
            return type(node)(go(node.left, sub), go(node.right, sub))
        inner = {k: v for k, v in sub.items() if k != node.var}
        if not inner:
            return node
        var = node.var
        if var in incoming and any(k in free_vars(node.body) for k in inner):
            new = fresh(var.rstrip("0123456789") or "v")
            inner[var] = Var(new)
            var = new
        return type(node)(var, go(node.body, inner))

    return go(phi, dict(mapping))


def rename_free(phi: Formula, mapping: Mapping[str, str]) -> Formula:
    return substitute(phi, {k: Var(v) for k, v in mapping.items()})


def normalize(phi: Formula, avoid: Iterable[str] = ()) -> Formula:
    """Alpha-rename binders so that no variable is both free and bound, no
    binder shadows another, and no binder uses a name in ``avoid``."""
    taken = set(free_vars(phi)) | set(avoid)
    fresh = FreshNames(all_vars(phi) | taken)

    def go(node: Formula, ren: dict[str, str]) -> Formula:
        if isinstance(node, (Atom, Eq)):
            return _map_terms(node, lambda t: Var(ren.get(t.name, t.name)) if isinstance(t, Var) else t)
        if isinstance(node, (Verum, Falsum)):
            return node
        if isinstance(node, Not):
            return Not(go(node.body, ren))
        if isinstance(node, (And, Or)):
            return type(node)(go(node.left, ren), go(node.right, ren))
        var = node.var
        if var in taken:
            var = fresh(var.rstrip("0123456789") or "v")
        taken.add(var)
        return type(node)(var, go(node.body, {**ren, node.var: var}))

    return go(phi, {})


def is_well_named(phi: Formula) -> bool:
    seen = set(free_vars(phi))
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, (Exists, Forall)):
            if node.var in seen:
                return False
            seen.add(node.var)
        stack.extend(children(node))
    return True


# ---------------------------------------------------------------------------
# printing (inverse of logic.parser.parse)


def _term(t: Term) -> str:
    return str(t)


def to_text(phi: Formula) -> str:
    parts: list[str] = []

    def go(node):
        if isinstance(node, Atom):
            if node.args:
                parts.append(f"{node.symbol}({','.join(_term(t) for t in node.args)})")
            else:
                parts.append(node.symbol)
        elif isinstance(node, Eq):
            parts.append(f"{_term(node.left)} = {_term(node.right)}")
        elif isinstance(node, Verum):
            parts.append("true")
        elif isinstance(node, Falsum):
            parts.append("false")
        elif isinstance(node, Not):
            parts.append("!")
            go(node.body)
        elif isinstance(node, (And, Or)):
            parts.append("(")
            go(node.left)
            parts.append(" & " if isinstance(node, And) else " | ")
            go(node.right)
            parts.append(")")
        elif isinstance(node, Exists):
            parts.append(f"E {node.var} ")
            go(node.body)
        elif isinstance(node, Forall):
            parts.append(f"A {node.var} ")
            go(node.body)
        else:  # pragma: no cover
            raise TypeError(node)

    go(phi)
    return "".join(parts)
