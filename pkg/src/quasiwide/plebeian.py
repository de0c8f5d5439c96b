"""Companion structures that forget k named elements, and the matching
rank-preserving formula translation.

The deleted elements are addressed as constants ``'1'..'k'`` (their
positions in the deletion list). A derived symbol ``R@i1:c1,i2:c2`` holds
the tuples of ``R`` whose positions ``i1, i2, ...`` carried the deleted
elements ``c1, c2, ...``, with those positions removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .logic.evaluate import evaluate
from .logic.formula import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Const,
    Eq,
    Exists,
    Falsum,
    Forall,
    Formula,
    Not,
    Or,
    Var,
    Verum,
    conj,
    disj,
    quantifier_rank,
    substitute,
)
from .structures import Element, Structure, UnknownElement, Vocabulary, gaifman_graph


@dataclass(frozen=True)
class PositionMap:
    symbol: str
    mapping: tuple[tuple[int, int], ...]  # (1-based position, 1-based constant)

    @property
    def name(self) -> str:
        return self.symbol + "@" + ",".join(f"{p}:{c}" for p, c in self.mapping)


@dataclass(frozen=True)
class CompanionVocabulary:
    base: Vocabulary
    k: int
    derived: tuple[PositionMap, ...]
    vocab: Vocabulary

    def lookup(self, symbol: str, mapping) -> str:
        return PositionMap(symbol, tuple(mapping)).name


def _position_maps(symbol: str, arity: int, k: int):
    for size in range(1, arity + 1):
        for dom in combinations(range(1, arity + 1), size):
            for img in product(range(1, k + 1), repeat=size):
                yield PositionMap(symbol, tuple(zip(dom, img)))


def companion_vocabulary(tau: Vocabulary, k: int) -> CompanionVocabulary:
    if k < 0:
        raise ValueError("k must be nonnegative")
    derived = []
    for name, arity in tau.symbols:
        derived.extend(_position_maps(name, arity, k))
    symbols = list(tau.symbols)
    for pm in derived:
        symbols.append((pm.name, tau.arity[pm.symbol] - len(pm.mapping)))
    return CompanionVocabulary(tau, k, tuple(derived), Vocabulary(tuple(symbols)))


def companion_structure(a: Structure, deleted: Sequence[Element]) -> Structure:
    """The companion of ``a`` with ``deleted`` removed from the universe."""
    deleted = [str(x) for x in deleted]
    if len(set(deleted)) != len(deleted):
        raise ValueError(f"repeated element in deletion list {deleted}")
    members = set(a.universe)
    for x in deleted:
        if x not in members:
            raise UnknownElement(x)
    cv = companion_vocabulary(a.vocab, len(deleted))
    slot = {x: i + 1 for i, x in enumerate(deleted)}
    rels: dict[str, list] = {name: [] for name in cv.vocab.names}
    for name in a.vocab.names:
        for t in a.relations[name]:
            mu = tuple((p + 1, slot[x]) for p, x in enumerate(t) if x in slot)
            rest = tuple(x for x in t if x not in slot)
            target = PositionMap(name, mu).name if mu else name
            rels[target].append(rest)
    universe = [x for x in a.universe if x not in slot]
    return Structure(cv.vocab, universe, rels)


def translate_formula(phi: Formula, k: int, tau: Vocabulary) -> Formula:
    """Formula over the companion vocabulary, true in the companion exactly
    when ``phi`` is true in the original structure."""
    cv = companion_vocabulary(tau, k)
    valid = {str(i) for i in range(1, k + 1)}

    def const_index(t) -> int | None:
        if isinstance(t, Const):
            if t.value not in valid:
                raise ValueError(f"constant {t.value!r} is not one of the deleted slots 1..{k}")
            return int(t.value)
        return None

    def go(node: Formula) -> Formula:
        if isinstance(node, (Verum, Falsum)):
            return node
        if isinstance(node, Atom):
            mu = []
            rest = []
            for p, t in enumerate(node.args):
                c = const_index(t)
                if c is None:
                    rest.append(t)
                else:
                    mu.append((p + 1, c))
            if not mu:
                return node
            return Atom(cv.lookup(node.symbol, mu), tuple(rest))
        if isinstance(node, Eq):
            cl, cr = const_index(node.left), const_index(node.right)
            if cl is None and cr is None:
                return node
            if cl is not None and cr is not None:
                return TOP if cl == cr else BOTTOM
            # a surviving element never equals a deleted one
            return BOTTOM
        if isinstance(node, Not):
            return Not(go(node.body))
        if isinstance(node, (And, Or)):
            return type(node)(go(node.left), go(node.right))
        if isinstance(node, (Exists, Forall)):
            inst = [go(substitute(node.body, {node.var: Const(str(i))})) for i in range(1, k + 1)]
            inner = type(node)(node.var, go(node.body))
            return disj([inner] + inst) if isinstance(node, Exists) else conj([inner] + inst)
        raise TypeError(f"not a formula node: {node!r}")

    return go(phi)


@dataclass(frozen=True)
class CompanionReport:
    original: bool
    companion: bool
    gaifman_ok: bool
    rank_ok: bool

    @property
    def agree(self) -> bool:
        return self.original == self.companion

    @property
    def ok(self) -> bool:
        return self.agree and self.gaifman_ok and self.rank_ok


def gaifman_matches(a: Structure, p: Structure, deleted: Sequence[Element]) -> bool:
    """Gaifman graph of the companion equals the original one restricted to
    the surviving elements (identity on elements)."""
    return gaifman_graph(p) == gaifman_graph(a).without(deleted)


def verify_companion(a: Structure, deleted: Sequence[Element], phi: Formula, asg=None) -> CompanionReport:
    deleted = [str(x) for x in deleted]
    p = companion_structure(a, deleted)
    hat = translate_formula(phi, len(deleted), a.vocab)
    return CompanionReport(
        original=evaluate(a, phi, asg),
        companion=evaluate(p, hat, asg),
        gaifman_ok=gaifman_matches(a, p, deleted),
        rank_ok=quantifier_rank(hat) == quantifier_rank(phi),
    )
