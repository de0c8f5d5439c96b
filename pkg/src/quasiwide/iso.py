"""Brute-force canonical forms for small structures."""

from __future__ import annotations

from itertools import permutations, product

from .structures import Structure


class SizeCapExceeded(ValueError):
    pass


def _invariant(a: Structure, e) -> tuple:
    sig = []
    for name, arity in a.vocab.symbols:
        counts = [0] * arity
        for t in a.relations[name]:
            for p, x in enumerate(t):
                if x == e:
                    counts[p] += 1
        sig.append(tuple(counts))
    return tuple(sig)


def canonical_form(a: Structure, cap: int = 8) -> tuple[tuple, list]:
    """``(key, order)``: isomorphic structures share ``key``; ``order``
    lists the elements in the canonical numbering.

    Elements are grouped by a degree invariant and only permutations
    inside groups are tried, so the worst case is ``n!``; structures with
    more than ``cap`` elements are refused.
    """
    n = len(a.universe)
    if n > cap:
        raise SizeCapExceeded(f"canonical form is limited to {cap} elements, got {n}")
    inv = {e: _invariant(a, e) for e in a.universe}
    cells: dict[tuple, list] = {}
    for e in a.universe:
        cells.setdefault(inv[e], []).append(e)
    keys = sorted(cells)
    facts = list(a.tuples())
    best = None
    best_order = None
    for parts in product(*(permutations(cells[k]) for k in keys)):
        order = [e for part in parts for e in part]
        num = {e: i for i, e in enumerate(order)}
        enc = tuple(sorted((name, tuple(num[x] for x in t)) for name, t in facts))
        if best is None or enc < best:
            best, best_order = enc, order
    key = (str(a.vocab), tuple(inv[e] for e in best_order or []), best or ())
    return key, list(best_order or [])


def canonical_structure(a: Structure, cap: int = 8) -> Structure:
    """Copy of ``a`` relabelled ``1..n`` in canonical order."""
    _, order = canonical_form(a, cap)
    num = {e: str(i + 1) for i, e in enumerate(order)}
    rels = {n: [tuple(num[x] for x in t) for t in ts] for n, ts in a.relations.items()}
    return Structure(a.vocab, [num[e] for e in order], rels)


def isomorphic(a: Structure, b: Structure, cap: int = 8) -> bool:
    if a.vocab != b.vocab or len(a.universe) != len(b.universe) or a.fact_count() != b.fact_count():
        return False
    return canonical_form(a, cap)[0] == canonical_form(b, cap)[0]
