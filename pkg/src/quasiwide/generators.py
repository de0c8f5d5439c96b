"""Deterministic generators of small structures, graphs and formulas."""

from __future__ import annotations

import random
from itertools import combinations, product

import networkx as nx

from .logic.formula import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Var,
)
from .structures import Graph, Structure, Vocabulary, from_networkx


def all_structures(vocab: Vocabulary, n: int):
    """Every structure on universe ``0..n-1``."""
    u = [str(i) for i in range(n)]
    slots = [(name, t) for name, ar in vocab.symbols for t in product(u, repeat=ar)]
    for bits in range(1 << len(slots)):
        rels: dict[str, list] = {name: [] for name in vocab.names}
        for i, (name, t) in enumerate(slots):
            if (bits >> i) & 1:
                rels[name].append(t)
        yield Structure(vocab, u, rels, check=False)


def random_structure(rng: random.Random, vocab: Vocabulary, n: int, p: float = 0.3) -> Structure:
    u = [str(i) for i in range(n)]
    rels = {
        name: [t for t in product(u, repeat=ar) if rng.random() < p] for name, ar in vocab.symbols
    }
    return Structure(vocab, u, rels, check=False)


def random_formula(
    rng: random.Random,
    vocab: Vocabulary,
    rank: int,
    free: tuple[str, ...] = (),
    *,
    ep: bool = False,
    names: tuple[str, ...] = ("x", "y", "z"),
    max_size: int = 12,
) -> Formula:
    """Random formula of quantifier rank at most ``rank`` whose free
    variables are among ``free``. Binder names come from a small pool, so
    shadowing happens. With ``ep`` only atoms, equalities, ``&``, ``|``
    and ``E`` are used."""
    budget = [max_size]

    def leaf(scope: tuple[str, ...]) -> Formula:
        zero = [s for s, ar in vocab.symbols if ar == 0]
        usable = [(s, ar) for s, ar in vocab.symbols if ar > 0]
        if not scope:
            if zero:
                return Atom(rng.choice(zero))
            return TOP if ep or rng.random() < 0.5 else BOTTOM
        roll = rng.random()
        if roll < 0.2:
            return Eq(Var(rng.choice(scope)), Var(rng.choice(scope)))
        if roll < 0.25 and zero:
            return Atom(rng.choice(zero))
        s, ar = rng.choice(usable)
        return Atom(s, tuple(Var(rng.choice(scope)) for _ in range(ar)))

    def gen(scope: tuple[str, ...], left: int) -> Formula:
        budget[0] -= 1
        if budget[0] <= 0:
            return leaf(scope)
        ops = ["leaf", "and", "or"]
        if not ep:
            ops.append("not")
        if left > 0:
            ops += ["ex", "ex"] if ep else ["ex", "all"]
        if not scope and left > 0:
            op = rng.choice(["ex"] if ep else ["ex", "all"])
        else:
            op = rng.choice(ops)
        if op == "leaf":
            return leaf(scope)
        if op == "not":
            return Not(gen(scope, left))
        if op in ("and", "or"):
            a, b = gen(scope, left), gen(scope, left)
            return And(a, b) if op == "and" else Or(a, b)
        v = rng.choice(names)
        body = gen(tuple(dict.fromkeys(scope + (v,))), left - 1)
        return Exists(v, body) if op == "ex" else Forall(v, body)

    return gen(tuple(free), rank)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(range(1, n + 1), [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(range(1, n + 1), [(i, i % n + 1) for i in range(1, n + 1)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(range(leaves + 1), [(0, i) for i in range(1, leaves + 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    g = nx.convert_node_labels_to_integers(nx.grid_2d_graph(rows, cols), first_label=1)
    return from_networkx(g)


def edgeless_graph(n: int) -> Graph:
    return Graph.from_edges(range(1, n + 1), [])


def random_sparse_graph(rng: random.Random, n: int, avg_degree: float = 2.5) -> Graph:
    p = min(1.0, avg_degree / max(1, n - 1))
    vs = list(range(1, n + 1))
    return Graph.from_edges(vs, [e for e in combinations(vs, 2) if rng.random() < p])


def atlas_graphs(max_vertices: int = 7) -> list[Graph]:
    """All graphs up to isomorphism with 1..max_vertices vertices."""
    if max_vertices > 7:
        raise ValueError("the atlas stops at 7 vertices")
    out = []
    for g in nx.graph_atlas_g():
        if 1 <= g.number_of_nodes() <= max_vertices:
            out.append(from_networkx(g))
    return out
