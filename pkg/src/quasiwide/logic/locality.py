"""Gaifman-locality formula builders: adjacency, bounded distance,
relativisation to a neighbourhood, and basic local sentences."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations

from ..structures import Vocabulary
from .formula import (
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Var,
    conj,
    disj,
    eq,
    exists_many,
    free_vars,
    all_vars,
    implies,
    normalize,
    rename_free,
)


def _stem(avoid: set[str], base: str) -> str:
    """A variable stem such that no name in ``avoid`` looks like stem+digits."""
    stem = base
    while any(re.fullmatch(re.escape(stem) + r"\d+(_\d+)?", v) for v in avoid):
        stem += "_"
    return stem


def adjacency_formula(vocab: Vocabulary, x: str = "x", y: str = "y", stem: str | None = None) -> Formula:
    """``x`` and ``y`` occur together in some tuple.

    One disjunct per symbol of arity >= 2 and ordered position pair; the
    remaining positions are existentially quantified, so the rank is
    ``max(0, max_arity - 2)``. Without such symbols this is ``false``.
    """
    if stem is None:
        stem = _stem({x, y}, "w")
    parts = []
    for name, arity in vocab.symbols:
        if arity < 2:
            continue
        for i, j in permutations(range(arity), 2):
            others = [p for p in range(arity) if p not in (i, j)]
            names = {p: f"{stem}{k + 1}" for k, p in enumerate(others)}
            args = []
            for p in range(arity):
                if p == i:
                    args.append(Var(x))
                elif p == j:
                    args.append(Var(y))
                else:
                    args.append(Var(names[p]))
            parts.append(exists_many([names[p] for p in others], Atom(name, tuple(args))))
    return disj(parts)


def dist_formula(vocab: Vocabulary, r: int, x: str = "x", y: str = "y") -> Formula:
    """``delta(x, y) <= r`` in the Gaifman graph, built as a linear chain:

        delta_0(u, v)  = u = v
        delta_k(u, v)  = delta_{k-1}(u, v) | E z_k (adj(u, z_k) & delta_{k-1}(z_k, v))

    Binder names depend only on the level, so repeated subformulas are
    syntactically equal (the evaluator exploits that).
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    zstem = _stem({x, y}, "z")
    wstem = _stem({x, y}, "w")

    def build(u: str, k: int) -> Formula:
        if k == 0:
            return eq(u, y)
        z = f"{zstem}{k}"
        adj = adjacency_formula(vocab, u, z, stem=f"{wstem}{k}_")
        return Or(build(u, k - 1), Exists(z, And(adj, build(z, k - 1))))

    return build(x, r)


def dist_greater(vocab: Vocabulary, r: int, x: str, y: str) -> Formula:
    return Not(dist_formula(vocab, r, x, y))


def relativize(psi: Formula, center_var: str, r: int, vocab: Vocabulary) -> Formula:
    """Bound every quantifier of ``psi`` to the r-ball around ``center_var``.

    ``E z t`` becomes ``E z (delta(z, c) <= r & t')`` and ``A z t`` becomes
    ``A z (delta(z, c) <= r -> t')``. Binders are renamed first so the
    centre variable cannot be captured. ``center_var`` may coincide with the
    free variable of ``psi``.
    """
    psi = normalize(psi, avoid={center_var})

    def go(node: Formula) -> Formula:
        if isinstance(node, (Exists, Forall)):
            guard = dist_formula(vocab, r, node.var, center_var)
            body = go(node.body)
            if isinstance(node, Exists):
                return Exists(node.var, And(guard, body))
            return Forall(node.var, implies(guard, body))
        if isinstance(node, Not):
            return Not(go(node.body))
        if isinstance(node, (And, Or)):
            return type(node)(go(node.left), go(node.right))
        return node

    return go(psi)


@dataclass(frozen=True)
class BasicLocalSentence:
    """``E x1..xn (pairwise delta > 2r & each psi relativised to N_r)``."""

    width: int
    radius: int
    local_condition: Formula
    formula: Formula


def basic_local_sentence(n: int, r: int, psi: Formula, vocab: Vocabulary) -> BasicLocalSentence:
    if n < 1 or r < 0:
        raise ValueError("need width >= 1 and radius >= 0")
    fv = sorted(free_vars(psi))
    if len(fv) > 1:
        raise ValueError(f"local condition must have at most one free variable, has {fv}")
    avoid = all_vars(psi)
    xstem = _stem(avoid, "x")
    xs = [f"{xstem}{i + 1}" for i in range(n)]
    scatter = []
    for i in range(n):
        for j in range(n):
            if i != j:
                scatter.append(dist_greater(vocab, 2 * r, xs[i], xs[j]))
    local = []
    for xi in xs:
        inst = rename_free(psi, {fv[0]: xi}) if fv else psi
        local.append(relativize(inst, xi, r, vocab))
    body = conj(scatter + local)
    return BasicLocalSentence(n, r, psi, exists_many(xs, body))

