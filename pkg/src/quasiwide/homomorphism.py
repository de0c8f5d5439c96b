"""Homomorphism verification and complete backtracking search."""

from __future__ import annotations

from collections import defaultdict, deque
from typing import Iterable, Mapping, Sequence

from .logic.evaluate import compile_formula
from .logic.formula import Formula
from .structures import Element, Structure, VocabularyMismatch, gaifman_graph

HomCertificate = dict  # element of A -> element of B


class SearchBudgetExceeded(RuntimeError):
    """The node budget ran out before the search space was exhausted."""


def is_hom(a: Structure, b: Structure, h: Mapping[Element, Element]) -> bool:
    if a.vocab != b.vocab:
        raise VocabularyMismatch(f"{a.vocab} vs {b.vocab}")
    members = set(b.universe)
    if any(x not in h or h[x] not in members for x in a.universe):
        return False
    for name in a.vocab.names:
        target = b.relations[name]
        for t in a.relations[name]:
            if tuple(h[x] for x in t) not in target:
                return False
    return True


def compose(h1: Mapping, h2: Mapping) -> dict:
    """``h2 . h1``."""
    return {x: h2[y] for x, y in h1.items()}


class _Search:
    def __init__(self, a: Structure, b: Structure, budget: int | None, injective: bool = False):
        self.a, self.b = a, b
        self.budget = budget
        self.injective = injective
        self.nodes = 0
        self.values = list(b.universe)
        self.rank = {v: i for i, v in enumerate(self.values)}
        # constraints: (symbol, tuple over A) with at least one position
        self.cons = [(n, t) for n in a.vocab.names for t in sorted(a.relations[n]) if t]
        self.by_var = defaultdict(list)
        for ci, (_, t) in enumerate(self.cons):
            for x in set(t):
                self.by_var[x].append(ci)
        g = gaifman_graph(a)
        self.order = sorted(a.universe, key=lambda x: (-g.degree(x), x))

    def revise(self, ci: int, dom: dict[Element, set]) -> list[Element] | None:
        """Shrink domains to values with a supporting B-tuple; return the
        changed variables, or None on a wipe-out."""
        name, t = self.cons[ci]
        support = [set() for _ in t]
        for s in self.b.relations[name]:
            ok = True
            bound = {}
            for x, v in zip(t, s):
                if v not in dom[x] or bound.setdefault(x, v) != v:
                    ok = False
                    break
            if ok:
                for i, v in enumerate(s):
                    support[i].add(v)
        changed = []
        for i, x in enumerate(t):
            if x in changed:
                continue
            new = dom[x] & support[i]
            if len(new) != len(dom[x]):
                if not new:
                    return None
                dom[x] = new
                changed.append(x)
        return changed

    def propagate(self, dom, queue: Iterable[int]) -> bool:
        pending = deque(queue)
        inq = set(pending)
        while pending:
            ci = pending.popleft()
            inq.discard(ci)
            changed = self.revise(ci, dom)
            if changed is None:
                return False
            for x in changed:
                for cj in self.by_var[x]:
                    if cj not in inq:
                        inq.add(cj)
                        pending.append(cj)
        return True

    def run(self) -> dict | None:
        a, b = self.a, self.b
        if a.universe and not b.universe:
            return None
        if self.injective and len(a.universe) > len(b.universe):
            return None
        dom = {x: set(self.values) for x in a.universe}
        if not self.propagate(dom, range(len(self.cons))):
            return None
        return self.extend(dom, 0)

    def extend(self, dom, k: int) -> dict | None:
        if k == len(self.order):
            return {x: next(iter(dom[x])) for x in self.a.universe}
        x = self.order[k]
        for v in sorted(dom[x], key=self.rank.__getitem__):
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise SearchBudgetExceeded(f"gave up after {self.budget} nodes")
            trial = {y: set(d) for y, d in dom.items()}
            trial[x] = {v}
            queue = list(self.by_var[x])
            if self.injective:
                wiped = False
                for y in self.order[k + 1 :]:
                    if v in trial[y]:
                        trial[y].discard(v)
                        if not trial[y]:
                            wiped = True
                            break
                        queue.extend(self.by_var[y])
                if wiped:
                    continue
            if self.propagate(trial, queue):
                found = self.extend(trial, k + 1)
                if found is not None:
                    return found
        return None


def find_homomorphism(a: Structure, b: Structure, budget: int | None = None) -> dict | None:
    """A homomorphism ``a -> b`` or None if there is none.

    Complete search: variables in decreasing Gaifman degree (ties by id),
    values in B's universe order, generalised arc consistency after each
    assignment. With ``budget`` set, raises :class:`SearchBudgetExceeded`
    instead of answering once that many assignments have been tried.
    """
    if a.vocab != b.vocab:
        raise VocabularyMismatch(f"{a.vocab} vs {b.vocab}")
    for name, arity in a.vocab.symbols:
        if arity == 0 and a.holds(name) and not b.holds(name):
            return None
    h = _Search(a, b, budget).run()
    if h is not None:
        assert is_hom(a, b, h)
    return h


def find_embedding(a: Structure, b: Structure, budget: int | None = None) -> dict | None:
    """An injective homomorphism, i.e. an isomorphism of ``a`` onto a
    (not necessarily induced) substructure of ``b``."""
    if a.vocab != b.vocab:
        raise VocabularyMismatch(f"{a.vocab} vs {b.vocab}")
    for name, arity in a.vocab.symbols:
        if arity == 0 and a.holds(name) and not b.holds(name):
            return None
    h = _Search(a, b, budget, injective=True).run()
    if h is not None:
        assert is_hom(a, b, h) and len(set(h.values())) == len(h)
    return h


def homomorphically_equivalent(a: Structure, b: Structure) -> bool:
    return find_homomorphism(a, b) is not None and find_homomorphism(b, a) is not None


def check_preservation(phi: Formula, sample: Sequence[Structure]) -> list[tuple[int, int, dict]]:
    """Ordered pairs ``(i, j, h)`` with ``sample[i] |= phi``, ``h`` a
    homomorphism into ``sample[j]`` and ``sample[j] |/= phi``."""
    c = compile_formula(phi)
    truth = [c.check(s) for s in sample]
    out = []
    for i, a in enumerate(sample):
        if not truth[i]:
            continue
        for j, b in enumerate(sample):
            if truth[j]:
                continue
            h = find_homomorphism(a, b)
            if h is not None:
                out.append((i, j, h))
    return out
