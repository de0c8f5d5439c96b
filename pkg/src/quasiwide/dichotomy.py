"""Constructive shallow-clique / scattered-set dichotomy and margin arithmetic.

Stage ``i`` keeps a candidate set ``S_i`` and a deletion set ``B_i`` such
that the i-neighbourhoods of ``S_i`` in ``G - B_i`` are pairwise disjoint.
Each stage first looks for a K_k minor built from those neighbourhoods
(directly adjacent, linked through private middle vertices, or a
complete bipartite hub pattern); otherwise it may delete a few hub
vertices and thins ``S_i`` to keep the invariant one radius further.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Mapping

import networkx as nx

from .minors import MinorEmbedding, verify_minor
from .scattered import ScatteredWitness, _mis, is_r_scattered
from .structures import Element, Graph


class CertificateError(RuntimeError):
    """A produced certificate failed re-verification."""


@dataclass(frozen=True)
class Exhausted:
    stage: int
    candidates: int
    deleted: frozenset
    reason: str


Outcome = MinorEmbedding | ScatteredWitness | Exhausted


def _check_params(k: int, r: int, m: int) -> None:
    if k < 2 or r < 0 or m < 1:
        raise ValueError(f"need k >= 2, r >= 0, m >= 1 (got k={k}, r={r}, m={m})")


class _Stage:
    """Neighbourhood bookkeeping for one stage."""

    def __init__(self, h: Graph, s: list[Element], i: int, search_budget: int):
        self.h, self.s, self.i = h, s, i
        self.budget = search_budget
        idx = h.index
        d = h.distances
        self.nbhd = {c: frozenset(v for v in h.vertices if 0 <= d[idx[c], idx[v]] <= i) for c in s}
        owner = {}
        for c in s:
            for v in self.nbhd[c]:
                owner[v] = c
        self.owner = owner
        # vertices outside every neighbourhood, and which neighbourhoods they touch
        self.touch: dict[Element, set] = {}
        for x in h.vertices:
            if x in owner:
                continue
            hits = {owner[w] for w in h.adj[x] if w in owner}
            if hits:
                self.touch[x] = hits
        adjacent = set()
        for u, v in h.edge_list():
            cu, cv = owner.get(u), owner.get(v)
            if cu is not None and cv is not None and cu != cv:
                adjacent.add(frozenset((cu, cv)))
        self.adjacent = adjacent
        middles: dict[frozenset, list] = {}
        for x, hits in self.touch.items():
            for a, b in combinations(sorted(hits, key=s.index), 2):
                middles.setdefault(frozenset((a, b)), []).append(x)
        self.middles = middles

    def linked(self, a, b) -> bool:
        key = frozenset((a, b))
        return key in self.adjacent or key in self.middles

    def _assign_middles(self, clique: list) -> dict | None:
        need = [frozenset(p) for p in combinations(clique, 2) if frozenset(p) not in self.adjacent]
        if not need:
            return {}
        bip = nx.Graph()
        bip.add_nodes_from((("p", p) for p in need))
        for p in need:
            for x in self.middles.get(p, ()):
                bip.add_edge(("p", p), ("x", x))
        top = [("p", p) for p in need]
        match = nx.bipartite.hopcroft_karp_matching(bip, top_nodes=top)
        if any(t not in match for t in top):
            return None
        return {p: match[("p", p)][1] for p in need}

    def clique_cases_1_2(self, k: int):
        """k neighbourhoods pairwise adjacent or joined by distinct middles."""
        s = self.s
        pos = {c: j for j, c in enumerate(s)}
        nbrs = {c: [d for d in s if d != c and self.linked(c, d)] for c in s}
        nodes = [0]

        def rec(clique, cand):
            if len(clique) == k:
                mids = self._assign_middles(clique)
                if mids is not None:
                    return clique, mids
                return None
            if len(clique) + len(cand) < k:
                return None
            for j, c in enumerate(cand):
                nodes[0] += 1
                if nodes[0] > self.budget:
                    return None
                nxt = [d for d in cand[j + 1 :] if self.linked(c, d)]
                got = rec(clique + [c], nxt)
                if got is not None:
                    return got
            return None

        start = [c for c in s if len(nbrs[c]) >= k - 1]
        found = rec([], sorted(start, key=pos.__getitem__))
        if found is None:
            return None
        clique, mids = found
        sets = {c: set(self.nbhd[c]) for c in clique}
        for pair, x in mids.items():
            a, b = sorted(pair, key=pos.__getitem__)
            sets[a].add(x)
        return MinorEmbedding.clique([sets[c] for c in clique], centers=clique)

    def clique_case_3(self, k: int):
        """k-1 hubs all touching the same k-1 neighbourhoods."""
        if k < 3:
            return None
        s = self.s
        pos = {c: j for j, c in enumerate(s)}
        hubs = sorted(
            (x for x, hits in self.touch.items() if len(hits) >= k - 1),
            key=self.h.index.__getitem__,
        )
        nodes = [0]

        def rec(chosen, common, rest):
            if len(chosen) == k - 1:
                return chosen, common
            for j, x in enumerate(rest):
                nodes[0] += 1
                if nodes[0] > self.budget:
                    return None
                nxt = common & self.touch[x]
                if len(nxt) < k - 1:
                    continue
                got = rec(chosen + [x], nxt, rest[j + 1 :])
                if got is not None:
                    return got
            return None

        found = rec([], set(s), hubs)
        if found is None:
            return None
        xs, common = found
        centres = sorted(common, key=pos.__getitem__)[: k - 1]
        sets = [set(self.nbhd[c]) | {xs[j]} for j, c in enumerate(centres[: k - 2])]
        sets.append(set(self.nbhd[centres[k - 2]]))
        sets.append({xs[k - 2]})
        return MinorEmbedding.clique(sets, centers=list(centres) + [xs[k - 2]])


def _thin(h: Graph, s: list[Element], radius: int, exact_limit: int) -> list[Element]:
    """Independent set of the 'distance <= 2*radius in h' graph on ``s``."""
    idx = h.index
    d = h.distances
    n = len(s)
    conf = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            dab = d[idx[s[a]], idx[s[b]]]
            if 0 <= dab <= 2 * radius:
                conf[a] |= 1 << b
                conf[b] |= 1 << a
    if n <= exact_limit:
        mask = _mis(conf, (1 << n) - 1, None)
        return [s[j] for j in range(n) if (mask >> j) & 1]
    alive = (1 << n) - 1
    out = []
    while alive:
        best, best_deg = -1, None
        x = alive
        while x:
            low = x & -x
            j = low.bit_length() - 1
            deg = bin(conf[j] & alive).count("1")
            if best_deg is None or deg < best_deg:
                best, best_deg = j, deg
            x ^= low
        out.append(s[best])
        alive &= ~conf[best] & ~(1 << best)
    return out


def scattered_or_shallow_clique(
    g: Graph,
    k: int,
    r: int,
    m: int,
    *,
    search_budget: int = 20000,
    exact_limit: int = 40,
) -> Outcome:
    """K_k as a depth-(r+1) minor, or at most k-2 deletions leaving an
    r-scattered set of size >= m, or :class:`Exhausted`.

    Every returned certificate has been re-verified against ``g``.
    """
    _check_params(k, r, m)
    s = list(g.vertices)
    deleted: list[Element] = []
    for i in range(r + 1):
        h = g.without(deleted)
        st = _Stage(h, s, i, search_budget)
        emb = st.clique_cases_1_2(k) or st.clique_case_3(k)
        if emb is not None:
            emb = MinorEmbedding(emb.branch_sets, emb.pattern, r + 1, emb.centers)
            if not verify_minor(g, emb):
                raise CertificateError("clique minor failed verification")
            return emb
        if i == r:
            break
        # optional hub deletions, kept only when they enlarge the next S
        base = _thin(h, s, i + 1, exact_limit)
        idx = h.index
        d = h.distances
        counts = {}
        for x in h.vertices:
            c = sum(1 for t in s if 0 <= d[idx[x], idx[t]] <= i + 1)
            if c >= k - 1:
                counts[x] = c
        for x in sorted(counts, key=lambda v: (-counts[v], idx[v])):
            if len(deleted) >= k - 2:
                break
            trial = deleted + [x]
            h2 = g.without(trial)
            s2 = [t for t in s if t not in trial]
            cand = _thin(h2, s2, i + 1, exact_limit)
            if len(cand) > len(base):
                deleted, base = trial, cand
                h = h2
        s = base
    if len(s) < m:
        return Exhausted(r, len(s), frozenset(deleted), f"only {len(s)} scattered candidates left, need {m}")
    wit = ScatteredWitness(frozenset(deleted), frozenset(s), r)
    if len(deleted) > k - 2 or not wit.verify(g) or not is_r_scattered(g.without(deleted), s, r):
        raise CertificateError("scattered witness failed verification")
    return wit


# ---------------------------------------------------------------------------
# margins


@dataclass(frozen=True)
class MarginFunction:
    """Tabulated ``r -> value`` with a provenance tag."""

    values: Mapping[int, int]
    provenance: str

    def __call__(self, r: int) -> int:
        if r not in self.values:
            raise KeyError(f"{self.provenance} margin undefined at r={r}")
        return self.values[r]

    @classmethod
    def tabulate(cls, f: Callable[[int], int], rs, provenance: str) -> "MarginFunction":
        vals = {int(r): int(f(r)) for r in rs}
        if any(v < 0 for v in vals.values()):
            raise ValueError("margin values must be nonnegative")
        return cls(vals, provenance)


def margin_bounded_expansion(f: Callable[[int], int], r: int) -> int:
    """k(r) = 2 f(r+1) + 2, where f bounds the grad."""
    return 2 * f(r + 1) + 2


def margin_local_minor(f: Callable[[int], int], r: int) -> int:
    """k(r) = f(3r+4), where K_f(r) is excluded from every r-ball."""
    return f(3 * r + 4)


def reported_margin(k: int) -> int:
    """Deletion margin of the resulting quasi-wideness witness."""
    return k - 2


def margin_table(f: Callable[[int], int], rs, provenance: str) -> MarginFunction:
    rule = {"bounded-expansion": margin_bounded_expansion, "local-minor": margin_local_minor}
    if provenance not in rule:
        raise ValueError(f"unknown provenance {provenance!r}")
    return MarginFunction.tabulate(lambda r: rule[provenance](f, r), rs, provenance)
