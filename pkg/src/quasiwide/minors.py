"""Minor and shallow-minor testing with branch-set certificates, and grad."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import networkx as nx
import numpy as np

from .kernels import densest_subset_bruteforce, grad_search, valid_block_flags
from .scattered import GraphTooLarge
from .structures import Element, Graph, ball


def complete_graph(k: int) -> Graph:
    vs = [str(i) for i in range(1, k + 1)]
    return Graph.from_edges(vs, [(a, b) for i, a in enumerate(vs) for b in vs[i + 1 :]])


@dataclass(frozen=True)
class MinorEmbedding:
    """Branch sets in a host graph witnessing ``pattern`` as a minor.

    For clique minors the pattern is K_k on ``"1".."k"``. With ``depth``
    set, each branch set lies in the depth-ball around its centre.
    """

    branch_sets: Mapping[Element, frozenset]
    pattern: Graph
    depth: int | None = None
    centers: Mapping[Element, Element] | None = field(default=None)

    @property
    def order(self) -> int:
        return len(self.pattern.vertices)

    @classmethod
    def clique(cls, sets, depth=None, centers=None) -> "MinorEmbedding":
        sets = [frozenset(s) for s in sets]
        k = len(sets)
        keys = [str(i) for i in range(1, k + 1)]
        bs = dict(zip(keys, sets))
        cs = dict(zip(keys, centers)) if centers is not None else None
        return cls(bs, complete_graph(k), depth, cs)

    def lines(self) -> list[str]:
        out = []
        for v in self.pattern.vertices:
            s = sorted(self.branch_sets[v])
            extra = ""
            if self.centers is not None:
                extra = f"  center {self.centers[v]}"
            out.append(f"{v}: {' '.join(s)}{extra}")
        return out


def _connected(h: Graph, s: frozenset) -> bool:
    start = next(iter(s))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in h.adj[u]:
            if w in s and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(s)


def verify_minor(h: Graph, emb: MinorEmbedding) -> bool:
    """Check every branch-set condition, including depth when present."""
    pat = emb.pattern
    if set(emb.branch_sets) != set(pat.vertices):
        return False
    hv = set(h.vertices)
    used: set = set()
    for v in pat.vertices:
        s = emb.branch_sets[v]
        if not s or not s <= hv or s & used:
            return False
        used |= s
        if not _connected(h, s):
            return False
    for e in pat.edges:
        a, b = tuple(e)
        sa, sb = emb.branch_sets[a], emb.branch_sets[b]
        if not any(h.adj[x] & sb for x in sa):
            return False
    if emb.depth is not None:
        for v in pat.vertices:
            s = emb.branch_sets[v]
            if emb.centers is not None:
                c = emb.centers.get(v)
                if c not in hv or not s <= ball(h, c, emb.depth):
                    return False
            elif not any(s <= ball(h, c, emb.depth) for c in h.vertices):
                return False
    return True


def _ball_masks(h: Graph, depth: int) -> np.ndarray:
    d = h.distances
    n = len(h.vertices)
    out = np.zeros(n, dtype=np.int64)
    for w in range(n):
        m = 0
        for v in range(n):
            if 0 <= d[w, v] <= depth:
                m |= 1 << v
        out[w] = m
    return out


def candidate_blocks(h: Graph, depth: int | None) -> list[int]:
    """Connected vertex masks, restricted to depth-balls when given."""
    n = len(h.vertices)
    if n == 0:
        return []
    if depth == 0:
        return [1 << i for i in range(n)]
    nbr = h.nbr_masks
    if depth is None:
        balls = np.zeros(1, dtype=np.int64)
        flags = valid_block_flags(nbr, balls, n, False)
    else:
        flags = valid_block_flags(nbr, _ball_masks(h, depth), n, True)
    return [int(m) for m in np.flatnonzero(flags)]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def is_minor(
    g: Graph,
    h: Graph,
    depth: int | None = None,
    *,
    max_vertices: int = 18,
) -> MinorEmbedding | None:
    """Branch sets exhibiting ``g`` as a (depth-``depth``) minor of ``h``.

    Complete backtracking over assignments of candidate blocks to the
    vertices of ``g``, most constrained pattern vertex first. Cliques get
    symmetry breaking on the lowest vertex of each block.
    """
    ng, nh = len(g.vertices), len(h.vertices)
    if depth is not None and depth < 0:
        raise ValueError("depth must be nonnegative")
    if ng == 0:
        return MinorEmbedding({}, g, depth, {} if depth is not None else None)
    if ng > nh or len(g.edges) > len(h.edges):
        return None
    if nh > max_vertices:
        raise GraphTooLarge(f"minor search is limited to {max_vertices} host vertices, got {nh}")

    blocks = sorted(candidate_blocks(h, depth), key=lambda m: (_popcount(m), m))
    nbr = h.nbr_masks
    bnbr = {}
    for m in blocks:
        acc = 0
        x = m
        while x:
            low = x & -x
            acc |= int(nbr[low.bit_length() - 1])
            x ^= low
        bnbr[m] = acc & ~m

    order = sorted(g.vertices, key=lambda v: (-g.degree(v), g.index[v]))
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[pos[u] for u in g.adj[v] if pos[u] < pos[v]] for v in order]
    is_clique = len(g.edges) == ng * (ng - 1) // 2
    chosen = [0] * ng

    def low_index(m: int) -> int:
        return (m & -m).bit_length()

    def rec(i: int, used: int) -> bool:
        if i == ng:
            return True
        if ng - i > nh - _popcount(used):
            return False
        prev_low = low_index(chosen[i - 1]) if is_clique and i else 0
        for m in blocks:
            if m & used:
                continue
            if is_clique and low_index(m) <= prev_low:
                continue
            nb = bnbr[m]
            if all(nb & chosen[j] for j in earlier[i]):
                chosen[i] = m
                if rec(i + 1, used | m):
                    return True
        chosen[i] = 0
        return False

    if not rec(0, 0):
        return None
    sets = {v: frozenset(h.vertices_of(chosen[pos[v]])) for v in g.vertices}
    centers = None
    if depth is not None:
        bm = _ball_masks(h, depth)
        centers = {}
        for v in g.vertices:
            m = chosen[pos[v]]
            centers[v] = next(h.vertices[w] for w in range(nh) if m & ~int(bm[w]) == 0)
    emb = MinorEmbedding(sets, g, depth, centers)
    assert verify_minor(h, emb)
    return emb


def densest_subgraph(h: Graph) -> tuple[Fraction, frozenset]:
    """Maximum |E(S)|/|S| over nonempty S, with a maximiser.

    Dinkelbach iteration; each step solves max |E(S)| - lam |S| as a
    maximum-weight closure (edge items require both endpoints) by min cut.
    """
    if not h.vertices:
        return Fraction(0), frozenset()
    best_set = frozenset(h.vertices)
    lam = Fraction(len(h.edges), len(h.vertices))
    edges = h.edge_list()
    while True:
        p, q = lam.numerator, lam.denominator
        net = nx.DiGraph()
        net.add_node("s")
        net.add_node("t")
        for i, (u, v) in enumerate(edges):
            node = ("e", i)
            net.add_edge("s", node, capacity=q)
            net.add_edge(node, ("v", u))
            net.add_edge(node, ("v", v))
        for v in h.vertices:
            net.add_edge(("v", v), "t", capacity=p)
        cut, (src_side, _) = nx.minimum_cut(net, "s", "t")
        gain = q * len(edges) - cut
        if gain <= 0:
            return lam, best_set
        s = frozenset(x[1] for x in src_side if isinstance(x, tuple) and x[0] == "v")
        e_s = sum(1 for u, v in edges if u in s and v in s)
        best_set = s
        lam = Fraction(e_s, len(s))


def grad(h: Graph, r: int, *, max_vertices: int = 12) -> Fraction:
    """Greatest reduced average density at depth ``r``, exactly."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    n = len(h.vertices)
    if n == 0:
        return Fraction(0)
    if r == 0:
        return densest_subgraph(h)[0]
    if n > max_vertices:
        raise GraphTooLarge(f"exact grad at r >= 1 is limited to {max_vertices} vertices, got {n}")
    e, c = _grad_kernel(h, r)
    return Fraction(int(e), int(c))


def _grad_kernel(h: Graph, r: int | None, search=grad_search):
    n = len(h.vertices)
    blocks = candidate_blocks(h, r)
    blocks.sort(key=lambda m: ((m & -m).bit_length(), _popcount(m), m))
    nbr = h.nbr_masks
    start = np.zeros(n + 1, dtype=np.int64)
    for m in blocks:
        start[(m & -m).bit_length()] += 1
    start = np.cumsum(start)
    masks = np.asarray(blocks, dtype=np.int64)
    nbrs = np.zeros(len(blocks), dtype=np.int64)
    for i, m in enumerate(blocks):
        acc = 0
        x = m
        while x:
            low = x & -x
            acc |= int(nbr[low.bit_length() - 1])
            x ^= low
        nbrs[i] = acc & ~m
    deg = np.asarray([h.degree(v) for v in h.vertices], dtype=np.int64)
    return search(masks, nbrs, start, deg, n)


def grad_bruteforce_r0(h: Graph) -> Fraction:
    """Densest subgraph by enumerating all vertex subsets (small graphs)."""
    if not h.vertices:
        return Fraction(0)
    e, v = densest_subset_bruteforce(h.nbr_masks, len(h.vertices))
    return Fraction(int(e), int(v))


def grad_estimate(h: Graph, r: int, *, max_vertices: int = 12) -> tuple[Fraction, bool]:
    """``(value, exact)``: exact grad when feasible, else the lower bound
    ``grad_0 <= grad_r`` flagged as inexact."""
    if r == 0 or len(h.vertices) <= max_vertices:
        return grad(h, r, max_vertices=max_vertices), True
    return densest_subgraph(h)[0], False


def local_clique_scan(
    g: Graph, k: int, r: int, *, max_vertices: int = 18
) -> tuple[Element, MinorEmbedding] | None:
    """First vertex whose (3r+4)-ball contains a K_k minor, with the minor."""
    if k < 1 or r < 0:
        raise ValueError("need k >= 1 and r >= 0")
    radius = 3 * r + 4
    pattern = complete_graph(k)
    negative: list[frozenset] = []
    for v in g.vertices:
        members = frozenset(ball(g, v, radius))
        # minors are inherited by supergraphs, so a ball inside a failed one fails
        if any(members <= bad for bad in negative):
            continue
        sub = g.induced(members)
        emb = is_minor(pattern, sub, max_vertices=max_vertices)
        if emb is not None:
            assert verify_minor(g, emb) and all(s <= members for s in emb.branch_sets.values())
            return v, emb
        negative.append(members)
    return None
