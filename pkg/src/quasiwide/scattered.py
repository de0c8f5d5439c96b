"""r-scattered sets, deletion witnesses, and corpus classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .structures import Element, Graph


class GraphTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ScatteredWitness:
    """Deleting ``deleted`` leaves ``scattered`` r-scattered."""

    deleted: frozenset[Element]
    scattered: frozenset[Element]
    radius: int

    def verify(self, g: Graph) -> bool:
        if self.deleted & self.scattered:
            return False
        vs = set(g.vertices)
        if not (self.deleted <= vs and self.scattered <= vs):
            return False
        return is_r_scattered(g.without(self.deleted), self.scattered, self.radius)


def _conflict_masks(g: Graph, r: int) -> list[int]:
    """Bit j of entry i is set when vertices i != j are within 2r."""
    d = g.distances
    n = len(g.vertices)
    out = []
    for i in range(n):
        m = 0
        for j in range(n):
            if i != j and 0 <= d[i, j] <= 2 * r:
                m |= 1 << j
        out.append(m)
    return out


def is_r_scattered(g: Graph, s: Iterable[Element], r: int) -> bool:
    """Pairwise distance > 2r, i.e. the r-neighbourhoods are disjoint."""
    s = list(dict.fromkeys(s))
    idx = g.index
    if any(v not in idx for v in s):
        raise KeyError(f"not vertices: {[v for v in s if v not in idx]}")
    d = g.distances
    for u, v in combinations(s, 2):
        duv = d[idx[u], idx[v]]
        if 0 <= duv <= 2 * r:
            return False
    return True


def _mis(conf: list[int], cand: int, target: int | None) -> int:
    """Maximum independent set (as a mask) of the conflict graph on ``cand``."""
    best = [0, 0]  # size, mask

    def popcount(x: int) -> int:
        return bin(x).count("1")

    def rec(chosen: int, size: int, cand: int) -> bool:
        # vertices with no conflict left are always taken
        while cand:
            free = 0
            c = cand
            while c:
                low = c & -c
                v = low.bit_length() - 1
                if conf[v] & cand == 0:
                    free |= low
                c ^= low
            if not free:
                break
            chosen |= free
            size += popcount(free)
            cand &= ~free
        if size + popcount(cand) <= best[0]:
            return False
        if not cand:
            best[0], best[1] = size, chosen
            return target is not None and size >= target
        # branch on the vertex with most conflicts inside cand
        c = cand
        pick, pick_deg = -1, -1
        while c:
            low = c & -c
            v = low.bit_length() - 1
            deg = popcount(conf[v] & cand)
            if deg > pick_deg:
                pick, pick_deg = v, deg
            c ^= low
        bit = 1 << pick
        if rec(chosen | bit, size + 1, cand & ~bit & ~conf[pick]):
            return True
        return rec(chosen, size, cand & ~bit)

    rec(0, 0, cand)
    return best[1]


def max_scattered_set(
    g: Graph,
    r: int,
    mode: str = "exact",
    *,
    max_vertices: int = 80,
    target: int | None = None,
) -> list[Element]:
    """Largest r-scattered set (exact) or a greedy one.

    exact: branch and bound over independent sets of the graph joining
    vertices at distance <= 2r; stops early once ``target`` is reached.
    greedy: take the first remaining vertex in vertex order, discard its
    2r-ball, repeat.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    n = len(g.vertices)
    conf = _conflict_masks(g, r)
    if mode == "greedy":
        alive = (1 << n) - 1
        out = []
        while alive:
            v = (alive & -alive).bit_length() - 1
            out.append(g.vertices[v])
            alive &= ~conf[v] & ~(1 << v)
        return out
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if n > max_vertices:
        raise GraphTooLarge(f"exact mode is limited to {max_vertices} vertices, got {n}")
    mask = _mis(conf, (1 << n) - 1, target)
    return g.vertices_of(mask)


def scattered_after_deletion(g: Graph, r: int, m: int, k: int) -> ScatteredWitness | None:
    """First deletion set of size exactly ``k`` (lexicographic in vertex
    order) leaving an r-scattered set of size ``m``."""
    if len(g.vertices) - k < m:
        return None
    for drop in combinations(g.vertices, k):
        h = g.without(drop)
        found = max_scattered_set(h, r, target=m)
        if len(found) >= m:
            return ScatteredWitness(frozenset(drop), frozenset(found[:m]), r)
    return None


@dataclass
class CorpusEntry:
    name: str
    vertices: int
    least_k: int | None
    witness: ScatteredWitness | None


@dataclass
class CorpusReport:
    r: int
    m: int
    kmax: int
    entries: list[CorpusEntry] = field(default_factory=list)

    @property
    def margin(self) -> int | None:
        """Largest least-k over the corpus; None if some graph needs > kmax."""
        if any(e.least_k is None for e in self.entries):
            return None
        return max((e.least_k for e in self.entries), default=0)

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            k = f"none <= {self.kmax}" if e.least_k is None else f"k={e.least_k}"
            out.append(f"{e.name}\t|V|={e.vertices}\t{k}")
        agg = self.margin
        out.append(
            f"corpus margin (r={self.r}, m={self.m}): "
            + (f"{agg}" if agg is not None else f"none <= {self.kmax}")
        )
        return out


def classify_corpus(
    graphs: Sequence[Graph] | Sequence[tuple[str, Graph]],
    r: int,
    m: int,
    kmax: int,
) -> CorpusReport:
    """Least deletion budget k <= kmax giving an r-scattered m-set, per graph."""
    report = CorpusReport(r, m, kmax)
    for i, item in enumerate(graphs):
        name, g = item if isinstance(item, tuple) else (f"graph{i}", item)
        least, wit = None, None
        for k in range(kmax + 1):
            wit = scattered_after_deletion(g, r, m, k)
            if wit is not None:
                least = k
                break
        report.entries.append(CorpusEntry(name, len(g.vertices), least, wit))
    return report
