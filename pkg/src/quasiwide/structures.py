"""Finite relational structures, graphs, and the operations between them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

INF = float("inf")

Element = str
Tuple_ = tuple  # alias used only in annotations below


class VocabularyMismatch(ValueError):
    pass


class UnknownElement(KeyError):
    pass


class LoadError(ValueError):
    """Malformed structure or graph file."""


@dataclass(frozen=True)
class Vocabulary:
    """Ordered relation symbols with arities. Arity 0 is allowed."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate relation symbol in {names}")
        for name, arity in self.symbols:
            if arity < 0:
                raise ValueError(f"negative arity for {name}")

    @classmethod
    def of(cls, **arities: int) -> "Vocabulary":
        return cls(tuple(arities.items()))

    @classmethod
    def parse(cls, text: str) -> "Vocabulary":
        """``"E/2,P/1"`` style shorthand."""
        items = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            name, _, arity = part.partition("/")
            items.append((name.strip(), int(arity)))
        return cls(tuple(items))

    @cached_property
    def arity(self) -> dict[str, int]:
        return dict(self.symbols)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    @property
    def max_arity(self) -> int:
        return max((a for _, a in self.symbols), default=0)

    def __contains__(self, name: str) -> bool:
        return name in self.arity

    def __iter__(self):
        return iter(self.symbols)

    def __str__(self):
        return ",".join(f"{n}/{a}" for n, a in self.symbols)


GRAPH_VOCAB = Vocabulary((("E", 2),))


class Structure:
    """A finite structure; immutable once built.

    0-ary symbols are stored like any other relation: true is ``{()}``,
    false is the empty set.
    """

    __slots__ = ("vocab", "universe", "relations", "_key", "_index")

    def __init__(
        self,
        vocab: Vocabulary,
        universe: Iterable[Element],
        relations: Mapping[str, Iterable[Sequence[Element]]] | None = None,
        *,
        check: bool = True,
    ):
        self.vocab = vocab
        self.universe = tuple(dict.fromkeys(str(e) for e in universe))
        rels = {}
        relations = relations or {}
        for name in relations:
            if name not in vocab:
                raise VocabularyMismatch(f"symbol {name} not in vocabulary {vocab}")
        for name, _ in vocab.symbols:
            rels[name] = frozenset(tuple(str(x) for x in t) for t in relations.get(name, ()))
        self.relations: dict[str, frozenset[tuple[Element, ...]]] = rels
        self._key = None
        self._index = None
        if check:
            problems = validate_structure(self)
            if problems:
                raise ValueError("; ".join(problems))

    # -- identity -------------------------------------------------------
    def key(self):
        if self._key is None:
            self._key = (
                self.vocab,
                frozenset(self.universe),
                tuple((n, self.relations[n]) for n in self.vocab.names),
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, Structure) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __len__(self):
        return len(self.universe)

    def __repr__(self):
        rel = ", ".join(f"{n}={sorted(self.relations[n])}" for n in self.vocab.names)
        return f"Structure({list(self.universe)}, {rel})"

    # -- helpers --------------------------------------------------------
    @property
    def index(self) -> dict[Element, int]:
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.universe)}
        return self._index

    def holds(self, name: str) -> bool:
        """Truth value of a 0-ary symbol."""
        return () in self.relations[name]

    def tuples(self) -> Iterator[tuple[str, tuple[Element, ...]]]:
        """All ``(symbol, tuple)`` facts in vocabulary then lexicographic order."""
        for name in self.vocab.names:
            for t in sorted(self.relations[name]):
                yield name, t

    def fact_count(self) -> int:
        return sum(len(r) for r in self.relations.values())

    def with_relations(self, universe, relations) -> "Structure":
        return Structure(self.vocab, universe, relations, check=False)

    def restrict(self, keep: Iterable[Element]) -> "Structure":
        """Induced substructure on ``keep``."""
        keep = set(keep)
        universe = [e for e in self.universe if e in keep]
        rels = {n: [t for t in ts if all(x in keep for x in t)] for n, ts in self.relations.items()}
        return self.with_relations(universe, rels)

    def remove_fact(self, name: str, t: tuple[Element, ...]) -> "Structure":
        rels = dict(self.relations)
        rels[name] = rels[name] - {t}
        return self.with_relations(self.universe, rels)

    def remove_element(self, e: Element) -> "Structure":
        return self.restrict(x for x in self.universe if x != e)

    def rename(self, mapping: Mapping[Element, Element]) -> "Structure":
        universe = [mapping[e] for e in self.universe]
        rels = {n: [tuple(mapping[x] for x in t) for t in ts] for n, ts in self.relations.items()}
        return self.with_relations(universe, rels)


@dataclass(frozen=True)
class Graph:
    """Undirected loopless simple graph."""

    vertices: tuple[Element, ...]
    edges: frozenset[frozenset[Element]] = field(default_factory=frozenset)

    def __post_init__(self):
        vs = tuple(dict.fromkeys(str(v) for v in self.vertices))
        object.__setattr__(self, "vertices", vs)
        es = set()
        vset = set(vs)
        for e in self.edges:
            pair = frozenset(str(x) for x in e)
            if len(pair) != 2:
                raise ValueError(f"loop or malformed edge {tuple(e)}")
            if not pair <= vset:
                raise UnknownElement(f"edge {tuple(e)} mentions a non-vertex")
            es.add(pair)
        object.__setattr__(self, "edges", frozenset(es))

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[Sequence]) -> "Graph":
        return cls(tuple(str(v) for v in vertices), frozenset(frozenset(map(str, e)) for e in edges))

    @cached_property
    def adj(self) -> dict[Element, frozenset[Element]]:
        nb: dict[Element, set] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            nb[a].add(b)
            nb[b].add(a)
        return {v: frozenset(s) for v, s in nb.items()}

    @cached_property
    def index(self) -> dict[Element, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def __len__(self):
        return len(self.vertices)

    def degree(self, v: Element) -> int:
        return len(self.adj[v])

    def has_edge(self, u: Element, v: Element) -> bool:
        return frozenset((u, v)) in self.edges

    def induced(self, keep: Iterable[Element]) -> "Graph":
        keep = set(keep)
        vs = tuple(v for v in self.vertices if v in keep)
        return Graph(vs, frozenset(e for e in self.edges if e <= keep))

    def without(self, drop: Iterable[Element]) -> "Graph":
        drop = set(drop)
        return self.induced(v for v in self.vertices if v not in drop)

    def relabel(self, mapping: Mapping[Element, Element]) -> "Graph":
        return Graph(
            tuple(mapping[v] for v in self.vertices),
            frozenset(frozenset(mapping[x] for x in e) for e in self.edges),
        )

    # array views used by the kernels
    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        idx = self.index
        indptr = [0]
        indices: list[int] = []
        for v in self.vertices:
            indices.extend(sorted(idx[w] for w in self.adj[v]))
            indptr.append(len(indices))
        return np.asarray(indptr, dtype=np.int64), np.asarray(indices, dtype=np.int64)

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs hop distances, -1 where disconnected."""
        from .kernels import all_pairs_bfs

        indptr, indices = self.csr
        return all_pairs_bfs(indptr, indices, len(self.vertices))

    @cached_property
    def nbr_masks(self) -> np.ndarray:
        if len(self.vertices) > 62:
            raise ValueError("bitmask view needs at most 62 vertices")
        idx = self.index
        out = np.zeros(len(self.vertices), dtype=np.int64)
        for v in self.vertices:
            m = 0
            for w in self.adj[v]:
                m |= 1 << idx[w]
            out[idx[v]] = m
        return out

    def mask_of(self, vs: Iterable[Element]) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.index[v]
        return m

    def vertices_of(self, mask: int) -> list[Element]:
        return [v for i, v in enumerate(self.vertices) if (mask >> i) & 1]

    def edge_list(self) -> list[tuple[Element, Element]]:
        idx = self.index
        return sorted(tuple(sorted(e, key=idx.__getitem__)) for e in self.edges)


def graph_isomorphic(g: Graph, h: Graph) -> bool:
    import networkx as nx

    return nx.is_isomorphic(to_networkx(g), to_networkx(h))


def to_networkx(g: Graph):
    import networkx as nx

    nxg = nx.Graph()
    nxg.add_nodes_from(g.vertices)
    nxg.add_edges_from(tuple(e) for e in g.edges)
    return nxg


def from_networkx(nxg) -> Graph:
    return Graph.from_edges([str(v) for v in nxg.nodes], [(str(a), str(b)) for a, b in nxg.edges])


# ---------------------------------------------------------------------------
# validation and the substructure algebra


def validate_structure(s: Structure) -> list[str]:
    problems = []
    members = set(s.universe)
    for name, arity in s.vocab.symbols:
        for t in sorted(s.relations.get(name, ())):
            if len(t) != arity:
                problems.append(f"{name}{t}: arity {len(t)} != {arity}")
            missing = [x for x in t if x not in members]
            if missing:
                problems.append(f"{name}{t}: element(s) {missing} not in universe")
    return problems


def _same_vocab(a: Structure, b: Structure) -> None:
    if a.vocab != b.vocab:
        raise VocabularyMismatch(f"{a.vocab} vs {b.vocab}")


def is_substructure(b: Structure, a: Structure) -> bool:
    _same_vocab(a, b)
    if not set(b.universe) <= set(a.universe):
        return False
    return all(b.relations[n] <= a.relations[n] for n in a.vocab.names)


def is_induced_substructure(b: Structure, a: Structure) -> bool:
    _same_vocab(a, b)
    keep = set(b.universe)
    if not keep <= set(a.universe):
        return False
    for n in a.vocab.names:
        restricted = {t for t in a.relations[n] if all(x in keep for x in t)}
        if b.relations[n] != restricted:
            return False
    return True


def disjoint_union(a: Structure, b: Structure) -> Structure:
    """Tagged union: left ids gain prefix ``l.``, right ids ``r.``."""
    _same_vocab(a, b)
    return disjoint_union_with_maps(a, b)[0]


def disjoint_union_with_maps(a: Structure, b: Structure):
    """Disjoint union plus the two injections as dicts."""
    _same_vocab(a, b)
    left = {e: "l." + e for e in a.universe}
    right = {e: "r." + e for e in b.universe}
    universe = list(left.values()) + list(right.values())
    rels = {}
    for n in a.vocab.names:
        rels[n] = [tuple(left[x] for x in t) for t in a.relations[n]] + [
            tuple(right[x] for x in t) for t in b.relations[n]
        ]
    return a.with_relations(universe, rels), left, right


def disjoint_union_many(parts: Sequence[Structure], vocab: Vocabulary | None = None):
    """Left fold of binary disjoint unions; returns the union and, for each
    part, its injection into the result."""
    if not parts:
        if vocab is None:
            raise ValueError("empty union needs a vocabulary")
        return Structure(vocab, []), []
    acc = parts[0]
    maps = [{e: e for e in acc.universe}]
    for part in parts[1:]:
        acc, left, right = disjoint_union_with_maps(acc, part)
        maps = [{e: left[v] for e, v in m.items()} for m in maps]
        maps.append(right)
    return acc, maps


def gaifman_graph(a: Structure) -> Graph:
    edges = set()
    for ts in a.relations.values():
        for t in ts:
            for x, y in combinations(set(t), 2):
                edges.add(frozenset((x, y)))
    return Graph(a.universe, frozenset(edges))


def graph_to_structure(g: Graph) -> Structure:
    rels = []
    for e in g.edges:
        x, y = tuple(e)
        rels.append((x, y))
        rels.append((y, x))
    return Structure(GRAPH_VOCAB, g.vertices, {"E": rels}, check=False)


def structure_to_graph(a: Structure) -> Graph:
    """Read an ``E/2`` structure as a graph; E is symmetrised, loops rejected."""
    if "E" not in a.vocab or a.vocab.arity["E"] != 2:
        raise LoadError("graph structures need the symbol E/2")
    for x, y in a.relations["E"]:
        if x == y:
            raise LoadError(f"loop at {x}")
    return Graph(a.universe, frozenset(frozenset(t) for t in a.relations["E"]))


def _as_graph(x: Structure | Graph) -> Graph:
    return x if isinstance(x, Graph) else gaifman_graph(x)


def bfs_distances(g: Graph, source: Element, limit: int | None = None) -> dict[Element, int]:
    if source not in g.adj:
        raise UnknownElement(source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distance(g: Graph, u: Element, v: Element) -> float:
    """Shortest-path length, ``inf`` when disconnected."""
    if v not in g.adj:
        raise UnknownElement(v)
    return bfs_distances(g, u).get(v, INF)


def ball(g: Graph, center: Element, r: int) -> set[Element]:
    return set(bfs_distances(g, center, limit=r))


def neighborhood(a: Structure | Graph, center: Element, r: int):
    """``(N_r(center), induced substructure or subgraph on it)``."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    g = _as_graph(a)
    members = ball(g, center, r)
    if isinstance(a, Graph):
        return members, a.induced(members)
    return members, a.restrict(members)


def enumerate_substructures(
    a: Structure,
    predicate: Callable[[Structure], bool] | None = None,
    budget: int | None = None,
) -> Iterator[Structure]:
    """Proper substructures of ``a``, breadth first from the top.

    From each structure the one-step children are generated as all
    single-fact deletions (symbol then tuple order) followed by all
    single-element deletions with their incident facts. Each distinct
    substructure is produced once. ``predicate`` filters what is yielded but
    not what is explored; ``budget`` caps how many are yielded.
    """
    if budget is not None and budget <= 0:
        return
    seen = {a.key()}
    queue = deque([a])
    produced = 0
    while queue:
        cur = queue.popleft()
        for child in one_step_children(cur):
            k = child.key()
            if k in seen:
                continue
            seen.add(k)
            queue.append(child)
            if predicate is None or predicate(child):
                yield child
                produced += 1
                if budget is not None and produced >= budget:
                    return


def one_step_children(a: Structure) -> Iterator[Structure]:
    for name, t in a.tuples():
        yield a.remove_fact(name, t)
    for e in a.universe:
        yield a.remove_element(e)


def count_substructures(a: Structure) -> int:
    """Number of substructures of ``a`` (including ``a``), by counting, for
    every element subset, the facts it supports. Exponential in |A|."""
    facts = list(a.tuples())
    idx = a.index
    fact_masks = []
    for _, t in facts:
        m = 0
        for x in t:
            m |= 1 << idx[x]
        fact_masks.append(m)
    total = 0
    for sub in range(1 << len(a.universe)):
        inside = sum(1 for m in fact_masks if m & ~sub == 0)
        total += 1 << inside
    return total


# ---------------------------------------------------------------------------
# text format


def format_structure(a: Structure) -> str:
    lines = [f"vocab {n}/{k}" for n, k in a.vocab.symbols]
    lines += [f"element {e}" for e in a.universe]
    for name, t in a.tuples():
        lines.append(" ".join(["rel", name, *t]))
    return "\n".join(lines) + "\n"


def parse_structure(text: str) -> Structure:
    symbols: list[tuple[str, int]] = []
    elements: list[str] = []
    facts: list[tuple[int, str, tuple[str, ...]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        if head == "vocab":
            if len(rest) != 1 or "/" not in rest[0]:
                raise LoadError(f"line {lineno}: expected 'vocab Name/arity'")
            name, _, ar = rest[0].partition("/")
            try:
                symbols.append((name, int(ar)))
            except ValueError:
                raise LoadError(f"line {lineno}: bad arity {ar!r}") from None
        elif head == "element":
            if len(rest) != 1:
                raise LoadError(f"line {lineno}: expected 'element id'")
            elements.append(rest[0])
        elif head == "rel":
            if not rest:
                raise LoadError(f"line {lineno}: 'rel' needs a symbol")
            facts.append((lineno, rest[0], tuple(rest[1:])))
        else:
            raise LoadError(f"line {lineno}: unknown directive {head!r}")
    try:
        vocab = Vocabulary(tuple(symbols))
    except ValueError as exc:
        raise LoadError(str(exc)) from None
    members = set(elements)
    rels: dict[str, list] = {n: [] for n in vocab.names}
    for lineno, name, t in facts:
        if name not in vocab:
            raise LoadError(f"line {lineno}: unknown symbol {name}")
        if len(t) != vocab.arity[name]:
            raise LoadError(f"line {lineno}: {name} has arity {vocab.arity[name]}, got {len(t)}")
        for x in t:
            if x not in members:
                raise LoadError(f"line {lineno}: undeclared element {x}")
        rels[name].append(t)
    return Structure(vocab, elements, rels, check=False)


def load_structure(path) -> Structure:
    with open(path, encoding="utf-8") as fh:
        return parse_structure(fh.read())


def load_graph(path) -> Graph:
    return structure_to_graph(load_structure(path))


def format_graph(g: Graph) -> str:
    return format_structure(graph_to_structure(g))
