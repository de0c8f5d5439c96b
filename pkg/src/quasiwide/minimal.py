"""Minimal models in a class, existential-positive reconstruction from
them, and the tuple-removal construction driven by basic local sentences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .homomorphism import find_embedding, is_hom
from .iso import canonical_form, canonical_structure
from .logic.evaluate import compile_formula, evaluate
from .logic.formula import (
    BOTTOM,
    Atom,
    Exists,
    Formula,
    Var,
    conj,
    disj,
    free_vars,
    normalize,
    rename_free,
)
from .logic.locality import BasicLocalSentence, dist_formula, relativize
from .scattered import is_r_scattered
from .structures import (
    GRAPH_VOCAB,
    Structure,
    Vocabulary,
    count_substructures,
    disjoint_union_many,
    disjoint_union_with_maps,
    enumerate_substructures,
    gaifman_graph,
    one_step_children,
)


# ---------------------------------------------------------------------------
# classes


def _is_graph(a: Structure) -> bool:
    e = a.relations.get("E", frozenset())
    return all(x != y and (y, x) in e for x, y in e)


def _graph_children(a: Structure) -> Iterable[Structure]:
    done = set()
    for x, y in sorted(a.relations["E"]):
        pair = frozenset((x, y))
        if pair in done:
            continue
        done.add(pair)
        yield a.remove_fact("E", (x, y)).remove_fact("E", (y, x))
    for e in a.universe:
        yield a.remove_element(e)


def _complete_structure(vocab: Vocabulary, n: int) -> Structure:
    from itertools import product

    u = [str(i) for i in range(1, n + 1)]
    return Structure(vocab, u, {name: list(product(u, repeat=ar)) for name, ar in vocab.symbols})


@dataclass(frozen=True)
class ClassSpec:
    """A class of finite structures, described by a membership test, its
    maximal members up to a size, and the class-maximal proper
    substructures of a member."""

    name: str
    vocab: Vocabulary
    contains: Callable[[Structure], bool]
    maximal: Callable[[int], list[Structure]]
    children: Callable[[Structure], Iterable[Structure]]
    substructure_closed: bool = True
    union_closed: bool = True
    items: tuple = ()

    @classmethod
    def graphs(cls) -> "ClassSpec":
        return cls(
            "graphs",
            GRAPH_VOCAB,
            lambda a: a.vocab == GRAPH_VOCAB and _is_graph(a),
            lambda n: [_complete_graph_structure(n)],
            _graph_children,
            substructure_closed=False,
        )

    @classmethod
    def all_structures(cls, vocab: Vocabulary) -> "ClassSpec":
        return cls(
            f"all[{vocab}]",
            vocab,
            lambda a: a.vocab == vocab,
            lambda n: [_complete_structure(vocab, n)],
            one_step_children,
        )

    @classmethod
    def class_S(cls) -> "ClassSpec":
        from .counterexample import ORDER_VOCAB, in_class_S, make_Ln

        def maximal(n: int) -> list[Structure]:
            out = []
            for parts in _partitions(n):
                out.append(disjoint_union_many([make_Ln(c) for c in parts])[0])
            return out

        return cls("S", ORDER_VOCAB, in_class_S, maximal, one_step_children)

    @classmethod
    def corpus(cls, items: Sequence[Structure]) -> "ClassSpec":
        """The finite class of the given structures up to isomorphism."""
        if not items:
            raise ValueError("empty corpus")
        vocab = items[0].vocab
        keys = {canonical_form(a)[0] for a in items}
        return cls(
            "corpus",
            vocab,
            lambda a: a.vocab == vocab and canonical_form(a)[0] in keys,
            lambda n: [a for a in items if len(a.universe) <= n],
            lambda a: (),
            substructure_closed=False,
            union_closed=False,
            items=tuple(items),
        )


def _complete_graph_structure(n: int) -> Structure:
    u = [str(i) for i in range(1, n + 1)]
    return Structure(GRAPH_VOCAB, u, {"E": [(x, y) for x in u for y in u if x != y]})


def _partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# minimality


def _proper_embedding(b: Structure, a: Structure) -> bool:
    """``b`` is isomorphic to a proper substructure of ``a``."""
    if len(b.universe) > len(a.universe) or b.fact_count() > a.fact_count():
        return False
    if len(b.universe) == len(a.universe) and b.fact_count() == a.fact_count():
        return False
    return find_embedding(b, a) is not None


def is_minimal_model(a: Structure, phi: Formula, cls: ClassSpec, *, budget: int = 50_000) -> bool:
    """``a`` is in the class, models ``phi``, and no proper substructure in
    the class does.

    Below ``budget`` substructures every one is checked. Above it only the
    class-maximal proper substructures are checked, which is exact when
    the models of ``phi`` in the class are closed upwards, as they are for
    sentences preserved under homomorphisms.
    """
    if not cls.contains(a):
        return False
    check = compile_formula(phi)
    if not check.check(a):
        return False
    if cls.items:
        return not any(
            check.check(b) and _proper_embedding(b, a) for b in cls.items
        )
    # members of a substructure-closed class need no membership test below them
    inside = (lambda b: True) if cls.substructure_closed else cls.contains
    if count_substructures(a) <= budget:
        return not any(check.check(b) for b in enumerate_substructures(a, inside))
    return not any(check.check(b) for b in cls.children(a) if inside(b))


def enumerate_minimal_models(
    phi: Formula, cls: ClassSpec, size_bound: int, *, cap: int = 8
) -> list[Structure]:
    """Minimal models with at most ``size_bound`` elements, one per
    isomorphism type, relabelled ``1..n`` and sorted by size.

    Walks down from each maximal member through class-maximal proper
    substructures that are still models; a model none of whose children
    is a model is minimal. Exhaustive for the finite corpus class and for
    sentences whose models are closed upwards in the class.
    """
    check = compile_formula(phi)
    found: dict = {}
    if cls.items:
        for a in cls.items:
            if len(a.universe) <= size_bound and is_minimal_model(a, phi, cls):
                found.setdefault(canonical_form(a, cap)[0], a)
    else:
        inside = (lambda b: True) if cls.substructure_closed else cls.contains
        seen = set()
        stack = [m for m in cls.maximal(size_bound) if check.check(m)]
        for m in stack:
            seen.add(m.key())
        while stack:
            cur = stack.pop()
            below = False
            for child in cls.children(cur):
                if not inside(child) or not check.check(child):
                    continue
                below = True
                if child.key() not in seen:
                    seen.add(child.key())
                    stack.append(child)
            if not below:
                found.setdefault(canonical_form(cur, cap)[0], cur)
    reps = [canonical_structure(found[k], cap) for k in found]
    return sorted(reps, key=lambda s: (len(s.universe), s.fact_count(), canonical_form(s, cap)[0]))


def positive_diagram(a: Structure, stem: str = "x") -> Formula:
    """``E x1 .. E xn`` of the facts of ``a``, each atom placed right
    under the quantifier of its last variable."""
    names = {e: f"{stem}{i + 1}" for i, e in enumerate(a.universe)}
    pos = {e: i for i, e in enumerate(a.universe)}
    levels: list[list[Formula]] = [[] for _ in range(len(a.universe) + 1)]
    for name, t in a.tuples():
        lvl = max((pos[x] + 1 for x in t), default=0)
        levels[lvl].append(Atom(name, tuple(Var(names[x]) for x in t)))
    body = None
    for i in range(len(a.universe), 0, -1):
        parts = levels[i] + ([body] if body is not None else [])
        body = Exists(names[a.universe[i - 1]], conj(parts))
    return conj(levels[0] + ([body] if body is not None else []))


def ep_from_minimal_models(models: Sequence[Structure]) -> Formula:
    """Disjunction of positive diagrams; false for an empty list."""
    return disj([positive_diagram(a) for a in models]) if models else BOTTOM


# ---------------------------------------------------------------------------
# tuple-removal construction


@dataclass(frozen=True)
class BasicLocalProfile:
    vocab: Vocabulary
    sentences: tuple[BasicLocalSentence, ...]

    @property
    def s(self) -> int:
        return len(self.sentences)

    @property
    def t(self) -> int:
        return max((b.radius for b in self.sentences), default=0)

    @property
    def n(self) -> int:
        return max((b.width for b in self.sentences), default=1)

    @property
    def r(self) -> int:
        return 2 * self.t

    @property
    def m(self) -> int:
        return 2**self.s + 1


def ag_theta(profile: BasicLocalProfile, i: int, y: str = "y") -> Formula:
    """``E x (delta(x, y) <= t_i & psi_i relativised to N_{t_i}(x))``."""
    b = profile.sentences[i]
    vocab = profile.vocab
    psi = normalize(b.local_condition, avoid={"x", y})
    fv = sorted(free_vars(psi))
    if fv:
        psi = rename_free(psi, {fv[0]: "x"})
    local = relativize(psi, "x", b.radius, vocab)
    return Exists("x", conj([dist_formula(vocab, b.radius, "x", y), local]))


class PreconditionError(ValueError):
    pass


@dataclass
class ConstructionTrace:
    theta_vectors: dict
    pair: tuple
    removed: tuple | None  # (symbol, tuple) or None when an element was dropped
    dropped_element: str | None
    copies: int
    a: Structure
    b: Structure
    b_n: Structure
    a_n: Structure
    inclusion: dict
    fold: dict
    truth: dict = field(default_factory=dict)

    @property
    def agreement(self) -> bool:
        return self.truth["A_n"] == self.truth["B_n"]

    @property
    def certified(self) -> bool:
        return is_hom(self.a, self.a_n, self.inclusion) and is_hom(self.b_n, self.b, self.fold)

    def lines(self) -> list[str]:
        out = ["theta vectors:"]
        for c, vec in self.theta_vectors.items():
            out.append(f"  {c}: {''.join('1' if x else '0' for x in vec)}")
        out.append(f"pigeonhole pair: {self.pair[0]} {self.pair[1]}")
        if self.removed is not None:
            name, t = self.removed
            out.append(f"removed fact: {name}({','.join(t)})")
        else:
            out.append(f"no fact contains {self.pair[0]}; removed the element")
        out.append(f"copies n = {self.copies}")
        out.append(f"inclusion A -> A_n certified: {is_hom(self.a, self.a_n, self.inclusion)}")
        out.append(f"fold B_n -> B certified: {is_hom(self.b_n, self.b, self.fold)}")
        for k in ("A", "B", "A_n", "B_n"):
            out.append(f"{k} |= phi: {self.truth[k]}")
        if self.agreement:
            out.append("A_n and B_n agree on phi")
        else:
            out.append(
                "A_n and B_n DISAGREE on phi: either the profile does not "
                "capture phi or there is a bug; inspect by hand"
            )
        return out


def ag_construct(
    a: Structure,
    phi: Formula,
    profile: BasicLocalProfile,
    scattered: Sequence[str],
) -> ConstructionTrace:
    scattered = [str(c) for c in scattered]
    if len(set(scattered)) != len(scattered) or len(scattered) != profile.m:
        raise PreconditionError(f"need {profile.m} distinct scattered elements, got {len(scattered)}")
    g = gaifman_graph(a)
    if not set(scattered) <= set(a.universe):
        raise PreconditionError("scattered elements must belong to the structure")
    if not is_r_scattered(g, scattered, profile.r):
        raise PreconditionError(f"elements are not {profile.r}-scattered")
    if not evaluate(a, phi):
        raise PreconditionError("the structure does not model phi")

    thetas = [compile_formula(ag_theta(profile, i)) for i in range(profile.s)]
    vectors = {c: tuple(th.check(a, {"y": c}) for th in thetas) for c in scattered}
    pair = None
    for i, j in combinations(range(len(scattered)), 2):
        if vectors[scattered[i]] == vectors[scattered[j]]:
            pair = (scattered[i], scattered[j])
            break
    assert pair is not None, "pigeonhole guarantees a repeated vector"
    ci = pair[0]
    through = sorted((name, t) for name, t in a.tuples() if ci in t)
    if through:
        removed = through[0]
        b = a.remove_fact(*removed)
        dropped = None
    else:
        removed = None
        b = a.remove_element(ci)
        dropped = ci

    n = profile.n
    b_n, maps = disjoint_union_many([b] * n, a.vocab)
    fold = {}
    for mp in maps:
        for orig, img in mp.items():
            fold[img] = orig
    a_n, left, _ = disjoint_union_with_maps(a, b_n)
    trace = ConstructionTrace(
        theta_vectors=vectors,
        pair=pair,
        removed=removed,
        dropped_element=dropped,
        copies=n,
        a=a,
        b=b,
        b_n=b_n,
        a_n=a_n,
        inclusion=dict(left),
        fold=fold,
    )
    check = compile_formula(phi)
    trace.truth = {"A": check.check(a), "B": check.check(b), "A_n": check.check(a_n), "B_n": check.check(b_n)}
    return trace
