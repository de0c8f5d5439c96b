"""Linear orders with endpoints, the class they generate under
substructures and disjoint unions, and a sentence that is preserved
under homomorphisms on that class without being equivalent to an
existential-positive sentence there.

Two versions of the sentence are provided. ``phi_order_literal`` follows
the displayed definition, where "no element strictly between" is checked
against the whole structure. That version accepts e.g. L_4 with O(1,3)
removed, which contains no complete order. ``phi_order`` checks
betweenness only inside the interval ``[x, y]`` and defines exactly the
members that contain a complete order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from .homomorphism import find_embedding, find_homomorphism, is_hom
from .iso import canonical_form
from .logic.evaluate import compile_formula
from .logic.formula import Formula
from .logic.parser import parse
from .structures import (
    Structure,
    Vocabulary,
    disjoint_union_many,
    enumerate_substructures,
    gaifman_graph,
    is_substructure,
)

ORDER_VOCAB = Vocabulary.parse("O/2,S/2,P/1")


@lru_cache(maxsize=None)
def make_Ln(n: int) -> Structure:
    if n < 1:
        raise ValueError("n must be at least 1")
    u = [str(i) for i in range(1, n + 1)]
    rels = {
        "O": [(u[i], u[j]) for i in range(n) for j in range(i + 1, n)],
        "S": [(u[i], u[i + 1]) for i in range(n - 1)],
        "P": [(u[0],), (u[-1],)],
    }
    return Structure(ORDER_VOCAB, u, rels)


@dataclass(frozen=True)
class SClassMember:
    """Disjoint union of components, each a substructure of its tagged L_m."""

    components: tuple[tuple[Structure, int], ...]

    @property
    def structure(self) -> Structure:
        return disjoint_union_many([c for c, _ in self.components], ORDER_VOCAB)[0]

    def valid(self) -> bool:
        return all(is_substructure(c, make_Ln(m)) for c, m in self.components)


def sample_S(
    seed: int,
    max_n: int,
    max_components: int,
    *,
    p_element: float = 0.2,
    p_tuple: float = 0.2,
) -> SClassMember:
    """Random member: each component is L_m with elements and then facts
    dropped independently with the given probabilities."""
    rng = random.Random(seed)
    comps = []
    for _ in range(rng.randint(1, max_components)):
        m = rng.randint(1, max_n)
        full = make_Ln(m)
        keep = [e for e in full.universe if rng.random() >= p_element]
        sub = full.restrict(keep)
        rels = {n: [t for t in sorted(ts) if rng.random() >= p_tuple] for n, ts in sub.relations.items()}
        comps.append((Structure(ORDER_VOCAB, keep, rels), m))
    return SClassMember(tuple(comps))


def in_class_S(a: Structure) -> bool:
    """Every Gaifman component with c elements embeds into L_c.

    A substructure of L_m on c elements is, after order-preserving
    renumbering, a substructure of L_c on its full universe, so this
    decides membership in the closure.
    """
    if a.vocab != ORDER_VOCAB:
        return False
    g = gaifman_graph(a)
    seen: set = set()
    for v in a.universe:
        if v in seen:
            continue
        comp = _component(g, v)
        seen |= comp
        part = a.restrict(comp)
        if find_embedding(part, make_Ln(len(comp))) is None:
            return False
    return True


def _component(g, v) -> set:
    comp = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w not in comp:
                comp.add(w)
                stack.append(w)
    return comp


# ---------------------------------------------------------------------------
# formulas


def _le(a: str, b: str) -> str:
    return f"(O({a},{b}) | {a} = {b})"


def _beta(x: str, y: str, z: str) -> str:
    return f"({_le(x, z)} & {_le(z, y)})"


def _lambda(x: str, y: str) -> str:
    return (
        f"(O({x},{y}) & A z1 A z2 (({_beta(x, y, 'z1')} & {_beta(x, y, 'z2')})"
        f" -> ({_le('z1', 'z2')} | {_le('z2', 'z1')})))"
    )


def _nu(z1: str, z2: str) -> str:
    return f"(O({z1},{z2}) & A w !(O({z1},w) & O(w,{z2})))"


def _nu_interval(x: str, y: str, z1: str, z2: str) -> str:
    return f"(O({z1},{z2}) & A w !({_beta(x, y, 'w')} & O({z1},w) & O(w,{z2})))"


def _phi(nu: str) -> str:
    return (
        f"E x E y (P(x) & P(y) & {_lambda('x', 'y')} & A z1 A z2 "
        f"(({_beta('x', 'y', 'z1')} & {_beta('x', 'y', 'z2')} & {nu}) -> S(z1,z2)))"
    )


@lru_cache(maxsize=None)
def formula_library() -> dict[str, Formula]:
    """``beta(x,y,z)``, ``lambda(x,y)``, ``nu(z1,z2)``, ``nu_interval``,
    ``phi_order`` and ``phi_order_literal``."""
    v = ORDER_VOCAB
    return {
        "beta": parse(_beta("x", "y", "z"), v),
        "lambda": parse(_lambda("x", "y"), v),
        "nu": parse(_nu("z1", "z2"), v),
        "nu_interval": parse(_nu_interval("x", "y", "z1", "z2"), v),
        "phi_order": parse(_phi(_nu_interval("x", "y", "z1", "z2")), v),
        "phi_order_literal": parse(_phi(_nu("z1", "z2")), v),
    }


def contains_complete_order(a: Structure | SClassMember) -> bool:
    """Some L_n, n >= 2, is a substructure (up to isomorphism).

    Direct search: start at a P-element, walk S-edges through fresh
    elements keeping O complete on the walk, succeed on reaching another
    P-element.
    """
    if isinstance(a, SClassMember):
        a = a.structure
    succ: dict = {}
    for x, y in a.relations["S"]:
        succ.setdefault(x, []).append(y)
    order = a.relations["O"]
    ends = {t[0] for t in a.relations["P"]}

    def walk(path: list) -> bool:
        for nxt in sorted(succ.get(path[-1], ())):
            if nxt in path or any((p, nxt) not in order for p in path):
                continue
            path.append(nxt)
            if nxt in ends or walk(path):
                return True
            path.pop()
        return False

    return any(walk([s]) for s in sorted(ends))


# ---------------------------------------------------------------------------
# exhaustive members


def substructure_types(m: int) -> list[Structure]:
    """Substructures of L_m up to isomorphism, empty one excluded."""
    full = make_Ln(m)
    out = {}
    for sub in [full, *enumerate_substructures(full)]:
        if not sub.universe:
            continue
        key = canonical_form(sub)[0]
        out.setdefault(key, sub)
    return [out[k] for k in sorted(out)]


def enumerate_S_members(max_size: int, max_m: int) -> list[Structure]:
    """All disjoint unions of substructures of L_1..L_max_m with at most
    ``max_size`` elements, one per multiset of connected component types
    (a disconnected part splits into its connected pieces anyway)."""
    types = {}
    for m in range(1, max_m + 1):
        for t in substructure_types(m):
            if len(_component(gaifman_graph(t), t.universe[0])) == len(t.universe):
                types.setdefault(canonical_form(t)[0], t)
    comps = [types[k] for k in sorted(types)]
    out = [Structure(ORDER_VOCAB, [])]

    def rec(start: int, chosen: list, size: int):
        for i in range(start, len(comps)):
            c = comps[i]
            if size + len(c.universe) > max_size:
                continue
            chosen.append(c)
            out.append(disjoint_union_many(chosen)[0])
            rec(i, chosen, size + len(c.universe))
            chosen.pop()

    rec(0, [], 0)
    return out


def refute_ep_candidates(candidates, n_bound: int = 6) -> list[tuple[Formula, Structure | None]]:
    """Pair each existential-positive sentence with a class-S member on
    which it disagrees with ``phi_order``, or None.

    Searched among L_2..L_n_bound and their one-fact deletions. No such
    deletion contains a complete order, and a short ep sentence true on a
    long L_n leaves some fact unused, so every candidate with fewer atoms
    than L_n_bound has facts is caught.
    """
    phi = compile_formula(formula_library()["phi_order"])
    pool = []
    for n in range(2, n_bound + 1):
        ln = make_Ln(n)
        pool.append(ln)
        pool.extend(ln.remove_fact(name, t) for name, t in ln.tuples())
    truth = [phi.check(s) for s in pool]
    out = []
    for psi in candidates:
        check = compile_formula(psi)
        found = next((s for s, t in zip(pool, truth) if check.check(s) != t), None)
        out.append((psi, found))
    return out


# ---------------------------------------------------------------------------
# lemma checks


@dataclass
class LemmaResult:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    note: str = ""

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class LemmaReport:
    results: list[LemmaResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            status = "PASS" if r.ok else "FAIL"
            extra = f" ({r.note})" if r.note else ""
            out.append(f"{r.name}: {status} checked={r.checked} violations={len(r.violations)}{extra}")
        return out


def _all_maps_homs(n: int, m: int):
    from itertools import product

    a, b = make_Ln(n), make_Ln(m)
    for img in product(b.universe, repeat=n):
        h = dict(zip(a.universe, img))
        if is_hom(a, b, h):
            yield h


def lemma_single_order(n_bound: int, exhaustive_bound: int = 4) -> LemmaResult:
    """Homs from L_n into substructures of L_m only hit L_m itself, n = m.

    Direct sweep over all substructures of L_m for m <= exhaustive_bound;
    for all n, m <= n_bound every hom L_n -> L_m is listed by brute force
    and must be the identity with n = m. Since a hom into A <= L_m is also
    a hom into L_m and then covers every fact of L_m, that settles every
    substructure as well.
    """
    res = LemmaResult("single order")
    for m in range(1, min(n_bound, exhaustive_bound) + 1):
        full = make_Ln(m)
        subs = [full, *enumerate_substructures(full)]
        for n in range(2, min(n_bound, exhaustive_bound) + 1):
            ln = make_Ln(n)
            for sub in subs:
                res.checked += 1
                h = find_homomorphism(ln, sub)
                if h is None:
                    continue
                if not (n == m and sub == full):
                    res.violations.append((n, m, sub, h))
    for n in range(2, n_bound + 1):
        for m in range(1, n_bound + 1):
            for h in _all_maps_homs(n, m):
                res.checked += 1
                if n != m or any(k != v for k, v in h.items()):
                    res.violations.append((n, m, None, h))
    res.note = f"substructure sweep m<={min(n_bound, exhaustive_bound)}, hom listing n,m<={n_bound}"
    return res


def default_sample(count: int, seed: int, max_n: int = 6, max_components: int = 3) -> list[SClassMember]:
    """Members drawn with deletion rates cycling through 0, 0.05, 0.2, 0.5
    so near-complete and sparse members both occur."""
    rates = (0.0, 0.05, 0.2, 0.5)
    out = []
    for i in range(count):
        p = rates[i % len(rates)]
        out.append(sample_S(seed * 1_000_003 + i, max_n, max_components, p_element=p / 2, p_tuple=p))
    return out


def check_lemmas(
    sample_size: int = 500,
    seed: int = 0,
    n_bound: int = 6,
    *,
    window: int = 3,
    variant: str = "phi_order",
) -> LemmaReport:
    """Run the five lemma checks; ``variant`` picks the sentence from
    :func:`formula_library` (``phi_order`` or ``phi_order_literal``)."""
    from .homomorphism import check_preservation
    from .minimal import ClassSpec, is_minimal_model

    phi = formula_library()[variant]
    check = compile_formula(phi)
    members = default_sample(sample_size, seed)
    structs = [mb.structure for mb in members]

    r51 = lemma_single_order(n_bound)

    r52 = LemmaResult("order transfer")
    complete = [contains_complete_order(s) for s in structs]
    for i, a in enumerate(structs):
        if not complete[i]:
            continue
        targets = [(j % len(structs)) for j in range(i + 1, i + 1 + window)]
        for j in targets:
            for b, b_complete in (
                (structs[j], complete[j]),
                (disjoint_union_many([structs[j], a])[0], None),
            ):
                h = find_homomorphism(a, b)
                if h is None:
                    continue
                r52.checked += 1
                if not (b_complete if b_complete is not None else contains_complete_order(b)):
                    r52.violations.append((i, j, h))

    r53 = LemmaResult("definability")
    for i, s in enumerate(structs):
        r53.checked += 1
        if check.check(s) != complete[i]:
            r53.violations.append(i)
    r53.note = f"{sum(complete)} of {len(structs)} contain a complete order"

    r54 = LemmaResult("preservation")
    r54.violations = check_preservation(phi, structs)
    r54.checked = sum(complete) * (len(structs) - sum(complete))

    r55 = LemmaResult("minimal models")
    cls = ClassSpec.class_S()
    for n in range(2, n_bound + 1):
        r55.checked += 1
        if not is_minimal_model(make_Ln(n), phi, cls):
            r55.violations.append(n)
    return LemmaReport([r51, r52, r53, r54, r55])
