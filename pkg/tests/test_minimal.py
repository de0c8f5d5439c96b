import random
from itertools import product

import pytest

from quasiwide.counterexample import ORDER_VOCAB, formula_library, make_Ln
from quasiwide.generators import all_structures, path_graph, random_structure
from quasiwide.homomorphism import check_preservation
from quasiwide.iso import SizeCapExceeded, canonical_form, canonical_structure, isomorphic
from quasiwide.logic.evaluate import evaluate
from quasiwide.logic.formula import BOTTOM, is_existential_positive
from quasiwide.logic.locality import basic_local_sentence
from quasiwide.logic.parser import parse
from quasiwide.minimal import (
    BasicLocalProfile,
    ClassSpec,
    PreconditionError,
    ag_construct,
    ag_theta,
    enumerate_minimal_models,
    ep_from_minimal_models,
    is_minimal_model,
    positive_diagram,
)
from quasiwide.structures import (
    GRAPH_VOCAB,
    Structure,
    disjoint_union,
    distance,
    gaifman_graph,
    graph_to_structure,
    is_substructure,
)

from conftest import E_ONLY, EP, ag_instance

PHI = formula_library()["phi_order"]


def test_canonical_form():
    a = make_Ln(4)
    b = a.rename({"1": "d", "2": "c", "3": "b", "4": "a"})
    assert isomorphic(a, b)
    assert canonical_form(a)[0] == canonical_form(b)[0]
    assert canonical_structure(b) == canonical_structure(a)
    assert not isomorphic(a, a.remove_fact("O", ("1", "3")))
    with pytest.raises(SizeCapExceeded):
        canonical_form(make_Ln(9))


def test_isomorphism_invariant_under_random_relabel():
    rng = random.Random(0)
    for _ in range(100):
        a = random_structure(rng, EP, rng.randint(1, 5), 0.3)
        perm = list(a.universe)
        rng.shuffle(perm)
        b = a.rename(dict(zip(a.universe, perm)))
        assert canonical_form(a)[0] == canonical_form(b)[0]


def test_is_minimal_examples():
    cls = ClassSpec.class_S()
    for n in range(2, 6):
        assert is_minimal_model(make_Ln(n), PHI, cls)
    assert not is_minimal_model(disjoint_union(make_Ln(3), make_Ln(3)), PHI, cls)
    assert not is_minimal_model(make_Ln(1), PHI, cls)


def test_class_membership():
    cls = ClassSpec.class_S()
    assert cls.contains(disjoint_union(make_Ln(3), make_Ln(2).remove_fact("S", ("1", "2"))))
    cyc = Structure(ORDER_VOCAB, ["1", "2"], {"O": [("1", "2"), ("2", "1")]})
    assert not cls.contains(cyc)
    assert ClassSpec.graphs().contains(graph_to_structure(path_graph(3)))
    assert not ClassSpec.graphs().contains(Structure(GRAPH_VOCAB, ["1", "2"], {"E": [("1", "2")]}))


def test_enumerate_examples():
    edge = enumerate_minimal_models(parse("E x E y E(x,y)", GRAPH_VOCAB), ClassSpec.graphs(), 4)
    assert len(edge) == 1
    assert len(edge[0].universe) == 2 and edge[0].fact_count() == 2
    assert enumerate_minimal_models(parse("E x !(x = x)", EP), ClassSpec.all_structures(EP), 3) == []


def test_enumerate_all_structures_matches_bruteforce():
    # minimal models of an ep sentence over all {E/2} structures of size <= 3
    phi = parse("E x E y (E(x,y) & E(y,x))", E_ONLY)
    cls = ClassSpec.all_structures(E_ONLY)
    found = enumerate_minimal_models(phi, cls, 3)
    brute = {}
    for n in range(0, 4):
        for a in all_structures(E_ONLY, n):
            if is_minimal_model(a, phi, cls):
                brute.setdefault(canonical_form(a)[0], a)
    assert sorted(canonical_form(a)[0] for a in found) == sorted(brute)
    # a loop, and a two-cycle
    assert [len(a.universe) for a in found] == [1, 2]


def test_enumerated_models_are_minimal():
    cls = ClassSpec.class_S()
    found = enumerate_minimal_models(PHI, cls, 5)
    assert [len(a.universe) for a in found] == [2, 3, 4, 5]
    for a in found:
        assert is_minimal_model(a, PHI, cls)
        assert isomorphic(a, make_Ln(len(a.universe)))


def test_corpus_class():
    items = [make_Ln(2), make_Ln(3), disjoint_union(make_Ln(2), make_Ln(3))]
    cls = ClassSpec.corpus(items)
    found = enumerate_minimal_models(PHI, cls, 6)
    assert [len(a.universe) for a in found] == [2, 3]
    with pytest.raises(ValueError):
        ClassSpec.corpus([])


def test_positive_diagram_and_ep():
    edge = graph_to_structure(path_graph(2))
    psi = ep_from_minimal_models([edge])
    assert is_existential_positive(psi)
    assert psi == parse("E x1 E x2 (E(x1,x2) & E(x2,x1))", GRAPH_VOCAB)
    assert ep_from_minimal_models([]) == BOTTOM
    d = positive_diagram(make_Ln(3))
    assert evaluate(make_Ln(3), d) and not evaluate(make_Ln(3).remove_fact("O", ("1", "3")), d)


def test_ep_preserved_on_samples():
    psi = ep_from_minimal_models([make_Ln(n) for n in range(2, 5)])
    from quasiwide.counterexample import default_sample

    sample = [m.structure for m in default_sample(60, 3)]
    assert check_preservation(psi, sample) == []


# -- profiles and the construction -----------------------------------------


def test_profile_parameters():
    s1 = basic_local_sentence(2, 1, parse("P(x)", EP), EP)
    s2 = basic_local_sentence(3, 2, parse("E y E(x,y)", EP), EP)
    prof = BasicLocalProfile(EP, (s1, s2))
    assert (prof.s, prof.t, prof.n, prof.r, prof.m) == (2, 2, 3, 4, 5)


def test_theta_radius_zero_is_psi():
    prof = BasicLocalProfile(EP, (basic_local_sentence(1, 0, parse("P(x)", EP), EP),))
    th = ag_theta(prof, 0)
    for n in range(1, 3):
        for a in all_structures(EP, n):
            for c in a.universe:
                assert evaluate(a, th, {"y": c}) == ((c,) in a.relations["P"])


def test_theta_on_path():
    g = path_graph(6)
    a = Structure(EP, g.vertices, {"E": graph_to_structure(g).relations["E"], "P": [("1",), ("6",)]})
    prof = BasicLocalProfile(EP, (basic_local_sentence(1, 1, parse("P(x)", EP), EP),))
    th = ag_theta(prof, 0)
    got = {c for c in a.universe if evaluate(a, th, {"y": c})}
    want = {c for c in a.universe if min(distance(g, c, "1"), distance(g, c, "6")) <= 1}
    assert got == want


def test_theta_oracle_small():
    psi = parse("E z (E(x,z) & P(z))", EP)
    prof = BasicLocalProfile(EP, (basic_local_sentence(1, 1, psi, EP),))
    th = ag_theta(prof, 0)
    from quasiwide.structures import neighborhood

    for a in list(all_structures(EP, 3))[::3]:
        g = gaifman_graph(a)
        for c in a.universe:
            want = any(
                distance(g, x, c) <= 1 and evaluate(neighborhood(a, x, 1)[1], psi, {"x": x})
                for x in a.universe
            )
            assert evaluate(a, th, {"y": c}) == want


def test_pigeonhole_combinatorics():
    # any 2^s + 1 vectors in {0,1}^s repeat; check every choice for s <= 2
    for s in range(1, 3):
        cube = list(product([0, 1], repeat=s))
        for vectors in product(cube, repeat=2**s + 1):
            assert len(set(vectors)) < len(vectors)


def test_ag_construct_instances():
    rng = random.Random(5)
    for _ in range(25):
        prof, a, phi, sc = ag_instance(rng)
        tr = ag_construct(a, phi, prof, sc)
        assert tr.certified and tr.agreement
        assert is_substructure(tr.b, a) and tr.b != a
        assert tr.theta_vectors[tr.pair[0]] == tr.theta_vectors[tr.pair[1]]
        assert len(tr.b_n.universe) == prof.n * len(tr.b.universe)


def test_ag_hom_preserved_gives_nonminimal():
    # phi preserved under homs: B models phi, so a is not minimal
    phi = parse("E x P(x)", EP)
    prof = BasicLocalProfile(EP, (basic_local_sentence(1, 0, parse("P(x)", EP), EP),))
    a = Structure(EP, list("abcd"), {"P": [("a",), ("b",), ("c",)], "E": [("c", "d")]})
    tr = ag_construct(a, phi, prof, ["a", "b", "c"])
    assert tr.truth["B"] and tr.agreement
    assert tr.pair == ("a", "b") and tr.removed == ("P", ("a",))


def test_ag_element_branch():
    prof = BasicLocalProfile(EP, (basic_local_sentence(1, 0, parse("P(x)", EP), EP),))
    a = Structure(EP, list("abc"))
    tr = ag_construct(a, parse("E x x = x", EP), prof, ["a", "b", "c"])
    assert tr.removed is None and tr.dropped_element == "a"
    assert "removed the element" in "\n".join(tr.lines())


def test_ag_preconditions():
    prof = BasicLocalProfile(EP, (basic_local_sentence(1, 1, parse("P(x)", EP), EP),))
    a = graph_to_structure(path_graph(3))
    a = Structure(EP, a.universe, {"E": a.relations["E"]})
    with pytest.raises(PreconditionError):
        ag_construct(a, parse("E x x = x", EP), prof, ["1", "2"])
    with pytest.raises(PreconditionError):
        ag_construct(a, parse("E x x = x", EP), prof, ["1", "2", "3"])
    b = Structure(EP, list("abc"))
    with pytest.raises(PreconditionError):
        ag_construct(b, parse("E x P(x)", EP), prof, ["a", "b", "c"])
