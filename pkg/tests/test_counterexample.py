import random

import pytest

from quasiwide.counterexample import (
    ORDER_VOCAB,
    SClassMember,
    check_lemmas,
    contains_complete_order,
    default_sample,
    enumerate_S_members,
    formula_library,
    in_class_S,
    make_Ln,
    refute_ep_candidates,
    sample_S,
)
from quasiwide.generators import random_formula
from quasiwide.logic.evaluate import evaluate
from quasiwide.logic.formula import is_existential_positive
from quasiwide.minimal import ClassSpec, ep_from_minimal_models, is_minimal_model
from quasiwide.scattered import classify_corpus
from quasiwide.structures import disjoint_union, gaifman_graph

LIB = formula_library()


def test_make_Ln():
    l3 = make_Ln(3)
    assert l3.relations["O"] == {("1", "2"), ("1", "3"), ("2", "3")}
    assert l3.relations["S"] == {("1", "2"), ("2", "3")}
    assert l3.relations["P"] == {("1",), ("3",)}
    l1 = make_Ln(1)
    assert l1.relations["O"] == frozenset() and l1.relations["P"] == {("1",)}
    assert len(gaifman_graph(make_Ln(5)).edges) == 10
    with pytest.raises(ValueError):
        make_Ln(0)


def test_sampler():
    for seed in range(50):
        m = sample_S(seed, 6, 3)
        assert m.valid()
        assert m == sample_S(seed, 6, 3)
        assert in_class_S(m.structure)
    full = sample_S(4, 5, 1, p_element=0, p_tuple=0)
    ((c, mm),) = full.components
    assert c == make_Ln(mm)


def test_formula_pieces():
    l4 = make_Ln(4)
    beta = LIB["beta"]
    assert evaluate(l4, beta, {"x": "1", "y": "4", "z": "2"})
    assert not evaluate(l4, beta, {"x": "2", "y": "4", "z": "1"})
    nu = LIB["nu"]
    pairs = {(u, v) for u in l4.universe for v in l4.universe if evaluate(l4, nu, {"z1": u, "z2": v})}
    assert pairs == {("1", "2"), ("2", "3"), ("3", "4")}
    lam = LIB["lambda"]
    assert evaluate(l4, lam, {"x": "1", "y": "4"})
    for n in range(2, 8):
        assert evaluate(make_Ln(n), LIB["phi_order"])
        assert evaluate(make_Ln(n), LIB["phi_order_literal"])


def test_contains_complete_order():
    assert contains_complete_order(make_Ln(4))
    assert not contains_complete_order(make_Ln(4).remove_fact("O", ("1", "3")))
    assert not contains_complete_order(make_Ln(1))
    assert contains_complete_order(SClassMember(((make_Ln(1), 1), (make_Ln(2), 2))))


def test_phi_order_defines_complete_order_exhaustively():
    phi = LIB["phi_order"]
    members = enumerate_S_members(5, 4)
    assert len(members) > 1000
    for a in members:
        assert evaluate(a, phi) == contains_complete_order(a)


def test_literal_sentence_defect():
    # the literal version only looks for S-gaps against the whole structure
    defect = make_Ln(4).remove_fact("O", ("1", "3"))
    assert in_class_S(defect)
    assert evaluate(defect, LIB["phi_order_literal"])
    assert not contains_complete_order(defect)
    assert not evaluate(defect, LIB["phi_order"])
    cls = ClassSpec.class_S()
    lit = LIB["phi_order_literal"]
    assert [is_minimal_model(make_Ln(n), lit, cls) for n in (2, 3, 4)] == [True, True, False]


def test_literal_variant_fails_lemma_checks():
    rep = check_lemmas(120, 0, 4, variant="phi_order_literal")
    by = {r.name: r for r in rep.results}
    assert not by["definability"].ok
    assert not by["minimal models"].ok
    assert not rep.ok


def test_check_lemmas_small():
    rep = check_lemmas(80, 1, 4)
    assert rep.ok, rep.lines()
    assert len(rep.lines()) == 5
    assert all(line.split(":")[1].startswith(" PASS") for line in rep.lines())


def test_ep_refutation():
    rng = random.Random(0)
    cands = [random_formula(rng, ORDER_VOCAB, 3, ep=True) for _ in range(100)]
    assert all(is_existential_positive(c) for c in cands)
    assert all(w is not None for _, w in refute_ep_candidates(cands, 6))
    # the disjunction over L_2..L_6 survives up to 6 and falls at 7
    psi = ep_from_minimal_models([make_Ln(n) for n in range(2, 7)])
    assert refute_ep_candidates([psi], 6)[0][1] is None
    assert refute_ep_candidates([psi], 7)[0][1] == make_Ln(7)


def test_clique_corpus_not_quasiwide():
    graphs = [(f"G(L_{n})", gaifman_graph(make_Ln(n))) for n in range(1, 8)]
    rep = classify_corpus(graphs, 1, 2, 3)
    for n, e in zip(range(1, 8), rep.entries):
        if n >= 5:
            assert e.least_k is None


def test_default_sample_mix():
    sample = default_sample(40, 2)
    assert all(m.valid() for m in sample)
    assert any(contains_complete_order(m) for m in sample)
    assert not all(contains_complete_order(m) for m in sample)


def test_union_membership():
    a = disjoint_union(make_Ln(3), make_Ln(2).remove_element("1"))
    assert in_class_S(a)
