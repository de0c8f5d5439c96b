import random

import pytest

from quasiwide.counterexample import formula_library, make_Ln
from quasiwide.generators import all_structures, path_graph, random_formula, random_structure
from quasiwide.homomorphism import check_preservation
from quasiwide.logic.evaluate import evaluate
from quasiwide.logic.formula import Exists, Forall, Not, quantifier_rank
from quasiwide.logic.parser import parse
from quasiwide.plebeian import (
    companion_structure,
    companion_vocabulary,
    gaifman_matches,
    translate_formula,
    verify_companion,
)
from quasiwide.structures import (
    Structure,
    UnknownElement,
    Vocabulary,
    graph_to_structure,
    gaifman_graph,
)

from conftest import E_ONLY, EP


def test_vocabulary_examples():
    cv = companion_vocabulary(Vocabulary.parse("P/1"), 1)
    assert [d.name for d in cv.derived] == ["P@1:1"]
    assert cv.vocab.arity["P@1:1"] == 0
    cv = companion_vocabulary(E_ONLY, 1)
    assert {d.name: cv.vocab.arity[d.name] for d in cv.derived} == {
        "E@1:1": 1,
        "E@2:1": 1,
        "E@1:1,2:1": 0,
    }
    assert companion_vocabulary(EP, 0).vocab == EP


def test_vocabulary_size_k2():
    # a binary symbol has (k+1)^2 - 1 non-empty partial maps into k constants
    cv = companion_vocabulary(E_ONLY, 2)
    assert len(cv.derived) == 8
    names = [d.name for d in cv.derived]
    assert names == sorted(set(names), key=names.index)


def test_structure_path_example():
    a = graph_to_structure(path_graph(3))
    p = companion_structure(a, ["2"])
    assert p.universe == ("1", "3")
    assert p.relations["E"] == frozenset()
    assert p.relations["E@1:1"] == {("1",), ("3",)}
    assert p.relations["E@2:1"] == {("1",), ("3",)}
    assert not p.holds("E@1:1,2:1")


def test_structure_directed_example():
    v = E_ONLY
    a = Structure(v, ["a1", "a2", "a3"], {"E": [("a1", "a2"), ("a2", "a3")]})
    p = companion_structure(a, ["a2"])
    assert p.relations["E@1:1"] == {("a3",)}
    assert p.relations["E@2:1"] == {("a1",)}
    assert not p.holds("E@1:1,2:1")


def test_structure_errors():
    a = make_Ln(3)
    assert companion_structure(a, []) == a
    with pytest.raises(UnknownElement):
        companion_structure(a, ["9"])
    with pytest.raises(ValueError):
        companion_structure(a, ["1", "1"])


def test_translate_examples():
    phi = parse("E x P(x)", Vocabulary.parse("P/1"))
    assert translate_formula(phi, 1, Vocabulary.parse("P/1")) == parse(
        "(E x P(x) | P@1:1)", companion_vocabulary(Vocabulary.parse("P/1"), 1).vocab
    )
    qf = parse("(E(x,y) & !P(x))", EP)
    assert translate_formula(qf, 2, EP) == qf


def test_rank_preserved_random():
    rng = random.Random(1)
    for _ in range(200):
        phi = random_formula(rng, EP, rng.randint(0, 3))
        for k in (0, 1, 2):
            assert quantifier_rank(translate_formula(phi, k, EP)) == quantifier_rank(phi)


def test_forall_rule_matches_negated_exists():
    rng = random.Random(2)
    cv = companion_vocabulary(EP, 2)
    for _ in range(150):
        body = random_formula(rng, EP, 2, ("x",))
        via_all = translate_formula(Forall("x", body), 2, EP)
        via_ex = translate_formula(Not(Exists("x", Not(body))), 2, EP)
        a = random_structure(rng, EP, rng.randint(2, 5), 0.35)
        deleted = list(a.universe[:2])
        p = companion_structure(a, deleted)
        assert evaluate(p, via_all) == evaluate(p, via_ex)
        assert p.vocab == cv.vocab


def test_companion_lemma_exhaustive_small():
    rng = random.Random(3)
    formulas = [random_formula(rng, EP, rng.randint(1, 3)) for _ in range(8)]
    for n in range(1, 4):
        for a in list(all_structures(EP, n))[::5]:
            for k in range(0, min(2, n) + 1):
                deleted = list(a.universe[:k])
                for phi in formulas:
                    rep = verify_companion(a, deleted, phi)
                    assert rep.ok, (a, deleted, phi)


def test_order_example():
    rep = verify_companion(make_Ln(3), ["2"], formula_library()["phi_order"])
    assert rep.ok and rep.original


def test_free_variable_formula():
    rng = random.Random(4)
    for _ in range(100):
        a = random_structure(rng, EP, 4, 0.35)
        phi = random_formula(rng, EP, 2, ("x",))
        rep = verify_companion(a, ["0"], phi, {"x": "3"})
        assert rep.ok


def test_gaifman_identity():
    rng = random.Random(6)
    for _ in range(100):
        a = random_structure(rng, Vocabulary.parse("E/2,T/3"), 5, 0.15)
        deleted = rng.sample(a.universe, 2)
        p = companion_structure(a, deleted)
        assert len(p.universe) == 3
        assert gaifman_matches(a, p, deleted)
        assert gaifman_graph(p) == gaifman_graph(a).without(deleted)


def test_preservation_transfers():
    phi = parse("E x E y (E(x,y) & P(y))", EP)
    rng = random.Random(8)
    sample = [random_structure(rng, EP, rng.randint(2, 4), 0.35) for _ in range(20)]
    images = [companion_structure(a, [a.universe[0]]) for a in sample]
    hat = translate_formula(phi, 1, EP)
    assert check_preservation(hat, images) == []
