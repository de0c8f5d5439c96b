import pytest

from quasiwide.generators import all_structures
from quasiwide.structures import Vocabulary

EP = Vocabulary.parse("E/2,P/1")
E_ONLY = Vocabulary.parse("E/2")


def small_structures(vocab=EP, max_n=3):
    out = []
    for n in range(0, max_n + 1):
        out.extend(all_structures(vocab, n))
    return out


@pytest.fixture(scope="session")
def ep_structures_le2():
    return small_structures(EP, 2)



# basic local sentences over {E/2, P/1}: (width, radius, local condition)
AG_LIBRARY = [
    (1, 1, "E y (E(x,y) & P(y))"),
    (2, 0, "P(x)"),
    (1, 1, "A y (E(x,y) -> P(y))"),
    (2, 1, "E y E(y,x)"),
    (1, 0, "E(x,x)"),
    (3, 0, "!P(x)"),
]


def ag_instance(rng):
    """A profile, a structure made of at least m small disjoint components,
    one chosen element per component (so they are scattered at any
    radius), and the conjunction of profile literals true in it."""
    from quasiwide.generators import random_structure
    from quasiwide.logic.evaluate import evaluate
    from quasiwide.logic.formula import Not, conj
    from quasiwide.logic.locality import basic_local_sentence
    from quasiwide.logic.parser import parse
    from quasiwide.minimal import BasicLocalProfile
    from quasiwide.structures import disjoint_union_many

    chosen = rng.sample(AG_LIBRARY, rng.randint(1, 3))
    prof = BasicLocalProfile(
        EP, tuple(basic_local_sentence(n, t, parse(p, EP), EP) for n, t, p in chosen)
    )
    comps = [random_structure(rng, EP, rng.randint(1, 3), 0.4) for _ in range(prof.m + rng.randint(0, 2))]
    a, maps = disjoint_union_many(comps)
    scattered = [maps[i][comps[i].universe[0]] for i in range(prof.m)]
    phi = conj([b.formula if evaluate(a, b.formula) else Not(b.formula) for b in prof.sentences])
    return prof, a, phi, scattered


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
