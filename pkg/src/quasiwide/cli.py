"""Command-line entry point.

Exit status: 0 success (including a NONE answer), 1 bad input or
parameters, 2 search budget exhausted, 3 a certificate failed
re-verification.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .counterexample import check_lemmas, make_Ln
from .dichotomy import CertificateError, Exhausted, scattered_or_shallow_clique
from .homomorphism import SearchBudgetExceeded, find_homomorphism, is_hom
from .iso import SizeCapExceeded
from .logic.evaluate import UnboundVariable, evaluate
from .logic.formula import to_text
from .logic.locality import basic_local_sentence
from .logic.parser import ParseError, load_formula, parse
from .minimal import (
    BasicLocalProfile,
    ClassSpec,
    PreconditionError,
    ag_construct,
    enumerate_minimal_models,
    ep_from_minimal_models,
)
from .minors import MinorEmbedding, grad_estimate, is_minor, verify_minor
from .plebeian import companion_structure, translate_formula
from .scattered import GraphTooLarge, ScatteredWitness, classify_corpus, is_r_scattered, max_scattered_set
from .structures import (
    LoadError,
    UnknownElement,
    Vocabulary,
    VocabularyMismatch,
    format_graph,
    format_structure,
    gaifman_graph,
    load_graph,
    load_structure,
)


class Unverified(RuntimeError):
    pass


def _formula(arg: str, vocab: Vocabulary):
    """A path to a formula file, or the formula text itself."""
    if os.path.isfile(arg):
        return load_formula(arg, vocab)
    return parse(arg, vocab)


def _require(ok: bool, what: str) -> None:
    if not ok:
        raise Unverified(f"{what} failed re-verification")


def _embedding_lines(emb: MinorEmbedding) -> list[str]:
    return [f"branch {line}" for line in emb.lines()]


# ---------------------------------------------------------------------------
# subcommands


def cmd_gaifman(args, out):
    out.append(format_graph(gaifman_graph(load_structure(args.structure))).rstrip("\n"))


def cmd_eval(args, out):
    a = load_structure(args.structure)
    phi = _formula(args.formula, a.vocab)
    asg = {}
    for item in args.assign or []:
        var, _, val = item.partition("=")
        if not val:
            raise ValueError(f"assignment {item!r} is not var=element")
        asg[var] = val
    out.append("TRUE" if evaluate(a, phi, asg) else "FALSE")


def cmd_hom(args, out):
    a, b = load_structure(args.a), load_structure(args.b)
    h = find_homomorphism(a, b, budget=args.budget)
    if h is None:
        out.append("NONE")
        return
    _require(is_hom(a, b, h), "homomorphism")
    out.extend(f"{x}->{h[x]}" for x in a.universe)


def cmd_scattered(args, out):
    g = load_graph(args.graph)
    s = max_scattered_set(g, args.r, args.mode, max_vertices=args.max_vertices)
    _require(is_r_scattered(g, s, args.r), "scattered set")
    out.append(f"size {len(s)}")
    out.append("set " + " ".join(s))


def cmd_quasiwide(args, out):
    g = load_graph(args.graph)
    res = scattered_or_shallow_clique(g, args.k, args.r, args.m)
    if isinstance(res, MinorEmbedding):
        _require(verify_minor(g, res), "minor embedding")
        out.append(f"MINOR K_{res.order} at depth {res.depth}")
        out.extend(_embedding_lines(res))
    elif isinstance(res, ScatteredWitness):
        _require(res.verify(g) and len(res.deleted) <= args.k - 2, "scattered witness")
        out.append(f"SCATTERED radius {res.radius} size {len(res.scattered)}")
        out.append("deleted " + " ".join(sorted(res.deleted, key=g.index.__getitem__)))
        out.append("set " + " ".join(sorted(res.scattered, key=g.index.__getitem__)))
    else:
        assert isinstance(res, Exhausted)
        out.append(f"EXHAUSTED at stage {res.stage}: {res.reason}")


def cmd_minor(args, out):
    g, h = load_graph(args.g), load_graph(args.h)
    emb = is_minor(g, h, args.depth, max_vertices=args.max_vertices)
    if emb is None:
        out.append("NONE")
        return
    _require(verify_minor(h, emb), "minor embedding")
    out.extend(_embedding_lines(emb))


def cmd_grad(args, out):
    g = load_graph(args.graph)
    val, exact = grad_estimate(g, args.r, max_vertices=args.max_vertices)
    out.append(f"{val} {'exact' if exact else 'lower-bound'}")


def cmd_classify(args, out):
    graphs = [(Path(p).name, load_graph(p)) for p in args.graphs]
    rep = classify_corpus(graphs, args.r, args.m, args.kmax)
    for entry, (_, g) in zip(rep.entries, graphs):
        if entry.witness is not None:
            _require(entry.witness.verify(g), "scattered witness")
    out.extend(rep.lines())


def cmd_plebeian(args, out):
    a = load_structure(args.structure)
    deleted = [x for x in (args.delete or "").split(",") if x]
    p = companion_structure(a, deleted)
    text = format_structure(p)
    hat = None
    if args.formula:
        phi = _formula(args.formula, a.vocab)
        hat = to_text(translate_formula(phi, len(deleted), a.vocab))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        Path(args.out, "companion.struct").write_text(text, encoding="utf-8")
        if hat is not None:
            Path(args.out, "translated.fo").write_text(hat + "\n", encoding="utf-8")
    out.append(text.rstrip("\n"))
    if hat is not None:
        out.append("# translated formula")
        out.append(hat)


def _class_spec(name: str) -> ClassSpec:
    if name == "S":
        return ClassSpec.class_S()
    if name == "graphs":
        return ClassSpec.graphs()
    if name.startswith("all:"):
        return ClassSpec.all_structures(Vocabulary.parse(name[4:]))
    if name.startswith("corpus:"):
        folder = Path(name[7:])
        items = [load_structure(p) for p in sorted(folder.iterdir()) if p.is_file()]
        return ClassSpec.corpus(items)
    raise ValueError(f"unknown class {name!r}; use S, graphs, all:<vocab> or corpus:<dir>")


def cmd_minimal(args, out):
    cls = _class_spec(args.cls)
    phi = _formula(args.formula, cls.vocab)
    found = enumerate_minimal_models(phi, cls, args.max_size)
    out.append(f"minimal models: {len(found)}")
    for i, m in enumerate(found, 1):
        out.append(f"# model {i} ({len(m.universe)} elements)")
        out.append(format_structure(m).rstrip("\n"))
    out.append("# existential-positive equivalent")
    out.append(to_text(ep_from_minimal_models(found)))


def load_profile(path, vocab: Vocabulary) -> BasicLocalProfile:
    """One basic local sentence per line: ``<width> <radius> <local condition>``."""
    sentences = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(None, 2)
            if len(parts) != 3:
                raise LoadError(f"line {lineno}: expected '<width> <radius> <formula>'")
            n, t, text = int(parts[0]), int(parts[1]), parts[2]
            sentences.append(basic_local_sentence(n, t, parse(text, vocab), vocab))
    return BasicLocalProfile(vocab, tuple(sentences))


def cmd_agdemo(args, out):
    a = load_structure(args.structure)
    phi = _formula(args.formula, a.vocab)
    prof = load_profile(args.profile, a.vocab)
    if args.scattered:
        sc = args.scattered.split(",")
    else:
        sc = max_scattered_set(gaifman_graph(a), prof.r, target=prof.m)[: prof.m]
    tr = ag_construct(a, phi, prof, sc)
    _require(tr.certified, "construction homomorphisms")
    out.append(f"profile: s={prof.s} t={prof.t} n={prof.n} r={prof.r} m={prof.m}")
    out.extend(tr.lines())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for name, s in (("B", tr.b), ("B_n", tr.b_n), ("A_n", tr.a_n)):
            Path(args.out, f"{name}.struct").write_text(format_structure(s), encoding="utf-8")


def cmd_counterexample(args, out):
    if args.action == "gen":
        out.append(format_structure(make_Ln(args.n)).rstrip("\n"))
        return
    rep = check_lemmas(args.samples, args.seed, args.n_bound, variant=args.variant)
    out.extend(rep.lines())
    out.append("ALL PASS" if rep.ok else "SOME LEMMA CHECKS FAILED")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasiwide", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs single-threaded")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gaifman", help="print the Gaifman graph of a structure")
    s.add_argument("structure")
    s.set_defaults(fn=cmd_gaifman)

    s = sub.add_parser("eval", help="evaluate a formula on a structure")
    s.add_argument("structure")
    s.add_argument("formula", help="formula file or inline formula")
    s.add_argument("--assign", nargs="*", metavar="VAR=ELEM")
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("hom", help="search a homomorphism A -> B")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--budget", type=int, default=None)
    s.set_defaults(fn=cmd_hom)

    s = sub.add_parser("scattered", help="largest r-scattered set of a graph")
    s.add_argument("graph")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    s.add_argument("--max-vertices", type=int, default=80)
    s.set_defaults(fn=cmd_scattered)

    s = sub.add_parser("quasiwide", help="shallow clique minor or scattered set after deletions")
    s.add_argument("graph")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(fn=cmd_quasiwide)

    s = sub.add_parser("minor", help="test whether G is a (shallow) minor of H")
    s.add_argument("g")
    s.add_argument("h")
    s.add_argument("--depth", type=int, default=None)
    s.add_argument("--max-vertices", type=int, default=18)
    s.set_defaults(fn=cmd_minor)

    s = sub.add_parser("grad", help="greatest reduced average density")
    s.add_argument("graph")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--max-vertices", type=int, default=12)
    s.set_defaults(fn=cmd_grad)

    s = sub.add_parser("classify", help="least deletion budget per graph")
    s.add_argument("graphs", nargs="+")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--kmax", type=int, required=True)
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("plebeian", help="companion structure and formula translation")
    s.add_argument("structure")
    s.add_argument("--delete", default="", help="comma-separated element ids")
    s.add_argument("--formula")
    s.add_argument("--out", help="directory for companion.struct / translated.fo")
    s.set_defaults(fn=cmd_plebeian)

    s = sub.add_parser("minimal", help="enumerate minimal models in a class")
    s.add_argument("--formula", required=True)
    s.add_argument("--class", dest="cls", required=True, help="S | graphs | all:<vocab> | corpus:<dir>")
    s.add_argument("--max-size", type=int, required=True)
    s.set_defaults(fn=cmd_minimal)

    s = sub.add_parser("agdemo", help="tuple-removal construction trace")
    s.add_argument("--structure", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--profile", required=True)
    s.add_argument("--scattered", help="comma-separated ids; searched when omitted")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_agdemo)

    s = sub.add_parser("counterexample", help="linear orders and lemma checks")
    csub = s.add_subparsers(dest="action", required=True)
    g = csub.add_parser("gen")
    g.add_argument("--n", type=int, required=True)
    c = csub.add_parser("check")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=500)
    c.add_argument("--n-bound", type=int, default=6)
    c.add_argument("--variant", choices=["phi_order", "phi_order_literal"], default="phi_order")
    s.set_defaults(fn=cmd_counterexample)
    return p


DOMAIN_ERRORS = (
    ValueError,
    LoadError,
    ParseError,
    UnknownElement,
    UnboundVariable,
    VocabularyMismatch,
    GraphTooLarge,
    SizeCapExceeded,
    PreconditionError,
    OSError,
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out: list[str] = []
    try:
        args.fn(args, out)
    except SearchBudgetExceeded as exc:
        print("UNKNOWN", file=sys.stdout)
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2
    except (Unverified, CertificateError) as exc:
        print(f"certificate error: {exc}", file=sys.stderr)
        return 3
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if out:
        sys.stdout.write("\n".join(out) + "\n")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
