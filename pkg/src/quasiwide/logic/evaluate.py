"""Model checking by compiling a formula into nested closures.

Every variable gets a slot in a flat environment list. Quantifier nodes
memoise their result per structure, keyed by the values of their free
variables, which keeps chained distance formulas polynomial instead of
exponential in the radius.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Mapping

from ..structures import Structure
from .formula import (
    And,
    Atom,
    Const,
    Eq,
    Exists,
    Falsum,
    Forall,
    Formula,
    Not,
    Or,
    Var,
    Verum,
    all_vars,
    constants,
    free_vars,
)


class UnboundVariable(KeyError):
    pass


class _Ctx:
    __slots__ = ("universe", "rels", "memo")

    def __init__(self, a: Structure, n_memo: int):
        self.universe = a.universe
        self.rels = a.relations
        self.memo = [dict() for _ in range(n_memo)]


class Compiled:
    """A formula compiled against a variable-slot layout."""

    def __init__(self, phi: Formula):
        self.phi = phi
        self.slots = {v: i for i, v in enumerate(sorted(all_vars(phi)))}
        self.free = sorted(free_vars(phi))
        self.consts = constants(phi)
        self._n_memo = 0
        self._shared: dict = {}
        self.fn = self._build(phi)
        self.n_memo = self._n_memo

    def _term(self, t):
        if isinstance(t, Var):
            return ("v", self.slots[t.name])
        return ("c", t.value)

    def _build(self, node: Formula) -> Callable:
        # equal subtrees use the same slots, so they can share one closure
        # and one memo table
        fn = self._shared.get(node)
        if fn is None:
            fn = self._shared[node] = self._build_node(node)
        return fn

    def _build_node(self, node: Formula) -> Callable:
        if isinstance(node, Verum):
            return lambda ctx, env: True
        if isinstance(node, Falsum):
            return lambda ctx, env: False
        if isinstance(node, Atom):
            name = node.symbol
            spec = [self._term(t) for t in node.args]
            if not spec:
                return lambda ctx, env: () in ctx.rels[name]
            if all(k == "v" for k, _ in spec):
                idx = [s for _, s in spec]
                if len(idx) == 1:
                    (i,) = idx
                    return lambda ctx, env: (env[i],) in ctx.rels[name]
                if len(idx) == 2:
                    i, j = idx
                    return lambda ctx, env: (env[i], env[j]) in ctx.rels[name]
                return lambda ctx, env: tuple(env[i] for i in idx) in ctx.rels[name]
            return lambda ctx, env: (
                tuple(env[s] if k == "v" else s for k, s in spec) in ctx.rels[name]
            )
        if isinstance(node, Eq):
            (lk, ls), (rk, rs) = self._term(node.left), self._term(node.right)
            if lk == "v" and rk == "v":
                return lambda ctx, env: env[ls] == env[rs]
            if lk == "v":
                return lambda ctx, env: env[ls] == rs
            if rk == "v":
                return lambda ctx, env: ls == env[rs]
            same = ls == rs
            return lambda ctx, env: same
        if isinstance(node, Not):
            body = self._build(node.body)
            return lambda ctx, env: not body(ctx, env)
        if isinstance(node, And):
            left, right = self._build(node.left), self._build(node.right)
            return lambda ctx, env: left(ctx, env) and right(ctx, env)
        if isinstance(node, Or):
            left, right = self._build(node.left), self._build(node.right)
            return lambda ctx, env: left(ctx, env) or right(ctx, env)
        if isinstance(node, (Exists, Forall)):
            body = self._build(node.body)
            slot = self.slots[node.var]
            key_slots = tuple(self.slots[v] for v in sorted(free_vars(node)))
            mid = self._n_memo
            self._n_memo += 1
            want = isinstance(node, Exists)

            def quant(ctx, env):
                memo = ctx.memo[mid]
                key = tuple(env[s] for s in key_slots)
                hit = memo.get(key)
                if hit is not None:
                    return hit
                saved = env[slot]
                result = not want
                for e in ctx.universe:
                    env[slot] = e
                    if body(ctx, env) is want:
                        result = want
                        break
                env[slot] = saved
                memo[key] = result
                return result

            return quant
        raise TypeError(f"not a formula node: {node!r}")

    def _env(self, asg: Mapping[str, str]) -> list:
        missing = [v for v in self.free if v not in asg]
        if missing:
            raise UnboundVariable(f"no value for free variable(s) {missing}")
        env = [None] * len(self.slots)
        for v, i in self.slots.items():
            if v in asg:
                env[i] = str(asg[v])
        return env

    def check(self, a: Structure, asg: Mapping[str, str] | None = None) -> bool:
        asg = asg or {}
        members = set(a.universe)
        bad = [c for c in self.consts if c not in members]
        if bad:
            raise ValueError(f"constants {bad} are not elements of the structure")
        for v in self.free:
            if v in asg and str(asg[v]) not in members:
                raise ValueError(f"assignment {v}={asg[v]} is not an element")
        ctx = _Ctx(a, self.n_memo)
        return bool(self.fn(ctx, self._env(asg)))

    def check_many(self, a: Structure, assignments: Iterable[Mapping[str, str]]) -> list[bool]:
        """Evaluate several assignments on one structure, sharing the memo."""
        ctx = _Ctx(a, self.n_memo)
        return [bool(self.fn(ctx, self._env(asg))) for asg in assignments]


@lru_cache(maxsize=4096)
def compile_formula(phi: Formula) -> Compiled:
    return Compiled(phi)


def evaluate(a: Structure, phi: Formula, asg: Mapping[str, str] | None = None) -> bool:
    """``a |= phi[asg]``; quantifiers range over the universe of ``a``."""
    return compile_formula(phi).check(a, asg)


def models(a: Structure, phi: Formula) -> bool:
    """Sentence shorthand for :func:`evaluate` with an empty assignment."""
    return compile_formula(phi).check(a, {})
