"""Truth evaluation of bound formulas over PD models.

Formulas are evaluated bottom-up as boolean vectors over the canonical
profile order: a modality ``Box(q, phi)`` is true at s iff the row of the
relation matrix for q has no reachable t where phi fails.  Within one call
each subformula object is evaluated once, which keeps expanded ``ca``
disjunctions (thousands of disjuncts sharing the same ``pa`` conjuncts)
cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .formula import And, Atom, Bottom, Box, Dep, Formula, Not, Top, as_dual
from .model import PDModel, Profile


@dataclass(frozen=True)
class EvalResult:
    value: bool
    witness: Optional[Profile] = None

    def __bool__(self):
        return self.value


class _Vectors:
    def __init__(self, m: PDModel):
        self.m = m
        self.n = len(m.profiles)
        self.memo = {}
        self.keep = []

    def atom(self, f: Atom) -> np.ndarray:
        if f.pred not in self.m.interp:
            raise DomainError(f"predicate {f.pred!r} is not interpreted in this model")
        ext = self.m.interp[f.pred]
        idx = [self.m.vocab.players.index(a) for a in f.args]
        return np.fromiter((tuple(s.actions[k] for k in idx) in ext for s in self.m.profiles),
                           dtype=bool, count=self.n)

    def __call__(self, f: Formula) -> np.ndarray:
        key = id(f)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        # explicit stack: expanded formulas can be deep
        stack = [(f, False)]
        while stack:
            g, ready = stack.pop()
            if id(g) in self.memo:
                continue
            kids = _children(g)
            if not ready and kids:
                stack.append((g, True))
                stack.extend((c, False) for c in kids if id(c) not in self.memo)
                continue
            self.memo[id(g)] = self._node(g)
            self.keep.append(g)
        return self.memo[key]

    def _node(self, g: Formula) -> np.ndarray:
        memo = self.memo
        if isinstance(g, Atom):
            return self.atom(g)
        if isinstance(g, Top):
            return np.ones(self.n, dtype=bool)
        if isinstance(g, Bottom):
            return np.zeros(self.n, dtype=bool)
        if isinstance(g, Not):
            return ~memo[id(g.body)]
        if isinstance(g, And):
            return memo[id(g.left)] & memo[id(g.right)]
        if isinstance(g, Box):
            rel = self.m.relation(g.query)
            return ~(rel & ~memo[id(g.body)][None, :]).any(axis=1)
        if isinstance(g, Dep):
            rel = self.m.relation(g.query)
            return ~(rel & ~self.m.eq_matrix(g.player)).any(axis=1)
        raise TypeError(f"cannot evaluate unbound formula node {type(g).__name__}; bind it first")


def _children(g):
    if isinstance(g, (Not, Box)):
        return (g.body,)
    if isinstance(g, And):
        return (g.left, g.right)
    return ()


def truth_vector(m: PDModel, f: Formula) -> np.ndarray:
    """Boolean vector of f's truth value at each profile (canonical order)."""
    return _Vectors(m)(f)


def eval_all(m: PDModel, f: Formula) -> dict[Profile, bool]:
    vec = truth_vector(m, f)
    return {s: bool(v) for s, v in zip(m.profiles, vec)}


def valid(m: PDModel, f: Formula) -> bool:
    return bool(truth_vector(m, f).all())


def counterexample(m: PDModel, f: Formula) -> Optional[Profile]:
    """First profile (canonical order) where f fails, or None if f is valid."""
    vec = truth_vector(m, f)
    bad = np.flatnonzero(~vec)
    return m.profiles[bad[0]] if len(bad) else None


def evaluate(m: PDModel, s: Profile, f: Formula) -> EvalResult:
    """Truth of f at s, with a witness profile where one is meaningful.

    A false modality or dependence atom reports the first reachable profile
    that violates it; a true dual reports the first reachable profile that
    satisfies its body.  False conjunctions report the witness of their
    first false conjunct.
    """
    i = m.index(s)
    vec = _Vectors(m)
    value = bool(vec(f)[i])
    return EvalResult(value, _witness(m, vec, i, f, value))


def _witness(m, vec, i, f, value):
    if isinstance(f, Box) and not value:
        row = m.relation(f.query)[i] & ~vec(f.body)
        return m.profiles[np.flatnonzero(row)[0]]
    if isinstance(f, Dep) and not value:
        row = m.relation(f.query)[i] & ~m.eq_matrix(f.player)[i]
        return m.profiles[np.flatnonzero(row)[0]]
    d = as_dual(f)
    if d is not None and value:
        row = m.relation(d[0])[i] & vec(d[1])
        return m.profiles[np.flatnonzero(row)[0]]
    if isinstance(f, And) and not value:
        for part in (f.left, f.right):
            if not vec(part)[i]:
                return _witness(m, vec, i, part, False)
    return None
