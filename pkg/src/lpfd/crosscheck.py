"""Whole-corpus consistency runs: solver routes against the oracles, and the
collective-agency theorems checked pointwise.

Both functions take a list of models (usually ``testgen.fuzz_models``) and
return plain reports; every finding carries the model's sub-seed so it can
be regenerated.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from . import analysis
from .formula import Ca, Ca1, Not, Pa, PaY, big_and, bind, implies
from .model import PDModel
from .semantics import truth_vector
from .testgen import (all_covers, oracle_ca, oracle_ca1, oracle_ca2, oracle_nash, oracle_pa_y,
                      oracle_strong_pareto, oracle_weak_pareto)

EXPANSION_LIMIT = 4

_ORACLES = {
    "nash": oracle_nash,
    "weakPareto": oracle_weak_pareto,
    "strongPareto": oracle_strong_pareto,
    "ca1": oracle_ca1,
    "ca2": oracle_ca2,
    "ca": oracle_ca,
}


@dataclass
class Mismatch:
    seed: int
    concept: str
    group: list
    method: str
    expected: list
    got: list

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class EquivalenceReport:
    models: int
    comparisons: int = 0
    mismatches: list = field(default_factory=list)

    def to_dict(self, max_examples: int = 10):
        return {"models": self.models, "comparisons": self.comparisons,
                "mismatches": len(self.mismatches),
                "examples": [x.to_dict() for x in self.mismatches[:max_examples]]}


def _groups(m: PDModel):
    return [g for g in m.vocab.subsets() if g]


def oracle_equivalence(models, seeds=None, expansion_limit: int = EXPANSION_LIMIT) -> EquivalenceReport:
    """Compare every solver route with the brute-force oracle on every
    non-empty group of every model."""
    seeds = list(seeds) if seeds is not None else list(range(len(models)))
    rep = EquivalenceReport(len(models))
    with warnings.catch_warnings():
        # ca of a singleton is deliberately included; its warning is expected
        warnings.simplefilter("ignore", UserWarning)
        _equivalence(models, seeds, expansion_limit, rep)
    return rep


def _equivalence(models, seeds, expansion_limit, rep):
    def compare(seed, concept, group, method, expected, got):
        rep.comparisons += 1
        exp_ids = [s.id for s in expected]
        got_ids = [s.id for s in got]
        if exp_ids != got_ids:
            rep.mismatches.append(Mismatch(seed, concept, sorted(group), method, exp_ids, got_ids))

    for seed, m in zip(seeds, models):
        players = frozenset(m.vocab.players)
        for g in _groups(m):
            for concept, oracle in _ORACLES.items():
                want = oracle(m, g)
                methods = ["direct", "formula"]
                if concept == "ca" and len(g) <= expansion_limit:
                    methods.append("expansion")
                for method in methods:
                    compare(seed, concept, g, method, want, analysis.solve(m, concept, g, method=method).solutions)
            for fixed in dict.fromkeys([frozenset(), players - g, players]):
                want = oracle_pa_y(m, fixed, g)
                for method in ("direct", "formula"):
                    compare(seed, f"paY[{','.join(m.vocab.ordered(fixed))}]", g, method, want,
                            analysis.pa_y(m, fixed, g, method).solutions)


@dataclass
class TheoremReport:
    models: int
    checked: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def bump(self, name, n=1):
        self.checked[name] = self.checked.get(name, 0) + n

    def to_dict(self, max_examples: int = 10):
        return {"models": self.models, "checked": dict(self.checked),
                "violations": len(self.violations), "examples": self.violations[:max_examples]}


def _bits(vec) -> int:
    out = 0
    for i, v in enumerate(vec):
        if v:
            out |= 1 << i
    return out


def _first_zero(bits: int, n: int):
    for i in range(n):
        if not bits >> i & 1:
            return i
    return None


def theorem_suite(models, seeds=None, cover_limit: int = EXPANSION_LIMIT) -> TheoremReport:
    """Pointwise checks, for every group X and X' <= X:

    * monotonicity: ``paY(-X; X') -> paY(-X'; X')``,
    * cover assembly: for every cover C of X, ``AND_{X' in C} paY(-X; X') -> pa(X)``
      (covers enumerated exhaustively for ``|X| <= cover_limit``),
    * ``ca(X) -> ca1(X)``.
    """
    seeds = list(seeds) if seeds is not None else list(range(len(models)))
    rep = TheoremReport(len(models))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        _theorems(models, seeds, cover_limit, rep)
    return rep


def _theorems(models, seeds, cover_limit, rep):
    for seed, m in zip(seeds, models):
        order = m.vocab.players
        n = len(m)
        everyone = frozenset(order)
        full = (1 << n) - 1
        for g in _groups(m):
            rest = everyone - g
            for sub in m.vocab.subsets(g):
                f = bind(implies(PaY(rest, sub), PaY(everyone - sub, sub)), m.vocab)
                rep.bump("monotonicity")
                bad = _first_zero(_bits(truth_vector(m, f)), n)
                if bad is not None:
                    rep.violations.append({"seed": seed, "theorem": "monotonicity", "group": sorted(g),
                                           "subgroup": sorted(sub), "profile": m.profiles[bad].id})
            if len(g) > cover_limit:
                continue
            pa_x = _bits(truth_vector(m, bind(Pa(g), m.vocab)))
            sat = {sub: _bits(truth_vector(m, bind(PaY(rest, sub), m.vocab)))
                   for sub in m.vocab.subsets(g) if sub != g}
            for fam in all_covers(g, order):
                conj = full
                for sub in fam:
                    conj &= sat[sub]
                rep.bump("cover")
                bad = _first_zero(~conj & full | pa_x, n)
                if bad is not None:
                    rep.violations.append({"seed": seed, "theorem": "cover", "group": sorted(g),
                                           "cover": [sorted(c) for c in fam], "profile": m.profiles[bad].id})
            rep.bump("ca_implies_ca1")
            f = bind(implies(Ca(g), Ca1(g)), m.vocab)
            bad = _first_zero(_bits(truth_vector(m, f)), n)
            if bad is not None:
                rep.violations.append({"seed": seed, "theorem": "ca_implies_ca1", "group": sorted(g),
                                       "profile": m.profiles[bad].id})


def subgroup_pareto_gap(m: PDModel, group):
    """Profiles where every proper subgroup X' is Pareto optimal with -X'
    fixed, yet the group itself is not: the non-validity of replacing the
    cover condition by its naive variant."""
    group = m.vocab.check_group(group)
    everyone = frozenset(m.vocab.players)
    parts = [PaY(everyone - sub, sub) for sub in m.vocab.subsets(group) if sub != group]
    f = bind(big_and(parts + [Not(Pa(group))]), m.vocab)
    vec = truth_vector(m, f)
    return [s for s, v in zip(m.profiles, vec) if v]
