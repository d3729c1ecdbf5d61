"""Game-theoretic solution concepts over PD models.

Every concept is available through two independent routes:

``method="direct"``
    search for a dominating profile straight from the definition
    (Nash: a unilateral strict improvement; weak Pareto: a profile strictly
    better for all of X; strong Pareto / ``pa_y``: weakly better for all of X
    and strictly better for one; ``ca``: Nash plus the union of all
    ``pa_y(-X, X')``-satisfying proper subgroups X' equals X).
``method="formula"``
    evaluate the defining LPFD formula.  For ``ca`` this means evaluating
    Na X and each ``paY(-X; X')`` as formulas and then applying the cover
    criterion; ``method="expansion"`` instead evaluates the full bound cover
    disjunction (only feasible for small groups).

Failures carry evidence: the first dominating profile in canonical order
and the player who strictly gains there.  ``ca`` successes carry a witness
cover.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, ResourceError
from .formula import Ca, Ca1, Ca2, Formula, Na, Pa, PaY, bind, proper_subsets, q, Box, FALSE, big_and
from .model import PDModel, Profile
from .semantics import truth_vector

CONCEPTS = ("nash", "weakPareto", "strongPareto", "paY", "ca1", "ca2", "ca")
CONCEPT_ALIASES = {"wpareto": "weakPareto", "spareto": "strongPareto", "pareto": "strongPareto",
                   "pay": "paY", "pa": "strongPareto", "na": "nash"}
NATIVE_CA_LIMIT = 16
METHODS = ("direct", "formula", "expansion")


@dataclass(frozen=True)
class Evidence:
    """Why a profile is, or is not, a solution."""

    blocked_by: Optional[Profile] = None
    player: Optional[str] = None
    subgroup: Optional[frozenset] = None
    cover: Optional[tuple] = None
    uncovered: Optional[frozenset] = None


@dataclass
class AnalysisReport:
    concept: str
    group: frozenset
    solutions: tuple
    evidence: dict = field(default_factory=dict)
    fixed: Optional[frozenset] = None
    method: str = "direct"

    def __contains__(self, s):
        return s in self.solutions

    @property
    def solution_ids(self) -> list[str]:
        return [s.id for s in self.solutions]

    def to_dict(self, m: PDModel) -> dict:
        """Plain data with stable key order; profile ids are canonical."""
        order = m.vocab.ordered
        out = {"concept": self.concept, "group": list(order(self.group))}
        if self.fixed is not None:
            out["fixed"] = list(order(self.fixed))
        out["method"] = self.method
        out["solutions"] = self.solution_ids
        per = {}
        for s in m.profiles:
            ev = self.evidence.get(s)
            entry = {"solution": s in self.solutions}
            if ev is not None:
                if ev.blocked_by is not None:
                    entry["blocked_by"] = ev.blocked_by.id
                if ev.player is not None:
                    entry["improving_player"] = ev.player
                if ev.subgroup is not None:
                    entry["subgroup"] = list(order(ev.subgroup))
                if ev.cover is not None:
                    entry["cover"] = [list(order(c)) for c in ev.cover]
                if ev.uncovered is not None:
                    entry["uncovered"] = list(order(ev.uncovered))
            per[s.id] = entry
        out["profiles"] = per
        return out


# -- direct search --------------------------------------------------------------

class _Rows:
    """Row-wise access to the relation families, straight from the matrices."""

    def __init__(self, m: PDModel):
        self.m = m
        self.n = len(m.profiles)

    def agree(self, group):
        mask = np.ones((self.n, self.n), dtype=bool)
        for x in group:
            mask &= self.m.eq_matrix(x)
        return mask

    def weak_all(self, group):
        mask = np.ones((self.n, self.n), dtype=bool)
        for x in group:
            mask &= self.m.weak_matrix(x)
        return mask

    def strict_all(self, group):
        mask = np.ones((self.n, self.n), dtype=bool)
        for x in group:
            mask &= self.m.strict_matrix(x)
        return mask


def _first(row) -> Optional[int]:
    hits = np.flatnonzero(row)
    return int(hits[0]) if len(hits) else None


def _gainer(m: PDModel, i: int, j: int, group) -> Optional[str]:
    for x in m.vocab.ordered(group):
        if m.strict_matrix(x)[i, j]:
            return x
    return None


def _report(m, concept, group, ok, evidence, fixed=None, method="direct"):
    sols = tuple(s for s, flag in zip(m.profiles, ok) if flag)
    return AnalysisReport(concept, frozenset(group), sols, evidence, fixed, method)


def _pa_y_direct(m: PDModel, fixed: frozenset, group: frozenset):
    """Per profile: index of the first t with s =_fixed t, s <=_group t and
    s <_x t for some x in group, or None."""
    rows = _Rows(m)
    mask = rows.agree(fixed) & rows.weak_all(group)
    gain = np.zeros_like(mask)
    for x in group:
        gain |= m.strict_matrix(x)
    mask &= gain
    return [_first(mask[i]) for i in range(len(m.profiles))]


def _nash_direct(m: PDModel, group: frozenset):
    rows = _Rows(m)
    everyone = frozenset(m.vocab.players)
    out = [None] * len(m.profiles)
    for x in m.vocab.ordered(group):
        mask = rows.agree(everyone - {x}) & m.strict_matrix(x)
        for i in range(len(m.profiles)):
            if out[i] is None:
                j = _first(mask[i])
                if j is not None:
                    out[i] = (j, x)
    return out


def _check_groups(m, *groups):
    return [m.vocab.check_group(g) for g in groups]


# -- formula route ----------------------------------------------------------------

def _formula_vec(m: PDModel, f: Formula, **kw) -> np.ndarray:
    return truth_vector(m, bind(f, m.vocab, **kw))


def _evidence_from_vec(m, ok, fixed, group, weak_needed=True):
    """Dominator evidence for failing profiles of a formula-route answer."""
    dom = _pa_y_direct(m, fixed, group) if weak_needed else None
    ev = {}
    for i, s in enumerate(m.profiles):
        if not ok[i] and dom is not None and dom[i] is not None:
            ev[s] = Evidence(blocked_by=m.profiles[dom[i]], player=_gainer(m, i, dom[i], group))
    return ev


# -- public solvers --------------------------------------------------------------

def nash(m: PDModel, group, method: str = "direct") -> AnalysisReport:
    """Profiles where no member of ``group`` strictly gains by deviating alone
    (everyone else, including players outside the group, stays put)."""
    (group,) = _check_groups(m, group)
    direct = _nash_direct(m, group)
    ev = {m.profiles[i]: Evidence(blocked_by=m.profiles[d[0]], player=d[1])
          for i, d in enumerate(direct) if d is not None}
    if method == "direct":
        ok = [d is None for d in direct]
    else:
        ok = _formula_vec(m, Na(group))
    return _report(m, "nash", group, ok, ev, method=method)


def nash_fixing_complement(m: PDModel, group) -> AnalysisReport:
    """The variant that fixes only ``-X`` while one member deviates,
    i.e. the formula conjunction over x in X of ``[=-X; <={}; <{x}] false``.

    Differs from :func:`nash` whenever X has more than one member, because
    the other members of X may move too.
    """
    (group,) = _check_groups(m, group)
    rest = frozenset(m.vocab.players) - group
    f = big_and(Box(q(rest, (), [x]), FALSE) for x in m.vocab.ordered(group))
    ok = truth_vector(m, f)
    return _report(m, "nashFixingComplement", group, ok, {}, fixed=rest, method="formula")


def weak_pareto(m: PDModel, group, method: str = "direct") -> AnalysisReport:
    (group,) = _check_groups(m, group)
    rest = frozenset(m.vocab.players) - group
    rows = _Rows(m)
    mask = rows.agree(rest) & rows.strict_all(group)
    dom = [_first(mask[i]) for i in range(len(m.profiles))]
    ev = {m.profiles[i]: Evidence(blocked_by=m.profiles[j]) for i, j in enumerate(dom) if j is not None}
    if method == "direct":
        ok = [j is None for j in dom]
    else:
        ok = truth_vector(m, Box(q(rest, (), group), FALSE))
    return _report(m, "weakPareto", group, ok, ev, method=method)


def pa_y(m: PDModel, fixed, group, method: str = "direct", concept: str = "paY") -> AnalysisReport:
    """Strong Pareto optimality of ``group`` with the actions of ``fixed`` held."""
    fixed, group = _check_groups(m, fixed, group)
    dom = _pa_y_direct(m, fixed, group)
    ev = {m.profiles[i]: Evidence(blocked_by=m.profiles[j], player=_gainer(m, i, j, group))
          for i, j in enumerate(dom) if j is not None}
    if method == "direct":
        ok = [j is None for j in dom]
    else:
        ok = _formula_vec(m, PaY(fixed, group))
    return _report(m, concept, group, ok, ev, fixed=fixed, method=method)


def strong_pareto(m: PDModel, group, method: str = "direct") -> AnalysisReport:
    (group,) = _check_groups(m, group)
    rest = frozenset(m.vocab.players) - group
    if method == "direct":
        return pa_y(m, rest, group, "direct", concept="strongPareto")
    ok = _formula_vec(m, Pa(group))
    ev = _evidence_from_vec(m, ok, rest, group)
    return _report(m, "strongPareto", group, ok, ev, fixed=rest, method=method)


def ca1(m: PDModel, group, method: str = "direct") -> AnalysisReport:
    """Pareto-optimal Nash equilibria of ``group``."""
    (group,) = _check_groups(m, group)
    sp = strong_pareto(m, group, "direct")
    ne = nash(m, group, "direct")
    ev = {}
    for s in m.profiles:
        if s not in ne.solutions:
            ev[s] = ne.evidence[s]
        elif s not in sp.solutions:
            ev[s] = sp.evidence[s]
    if method == "direct":
        ok = [s in sp.solutions and s in ne.solutions for s in m.profiles]
    else:
        ok = _formula_vec(m, Ca1(group))
    return _report(m, "ca1", group, ok, ev, method=method)


def ca2(m: PDModel, group, method: str = "direct") -> AnalysisReport:
    """Strong Pareto optimality of every subgroup (each with its own complement fixed)."""
    (group,) = _check_groups(m, group)
    ok = np.ones(len(m.profiles), dtype=bool)
    ev = {}
    for sub in m.vocab.subsets(group):
        rep = strong_pareto(m, sub, "direct")
        for i, s in enumerate(m.profiles):
            if ok[i] and s not in rep.solutions:
                ok[i] = False
                e = rep.evidence[s]
                ev[s] = Evidence(blocked_by=e.blocked_by, player=e.player, subgroup=sub)
    if method != "direct":
        ok = _formula_vec(m, Ca2(group))
    return _report(m, "ca2", group, ok, ev, method=method)


def minimise_cover(sets: list[frozenset], target: frozenset) -> tuple:
    """Drop redundant members in order while the union still equals ``target``.

    Deterministic but not necessarily a minimum-cardinality cover.
    """
    kept = list(sets)
    for c in list(kept):
        rest = [d for d in kept if d is not c]
        if frozenset().union(*rest) == target:
            kept = rest
    return tuple(kept)


def ca(m: PDModel, group, method: str = "direct", limit: int = NATIVE_CA_LIMIT) -> AnalysisReport:
    """Collective agency: Nash for the group, and its proper subgroups that are
    strongly Pareto optimal with ``-X`` fixed cover the whole group.

    A covering family exists iff the union of *all* satisfying proper
    subgroups is the group, so no enumeration of covers is needed.
    """
    (group,) = _check_groups(m, group)
    if len(group) > limit:
        raise ResourceError(f"ca over {len(group)} players exceeds the native bound {limit}")
    order = m.vocab.players
    rest = frozenset(order) - group
    subs = proper_subsets(group, order)
    ne = nash(m, group, "direct")

    if method == "expansion":
        ok = _formula_vec(m, Ca(group))
        sat = {sub: [j is None for j in _pa_y_direct(m, rest, sub)] for sub in subs}
    else:
        if method == "direct":
            sat = {sub: [j is None for j in _pa_y_direct(m, rest, sub)] for sub in subs}
            nash_ok = [s in ne.solutions for s in m.profiles]
        else:
            sat = {sub: list(_formula_vec(m, PaY(rest, sub))) for sub in subs}
            nash_ok = list(_formula_vec(m, Na(group)))
        ok = []
        for i in range(len(m.profiles)):
            covered = frozenset().union(*(sub for sub in subs if sat[sub][i]))
            ok.append(bool(nash_ok[i]) and covered == group)

    ev = {}
    for i, s in enumerate(m.profiles):
        good = [sub for sub in subs if sat[sub][i]]
        if ok[i]:
            maximal = [a for a in good if not any(a < b for b in good)]
            ev[s] = Evidence(cover=minimise_cover(maximal, group))
        elif s not in ne.solutions:
            ev[s] = ne.evidence[s]
        else:
            ev[s] = Evidence(uncovered=group - frozenset().union(*good))
    return _report(m, "ca", group, ok, ev, method=method)


def solve(m: PDModel, concept: str, group, fixed=None, method: str = "direct") -> AnalysisReport:
    """Dispatch on a concept name (accepts the CLI aliases)."""
    name = CONCEPT_ALIASES.get(concept, concept)
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; expected one of {list(METHODS)}")
    if name == "paY":
        if fixed is None:
            raise DomainError("paY needs a fixed group")
        return pa_y(m, fixed, group, method)
    funcs = {"nash": nash, "weakPareto": weak_pareto, "strongPareto": strong_pareto,
             "ca1": ca1, "ca2": ca2, "ca": ca}
    if name not in funcs:
        raise DomainError(f"unknown concept {concept!r}; expected one of {sorted(set(CONCEPTS) | set(CONCEPT_ALIASES))}")
    if name != "ca" and method == "expansion":
        method = "formula"
    return funcs[name](m, group, method)
