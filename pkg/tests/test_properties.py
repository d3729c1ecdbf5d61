"""Property checks over random models that share the strategy vocabulary."""
import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from lpfd import analysis, testgen
from lpfd.formula import Box, Dep, bind
from lpfd.model import Query, from_explicit_preorder, from_payoff_table
from lpfd.modelio import dumps_model, loads_model
from lpfd.semantics import truth_vector

from strategies import PLAYERS, VOCAB, core_formulas, plain_queries

PROP = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def models(draw):
    actions = {p: [f"a{k}" for k in range(draw(st.integers(1, 2)))] for p in PLAYERS}
    combos = list(itertools.product(*(actions[p] for p in PLAYERS)))
    if draw(st.booleans()):
        prof = draw(st.lists(st.sampled_from(combos), min_size=1, unique=True)) if draw(st.booleans()) else None
        rows = {c: [draw(st.integers(0, 3)) for _ in PLAYERS] for c in (prof or combos)}
        interp_src = prof or combos
        interp = _interp(draw, interp_src)
        return from_payoff_table(VOCAB, actions, rows, profiles=prof, interp=interp)
    pairs = {p: draw(st.lists(st.tuples(st.sampled_from(combos), st.sampled_from(combos)), max_size=6))
             for p in PLAYERS}
    return from_explicit_preorder(VOCAB, actions, None, pairs, interp=_interp(draw, combos))


def _interp(draw, combos):
    acts = sorted({a for c in combos for a in c})
    return {
        "P": draw(st.lists(st.tuples(st.sampled_from(acts)), max_size=2)),
        "Q": draw(st.lists(st.tuples(st.sampled_from(acts), st.sampled_from(acts)), max_size=3)),
        "R": [()] if draw(st.booleans()) else [],
    }


groups = st.frozensets(st.sampled_from(PLAYERS))


@PROP
@given(models())
def test_preorders_are_preorders(m):
    for p in PLAYERS:
        w = m.weak_matrix(p)
        assert w.diagonal().all()
        assert not (w.astype(int) @ w.astype(int) > 0)[~w].any()
        assert (m.strict_matrix(p) == (w & ~w.T)).all()
        k = PLAYERS.index(p)
        same = np.array([[s.actions[k] == t.actions[k] for t in m.profiles] for s in m.profiles])
        assert (m.eq_matrix(p) == same).all()
        if m.utilities is not None:
            assert m.is_total(p)


@PROP
@given(models())
def test_export_import_is_identity(m):
    text = dumps_model(m)
    again = loads_model(text)
    assert again == m
    assert dumps_model(again) == text


def _grow(q: Query, extra: Query) -> Query:
    return Query(q.eq | extra.eq, q.weak | extra.weak, q.strict | extra.strict)


@PROP
@given(models(), plain_queries, plain_queries, core_formulas)
def test_box_is_monotone_in_its_groups(m, q, extra, body):
    f = bind(body, VOCAB)
    small = truth_vector(m, Box(q, f))
    big = truth_vector(m, Box(_grow(q, extra), f))
    assert not (small & ~big).any()


@PROP
@given(models(), plain_queries, plain_queries, st.sampled_from(PLAYERS))
def test_dependence_is_monotone_in_its_groups(m, q, extra, x):
    small = truth_vector(m, Dep(q, x))
    big = truth_vector(m, Dep(_grow(q, extra), x))
    assert not (small & ~big).any()


@PROP
@given(models(), plain_queries, st.sampled_from(PLAYERS))
def test_own_action_is_determined(m, q, x):
    q = Query(q.eq | {x}, q.weak, q.strict)
    assert truth_vector(m, Dep(q, x)).all()


@PROP
@given(models(), core_formulas)
def test_vector_evaluator_matches_reference(m, body):
    f = bind(body, VOCAB)
    vec = truth_vector(m, f)
    assert list(map(bool, vec)) == [testgen.reference_eval(m, s, f) for s in m.profiles]


ORACLES = {
    "nash": testgen.oracle_nash,
    "weakPareto": testgen.oracle_weak_pareto,
    "strongPareto": testgen.oracle_strong_pareto,
    "ca1": testgen.oracle_ca1,
    "ca2": testgen.oracle_ca2,
    "ca": testgen.oracle_ca,
}


@pytest.mark.filterwarnings("ignore:ca of a single player")
@PROP
@given(models(), groups.filter(bool), st.sampled_from(sorted(ORACLES)), st.sampled_from(analysis.METHODS))
def test_analysis_matches_oracles(m, group, concept, method):
    expected = ORACLES[concept](m, group)
    got = analysis.solve(m, concept, group, method=method)
    assert set(got.solutions) == set(expected)


@PROP
@given(models(), groups, groups.filter(bool))
def test_pa_y_matches_oracle(m, fixed, group):
    for method in ("direct", "formula"):
        got = analysis.pa_y(m, fixed, group, method)
        assert set(got.solutions) == set(testgen.oracle_pa_y(m, fixed, group))


@PROP
@given(models(), groups.filter(bool))
def test_concept_inclusions(m, group):
    sol = {c: set(analysis.solve(m, c, group).solutions) for c in ORACLES}
    assert sol["ca1"] == sol["nash"] & sol["strongPareto"]
    assert sol["strongPareto"] <= sol["weakPareto"]
    assert sol["ca"] <= sol["ca1"]


@PROP
@given(models(), groups.filter(bool))
def test_solutions_have_no_blocking_evidence(m, group):
    rep = analysis.solve(m, "nash", group)
    for s in m.profiles:
        ev = rep.evidence.get(s)
        if s in rep.solutions:
            assert ev is None or ev.blocked_by is None
        else:
            t = ev.blocked_by
            assert ev.player in group
            assert m.strict_matrix(ev.player)[m.index(s), m.index(t)]
            assert np.all([s[p] == t[p] for p in PLAYERS if p != ev.player])
