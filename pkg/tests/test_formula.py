import warnings

import pytest
from hypothesis import given, settings

from lpfd.errors import ResourceError, VocabularyError
from lpfd.formula import (FALSE, TRUE, And, Atom, Box, Ca, Ca1, Ca2, Complement, D, DD, Dep, DepAll, Na,
                          Not, Pa, PaY, bind, big_and, covers, free, implies, is_core, pa_y,
                          proper_subsets, q, resugar)
from lpfd.model import Vocabulary
from lpfd.syntax import parse

from strategies import VOCAB, core_formulas, formulas

V3 = Vocabulary(("1", "2", "3"), {"P": 1})


def test_pa_expansion_shape():
    f = bind(Pa(frozenset({"1", "2"})), V3)
    assert f == And(Box(q(("3",), ("2",), ("1",)), FALSE), Box(q(("3",), ("1",), ("2",)), FALSE))


def test_na_expansion_uses_each_players_complement():
    f = bind(Na(frozenset({"1", "2"})), V3)
    assert f == And(Box(q(("2", "3"), (), ("1",)), FALSE), Box(q(("1", "3"), (), ("2",)), FALSE))


def test_ca1_and_ca2():
    g = frozenset({"1", "2"})
    assert bind(Ca1(g), V3) == And(bind(Pa(g), V3), bind(Na(g), V3))
    ca2 = bind(Ca2(g), V3)
    # one pa conjunct per subset; pa of the empty set is true
    assert ca2 == big_and([TRUE, bind(Pa(frozenset("1")), V3), bind(Pa(frozenset("2")), V3), bind(Pa(g), V3)])


def test_dependence_macros():
    f = bind(D(frozenset({"1"}), "2"), V3)
    assert f == Dep(q(("1",)), "2")
    assert bind(DD(frozenset({"1"}), Atom("P", ("1",))), V3) == Box(q(("1",)), Atom("P", ("1",)))
    assert bind(DepAll(q(), frozenset()), V3) == TRUE


def test_complement_resolution():
    assert bind(Pa(Complement(frozenset({"3"}))), V3) == bind(Pa(frozenset({"1", "2"})), V3)


def test_bind_rejects_unknown_names():
    with pytest.raises(VocabularyError):
        bind(Atom("P", ("9",)), V3)
    with pytest.raises(VocabularyError):
        bind(Atom("Q", ("1",)), V3)
    with pytest.raises(VocabularyError):
        bind(Atom("P", ("1", "2")), V3)
    with pytest.raises(VocabularyError):
        bind(Pa(frozenset({"x"})), V3)


def test_cover_counts():
    order = ("1", "2", "3")
    # hand count: covers of {1,2} by proper subsets {}, {1}, {2}: {1}{2} with or without {}
    assert len(list(covers(frozenset("12"), order))) == 2
    assert list(covers(frozenset(), order)) == [()]
    assert list(covers(frozenset("1"), order)) == []
    assert len(proper_subsets(frozenset("123"), order)) == 7
    # inclusion-exclusion over the 6 nonempty proper subsets: 2^6 - 3*2^3 + 3*2^1 - 1 = 45,
    # doubled because the empty set may be added to any cover
    assert len(list(covers(frozenset("123"), order))) == 2 * 45


def test_ca_edge_cases_warn():
    with pytest.warns(UserWarning, match="single player"):
        assert bind(Ca(frozenset({"1"})), V3) == FALSE
    with pytest.warns(UserWarning, match="vacuously"):
        f = bind(Ca(frozenset()), V3)
    assert f == TRUE


def test_ca_limit():
    v = Vocabulary(tuple("abcde"))
    with pytest.raises(ResourceError):
        bind(Ca(frozenset("abcde")), v)


def test_free():
    assert free(bind(parse("P(1) & [={2};<={1};<{3}] P(3)"), V3)) == frozenset({"1", "2"})
    assert free(Dep(q(("3",), ("1",)), "2")) == frozenset({"3"})
    assert free(TRUE) == frozenset()


def test_implies_expansion():
    a, b = Atom("P", ("1",)), Atom("P", ("2",))
    assert bind(parse("P(1) -> P(2)"), V3) == implies(a, b) == Not(And(a, Not(b)))


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_bind_yields_core(f):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = bind(f, VOCAB, ca_limit=3)
    assert is_core(g)


@settings(max_examples=200, deadline=None)
@given(core_formulas)
def test_resugar_inverts_bind(f):
    assert bind(resugar(f), VOCAB) == f
