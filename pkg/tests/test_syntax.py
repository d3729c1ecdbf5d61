import pytest
from hypothesis import given, settings

from lpfd.errors import ParseError
from lpfd.formula import (And, Atom, Box, Ca, Complement, Dep, DepAll, Dual, Implies, Not, Or, Pa, PaY,
                          TRUE, FALSE, q)
from lpfd.syntax import parse, parse_group, parse_query, pretty, to_text

from strategies import formulas


def test_parse_box_and_atoms():
    f = parse("[={E}; <={}; <{A}] false")
    assert f == Box(q(("E",), (), ("A",)), FALSE)
    assert parse("P(E)") == Atom("P", ("E",))
    assert parse("R()") == Atom("R", ())


def test_precedence():
    f = parse("a() | b() & c() -> d()")
    assert f == Implies(Or(Atom("a", ()), And(Atom("b", ()), Atom("c", ()))), Atom("d", ()))
    # implication associates to the right
    g = parse("a() -> b() -> c()")
    assert g == Implies(Atom("a", ()), Implies(Atom("b", ()), Atom("c", ())))
    # prefix operators bind tighter than &
    h = parse("~a() & [={};<={};<{}] b()")
    assert h == And(Not(Atom("a", ())), Box(q(), Atom("b", ())))


def test_dep_forms():
    assert parse("dep[={1};<={};<{}] 2") == Dep(q(("1",)), "2")
    assert parse("dep[={1};<={};<{}] {2,3}") == DepAll(q(("1",)), frozenset({"2", "3"}))


def test_macros_and_complement():
    assert parse("pa(-{3})") == Pa(Complement(frozenset({"3"})))
    assert parse("paY({}; {1,2})") == PaY(frozenset(), frozenset({"1", "2"}))
    assert parse("ca({1,2,3})") == Ca(frozenset({"1", "2", "3"}))
    assert parse("dia[={};<={1};<{}] true") == Dual(q((), ("1",)), TRUE)


def test_group_and_query_parsers():
    assert parse_group("{b,a}") == frozenset({"a", "b"})
    assert parse_group("-{a}") == Complement(frozenset({"a"}))
    assert parse_query("[={};<={1};<{2}]") == q((), ("1",), ("2",))
    assert parse_query("={};<={1};<{2}") == q((), ("1",), ("2",))


@pytest.mark.parametrize("text,col", [
    ("P(E) &", 7),
    ("[={E};<={}] P(E)", 11),
    ("P(E) P(A)", 6),
    ("(P(E)", 6),
    ("P(E) $ Q", 6),
])
def test_parse_errors_carry_position(text, col):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert e.value.line == 1
    assert e.value.column == col


def test_parse_error_on_second_line():
    with pytest.raises(ParseError) as e:
        parse("P(E) &\n  & Q(A)")
    assert e.value.line == 2


def test_printer_is_canonical():
    f = parse("P(1) & P(2) & P(3)")
    assert to_text(f) == "(P(1) & P(2) & P(3))"
    assert to_text(parse("[={2,1};<={};<{10,9}] true")) == "[={1,2}; <={}; <{9,10}] true"


def test_pretty_resugars_core_forms():
    from lpfd.formula import bind, lor, implies, dual
    from lpfd.model import Vocabulary
    v = Vocabulary(("1", "2"), {"P": 1})
    f = bind(parse("P(1) -> dia[={1};<={};<{}] P(2)"), v)
    assert pretty(f) == "(P(1) -> dia[={1}; <={}; <{}] P(2))"


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_round_trip(f):
    assert parse(to_text(f)) == f
