import pytest

from lpfd.derivation import check_script, is_tautology, parse_derivation
from lpfd.errors import FormatError, ParseError, VocabularyError
from lpfd.formula import bind
from lpfd.model import Vocabulary
from lpfd.modelio import builtin_proof
from lpfd.syntax import parse

PROOFS = ["pa_monotonicity.lpfdproof", "pa_monotonicity_pair.lpfdproof",
          "cover_theorem.lpfdproof", "necessitation.lpfdproof"]


def mutate(text, old, new, count=1):
    assert old in text, old
    return text.replace(old, new, count)


@pytest.mark.parametrize("name", PROOFS)
def test_shipped_proofs_accepted(name):
    v = check_script(builtin_proof(name))
    assert v.accepted, (v.line, v.reason)
    assert all(step["ok"] for step in v.log)


def test_conclusions_are_the_stated_theorems():
    v3 = Vocabulary(("1", "2", "3"))
    d = parse_derivation(builtin_proof("pa_monotonicity.lpfdproof"))
    assert d.conclusion == bind(parse("paY({}; {1,3}) -> paY({2}; {1,3})"), v3)
    d = parse_derivation(builtin_proof("cover_theorem.lpfdproof"))
    assert d.conclusion == bind(parse("paY(-{1,2,3}; {1,3}) & paY(-{1,2,3}; {2,3}) -> pa({1,2,3})"), v3)


MONO = builtin_proof("pa_monotonicity.lpfdproof")
COVER = builtin_proof("cover_theorem.lpfdproof")
NEC = builtin_proof("necessitation.lpfdproof")

# (label, script, expected line, expected code)
MUTATIONS = [
    ("wrong schema cited", mutate(MONO, "axiom(II.e, X={}, X'={3}", "axiom(II.d, X={}, X'={3}"), 1, "no_match"),
    ("unknown schema", mutate(MONO, "axiom(II.e, X={}, X'={1}", "axiom(II.z, X={}, X'={1}"), 2, "unknown_axiom"),
    ("argument disagrees", mutate(MONO, "Y={2}, Y'={3}", "Y={1,2}, Y'={3}"), 1, "substitution_mismatch"),
    ("monotonicity reversed",
     mutate(MONO, "1. [={}; <={3}; <{1}] false -> [={2}; <={3}; <{1}] false BY axiom(II.e, X={}, X'={3}, X''={1}, Y={2}, Y'={3}, Y''={1})",
            "1. [={2}; <={3}; <{1}] false -> [={}; <={3}; <{1}] false BY axiom(II.e)"), 1, "side_condition"),
    ("tautology weakened", mutate(MONO, "-> (paY({}; {1,3}) -> paY({2}; {1,3}))) BY TAUT",
                                  "-> (paY({2}; {1,3}) -> paY({}; {1,3}))) BY TAUT"), 3, "not_tautology"),
    ("MP cites a later line", mutate(MONO, "BY MP 1,3", "BY MP 1,5"), 4, "bad_reference"),
    ("MP cites itself", mutate(MONO, "BY MP 2,4", "BY MP 5,4"), 5, "bad_reference"),
    ("MP on unrelated lines", mutate(MONO, "BY MP 2,4", "BY MP 1,4"), 5, "bad_mp"),
    ("conclusion altered", mutate(MONO, "5. paY({}; {1,3}) -> paY({2}; {1,3})", "5. paY({}; {1,3}) -> paY({1}; {1,3})"),
     5, "bad_mp"),
    ("cover member dropped", mutate(COVER, "7. paY({}; {1,3}) & paY({}; {2,3}) -> pa({1,2,3}) BY MP 3,6",
                                    "7. paY({}; {1,3}) -> pa({1,2,3}) BY MP 3,6"), 7, "bad_mp"),
    ("cover axiom with non-superset", mutate(COVER, "[={}; <={3}; <{1}] false -> [={}; <={2,3}; <{1}] false BY axiom",
                                             "[={}; <={3}; <{1}] false -> [={}; <={2}; <{1}] false BY axiom"),
     1, "side_condition"),
    ("NEC with another box", mutate(NEC, "BY NEC 1 [={1}; <={}; <{2}]", "BY NEC 1 [={2}; <={}; <{2}]"), 2, "bad_nec"),
    ("NEC on a missing line", mutate(NEC, "BY NEC 1 [", "BY NEC 9 ["), 2, "bad_reference"),
    ("dependence outside its group", mutate(NEC, "dep[={1}; <={2}; <{}] 1 BY axiom(III.a, x=1, X={1})",
                                            "dep[={2}; <={2}; <{}] 1 BY axiom(III.a)"), 5, "side_condition"),
]


@pytest.mark.parametrize("label,script,line,code", MUTATIONS, ids=[m[0] for m in MUTATIONS])
def test_single_step_mutations_rejected(label, script, line, code):
    v = check_script(script)
    assert not v.accepted
    assert (v.line, v.code) == (line, code), v.reason


def test_c1_citation_rejected():
    script = "players: E, A\npredicates: P/1\n1. P(E) -> [={};<={};<{}] P(E) BY axiom(II.c1)\n"
    v = check_script(script)
    assert (v.accepted, v.line, v.code) == (False, 1, "side_condition")


def test_k_printed_variant_is_citable_but_k_is_the_axiom():
    script = ("players: 1\npredicates: P/1\n"
              "1. [={};<={};<{}](P(1) -> P(1)) -> ([={};<={};<{}] P(1) -> [={};<={};<{}] P(1)) BY axiom(II.b)\n")
    assert check_script(script).accepted


def test_mp_accepts_either_order():
    script = ("players: 1\npredicates: P/1\n"
              "1. P(1) -> P(1) BY TAUT\n"
              "2. (P(1) -> P(1)) -> (P(1) | ~P(1)) BY TAUT\n"
              "3. P(1) | ~P(1) BY MP 2,1\n")
    assert check_script(script).accepted


def test_tautology_checker():
    v = Vocabulary(("1",), {"P": 1})
    assert is_tautology(bind(parse("[={};<={};<{}] P(1) | ~[={};<={};<{}] P(1)"), v))
    assert not is_tautology(bind(parse("[={};<={};<{}] P(1) -> P(1)"), v))
    assert is_tautology(bind(parse("true"), v))


@pytest.mark.parametrize("script,exc", [
    ("1. true BY TAUT\n", FormatError),
    ("players: 1\n2. true BY TAUT\n", ParseError),
    ("players: 1\n1. true BY MAGIC\n", ParseError),
    ("players: 1\n1. true &\n", ParseError),
    ("players: 1\n1. P(1) BY TAUT\n", VocabularyError),
    ("players: 1\npredicates: P\n1. true BY TAUT\n", ParseError),
    ("players: 1\n1. true & BY TAUT\n", ParseError),
])
def test_malformed_scripts(script, exc):
    with pytest.raises(exc):
        parse_derivation(script)


def test_parse_error_reports_script_line():
    with pytest.raises(ParseError) as e:
        parse_derivation("players: 1\n# note\n\n1. true & BY TAUT\n")
    assert e.value.line == 4
