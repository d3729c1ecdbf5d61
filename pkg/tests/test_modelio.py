import pytest

from lpfd.errors import FormatError
from lpfd.modelio import (BUILTIN_MODELS, dumps_model, load_config, load_model, loads_model,
                          model_from_dict, model_to_dict, save_model)
from lpfd.testgen import GenConfig

ROCKJAZZ = """
players: [E, A]
actions: [R, J]
preferences:
  mode: utility
  utilities:
    E: {RR: 1, RJ: 0, JR: 0, JJ: 4}
    A: {RR: 1, RJ: 0, JR: 0, JJ: 4}
"""


@pytest.mark.parametrize("name", BUILTIN_MODELS)
def test_builtin_round_trip(name):
    m = load_model(name)
    text = dumps_model(m)
    again = loads_model(text)
    assert again == m
    assert dumps_model(again) == text


def test_corpus_round_trip(small_corpus):
    for m in small_corpus:
        again = loads_model(dumps_model(m))
        assert again == m
        assert model_to_dict(again) == model_to_dict(m)


def test_inline_matches_builtin(rockjazz):
    assert loads_model(ROCKJAZZ) == rockjazz


def test_file_round_trip(tmp_path, pd2):
    path = tmp_path / "pd2.yaml"
    save_model(pd2, path)
    assert load_model(str(path)) == pd2


def test_fractions_are_exact():
    m = loads_model(ROCKJAZZ.replace("JJ: 4}", 'JJ: "1/3"}').replace("RR: 1,", "RR: 0.25,"))
    d = model_to_dict(m)
    assert d["preferences"]["utilities"]["E"]["JJ"] == "1/3"
    assert d["preferences"]["utilities"]["E"]["RR"] == "1/4"
    assert loads_model(dumps_model(m)) == m


def test_preorder_mode_closes_transitively():
    m = loads_model("""
players: [E]
actions: [a, b, c]
preferences:
  mode: preorder
  pairs:
    E: [[a, b], [b, c]]
""")
    a, c = m.profile("a"), m.profile("c")
    assert m.prefers("E", a, c)
    assert not m.prefers("E", c, a)


def test_partial_profiles_and_predicates():
    m = loads_model("""
players: [E, A]
actions: {E: [R, J], A: [R]}
profiles: [RR]
predicates:
  Good: {arity: 1, tuples: [[R]]}
preferences: {mode: preorder, pairs: {}}
""")
    assert len(m) == 1
    d = model_to_dict(m)
    assert d["profiles"] == ["RR"]
    assert loads_model(dumps_model(m)) == m


@pytest.mark.parametrize("text,needle", [
    ("players: [E\n", "line"),
    ("- just a list\n", "mapping"),
    (ROCKJAZZ + "colour: blue\n", "unknown model key"),
    ("players: [E]\nactions: [R]\n", "preferences"),
    (ROCKJAZZ.replace("    A: {RR: 1, RJ: 0, JR: 0, JJ: 4}\n", ""), "no utilities"),
    (ROCKJAZZ.replace("JJ: 4}\n", "}\n", 1), "no utility for player E"),
    (ROCKJAZZ.replace("JJ: 4}\n", "JJ: 4, ZZ: 1}\n", 1), "unknown profile"),
    (ROCKJAZZ.replace("mode: utility", "mode: ordinal"), "mode"),
    ("players: [E]\nactions: [a]\npreferences: {mode: preorder, pairs: {E: [[a]]}}\n", "must be [s, t]"),
    ("players: [E]\nactions: [a]\nprofiles: 3\npreferences: {mode: preorder}\n", "profiles"),
    ("players: [E]\nactions: [a]\npredicates: {P: {}}\npreferences: {mode: preorder}\n", "arity"),
])
def test_bad_model_files(text, needle):
    with pytest.raises(FormatError) as e:
        loads_model(text)
    assert needle in str(e.value)


def test_yaml_error_carries_position():
    with pytest.raises(FormatError) as e:
        loads_model("players: [E, A]\nactions: [R, J\npreferences: {}\n")
    assert "line" in str(e.value) and "column" in str(e.value)


def test_unknown_profile_in_pairs():
    with pytest.raises(FormatError, match="no profile 'z'"):
        loads_model("players: [E]\nactions: [a]\npreferences: {mode: preorder, pairs: {E: [[a, z]]}}\n")


def test_missing_file():
    with pytest.raises(FormatError):
        load_model("/nonexistent/model.yaml")


def test_export_is_total_order_free(pd1):
    # utility export lists every profile for every player
    d = model_to_dict(pd1)
    for row in d["preferences"]["utilities"].values():
        assert set(row) == {s.id for s in pd1.profiles}


def test_dict_round_trip_without_yaml(small_corpus):
    for m in small_corpus[:10]:
        assert model_from_dict(model_to_dict(m)) == m


def test_load_config(tmp_path):
    p = tmp_path / "gen.yaml"
    p.write_text("generator:\n  players: [2, 3]\n  actions: [1, 2]\n  mode: utility\n")
    cfg = load_config(p)
    assert cfg == GenConfig(players=(2, 3), actions=(1, 2), mode="utility")
    p.write_text("players: [2, 3]\n")
    assert load_config(p).players == (2, 3)
    p.write_text("colour: blue\n")
    with pytest.raises(FormatError):
        load_config(p)
    p.write_text("- 1\n")
    with pytest.raises(FormatError):
        load_config(p)
    with pytest.raises(FormatError):
        load_config(tmp_path / "missing.yaml")
