"""YAML model files, bundled fixtures and structured output.

Model file layout::

    players: [E, A]
    actions: [R, J]              # shared, or {E: [R, J], A: [R, J]}
    profiles: all                # or a list of profile ids / action lists
    predicates:                  # optional
      P: {arity: 1, tuples: [[R]]}
    preferences:
      mode: utility              # numbers per player and profile
      utilities:
        E: {RR: 1, RJ: 0, JR: 0, JJ: 4}
        A: {RR: 1, RJ: 0, JR: 0, JJ: 4}

or, for preorders that need not be total::

    preferences:
      mode: preorder
      pairs:                     # [s, t] means t is at least as good as s
        E: [[RJ, RR], [RR, JJ]]

Pairs are closed under reflexivity and transitivity on load.  Utilities
are exact: integers, decimal literals and ``"p/q"`` strings are all read
as fractions.  Player, action and profile names are always strings, so
``1`` and ``"1"`` are the same player.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

import yaml

from .errors import DomainError, FormatError, LPFDError
from .model import PDModel, Vocabulary, from_explicit_preorder, from_payoff_table
from .testgen import GenConfig

BUILTIN_MODELS = ("rockjazz", "pd1", "pd2")
_TOP_KEYS = {"players", "actions", "profiles", "predicates", "preferences", "name", "description"}


def _strs(seq, what):
    if not isinstance(seq, (list, tuple)):
        raise FormatError(f"{what} must be a list")
    return [str(x) for x in seq]


def _profile_ref(ref):
    if isinstance(ref, (list, tuple)):
        return tuple(str(a) for a in ref)
    return str(ref)


def model_from_dict(data: dict) -> PDModel:
    if not isinstance(data, dict):
        raise FormatError("a model file must be a mapping")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise FormatError(f"unknown model key(s) {sorted(unknown)}")
    for key in ("players", "actions", "preferences"):
        if key not in data:
            raise FormatError(f"model file lacks {key!r}")
    players = _strs(data["players"], "players")
    acts = data["actions"]
    if isinstance(acts, dict):
        actions = {str(k): _strs(v, f"actions of {k}") for k, v in acts.items()}
    else:
        actions = _strs(acts, "actions")
    profiles = data.get("profiles", "all")
    if profiles in ("all", None):
        profiles = None
    elif isinstance(profiles, list):
        profiles = [_profile_ref(s) for s in profiles]
    else:
        raise FormatError("profiles must be 'all' or a list")

    predicates, interp = {}, {}
    for name, decl in (data.get("predicates") or {}).items():
        if not isinstance(decl, dict) or "arity" not in decl:
            raise FormatError(f"predicate {name} needs an arity")
        predicates[str(name)] = int(decl["arity"])
        interp[str(name)] = [tuple(str(a) for a in tup) for tup in decl.get("tuples") or []]
    vocab = Vocabulary(tuple(players), predicates)

    prefs = data["preferences"]
    if not isinstance(prefs, dict):
        raise FormatError("preferences must be a mapping")
    mode = prefs.get("mode")
    if mode == "utility":
        table = {str(p): {str(k): v for k, v in (row or {}).items()}
                 for p, row in (prefs.get("utilities") or {}).items()}
        missing = [p for p in players if p not in table]
        if missing:
            raise FormatError(f"no utilities for player(s) {missing}")
        shell = PDModel(vocab, actions, profiles, None)
        rows = {}
        for s in shell.profiles:
            vals = []
            for p in players:
                row = table[p]
                key = s.id if s.id in row else ",".join(s.actions)
                if key not in row:
                    raise FormatError(f"no utility for player {p} at profile {s.id}")
                vals.append(row[key])
            rows[s] = vals
        extra = {k for row in table.values() for k in row} - {s.id for s in shell.profiles} \
            - {",".join(s.actions) for s in shell.profiles}
        if extra:
            raise FormatError(f"utilities mention unknown profile(s) {sorted(extra)}")
        return from_payoff_table(vocab, actions, rows, profiles=shell.profiles, interp=interp)
    if mode == "preorder":
        pairs = {}
        for p, seq in (prefs.get("pairs") or {}).items():
            out = []
            for pair in seq or []:
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise FormatError(f"preference pair for {p} must be [s, t], got {pair!r}")
                out.append((_profile_ref(pair[0]), _profile_ref(pair[1])))
            pairs[str(p)] = out
        try:
            return from_explicit_preorder(vocab, actions, profiles, pairs, interp=interp)
        except DomainError as e:
            raise FormatError(f"preference pairs: {e}") from None
    raise FormatError(f"preferences.mode must be 'utility' or 'preorder', got {mode!r}")


def _number(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def model_to_dict(m: PDModel) -> dict:
    """Canonical mapping; ``model_from_dict`` inverts it exactly."""
    players = list(m.vocab.players)
    sets = [list(m.action_sets[p]) for p in players]
    actions = sets[0] if all(s == sets[0] for s in sets) else {p: list(m.action_sets[p]) for p in players}
    full = 1
    for s in sets:
        full *= len(s)
    out = {"players": players, "actions": actions,
           "profiles": "all" if len(m) == full else [s.id for s in m.profiles]}
    if m.vocab.predicates:
        out["predicates"] = {name: {"arity": ar, "tuples": [list(t) for t in sorted(m.interp[name])]}
                             for name, ar in sorted(m.vocab.predicates.items())}
    if m.utilities is not None:
        out["preferences"] = {"mode": "utility", "utilities": {
            p: {s.id: _number(m.utilities[p][s]) for s in m.profiles} for p in players}}
    else:
        out["preferences"] = {"mode": "preorder", "pairs": {
            p: [[s.id, t.id] for s, t in m.preference_pairs(p)] for p in players}}
    return out


def loads_model(text: str) -> PDModel:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" (line {mark.line + 1}, column {mark.column + 1})" if mark else ""
        raise FormatError(f"invalid YAML{where}: {getattr(e, 'problem', e)}") from None
    return model_from_dict(data)


def dumps_model(m: PDModel) -> str:
    return yaml.safe_dump(model_to_dict(m), sort_keys=False, default_flow_style=None, width=100)


def builtin_text(name: str) -> str:
    return resources.files("lpfd").joinpath("data", "models", f"{name}.yaml").read_text()


def load_model(ref: str) -> PDModel:
    """Load a model file, or a bundled fixture by name (``rockjazz``, ``pd1``, ``pd2``)."""
    path = Path(ref)
    if not path.exists() and ref in BUILTIN_MODELS:
        return loads_model(builtin_text(ref))
    try:
        text = path.read_text()
    except OSError as e:
        raise FormatError(f"cannot read model {ref!r}: {e.strerror}") from None
    return loads_model(text)


def save_model(m: PDModel, path) -> None:
    Path(path).write_text(dumps_model(m))


def builtin_proof(name: str) -> str:
    return resources.files("lpfd").joinpath("data", "proofs", name).read_text()


def load_config(path) -> GenConfig:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except OSError as e:
        raise FormatError(f"cannot read config {path!r}: {e.strerror}") from None
    except yaml.YAMLError as e:
        raise FormatError(f"invalid YAML in config: {e}") from None
    if not isinstance(data, dict):
        raise FormatError("a generator config must be a mapping")
    return GenConfig.from_dict(data.get("generator", data))


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def error_payload(err: LPFDError) -> dict:
    out = {"ok": False, "reason": err.reason, "message": str(err)}
    for attr in ("line", "column"):
        if hasattr(err, attr):
            out[attr] = getattr(err, attr)
    return out
