"""Seeded random PD models and brute-force oracles.

The oracles are transcriptions of the definitions in plain Python loops over
profiles.  They read only profiles and the primitive ``prefers`` relation of
a model and must not import :mod:`lpfd.analysis` or :mod:`lpfd.semantics`:
their value lies in being an independent second route.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import FormatError, ModelError, ResourceError
from .formula import And, Atom, Bottom, Box, Dep, Not, Top
from .model import PDModel, Vocabulary, agree, from_payoff_table, transitive_closure

ORACLE_CA_LIMIT = 5


@dataclass(frozen=True)
class GenConfig:
    players: tuple[int, int] = (1, 4)
    actions: tuple[int, int] = (1, 3)
    density: float = 1.0
    mode: str = "mixed"          # "utility", "preorder" or "mixed"
    total: bool | None = None    # force total (True) or random-preorder style (False)
    pair_prob: float = 0.15
    utility_levels: int = 4
    predicates: tuple[int, int] = (0, 2)
    arity: tuple[int, int] = (0, 2)
    seed: int = 0

    def __post_init__(self):
        for name in ("players", "actions", "predicates", "arity"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise FormatError(f"bad range for {name}: {(lo, hi)}")
        if self.players[0] < 1 or self.actions[0] < 1:
            raise FormatError("need at least one player and one action")
        if not 0.0 <= self.density <= 1.0:
            raise FormatError("density must lie in [0, 1]")
        if self.mode not in ("utility", "preorder", "mixed"):
            raise FormatError(f"unknown preference mode {self.mode!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "GenConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise FormatError(f"unknown GenConfig key(s) {sorted(unknown)}")
        kw = {k: tuple(v) if isinstance(v, list) else v for k, v in data.items()}
        return cls(**kw)

    def to_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}

    def with_seed(self, seed: int) -> "GenConfig":
        return GenConfig(**{**asdict(self), "seed": seed})


FUZZ_CONFIG = GenConfig(players=(1, 4), actions=(1, 3), density=0.85, mode="mixed")


def _random_preorder(rng: random.Random, n: int, p: float) -> np.ndarray:
    rel = np.eye(n, dtype=bool)
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < p:
                rel[i, j] = True
    return transitive_closure(rel)


def generate(cfg: GenConfig, retries: int = 20) -> PDModel:
    """Deterministic per ``cfg.seed``."""
    rng = random.Random(cfg.seed)
    for _ in range(retries):
        try:
            return _generate(cfg, rng)
        except ModelError:
            continue
    raise ModelError(f"could not generate a valid model for {cfg}")


def _generate(cfg: GenConfig, rng: random.Random) -> PDModel:
    n_players = rng.randint(*cfg.players)
    players = tuple(str(i + 1) for i in range(n_players))
    letters = "abcdefghijklmnopqrstuvwxyz"
    action_sets = {p: tuple(letters[:rng.randint(*cfg.actions)]) for p in players}
    product = list(itertools.product(*(action_sets[p] for p in players)))
    profiles = [s for s in product if rng.random() < cfg.density]
    if not profiles:
        profiles = [rng.choice(product)]

    preds = {}
    for k in range(rng.randint(*cfg.predicates)):
        preds["PQRS"[k % 4] + ("" if k < 4 else str(k))] = rng.randint(*cfg.arity)
    vocab = Vocabulary(players, preds)
    all_actions = sorted({a for acts in action_sets.values() for a in acts})
    interp = {name: [t for t in itertools.product(all_actions, repeat=ar) if rng.random() < 0.5]
              for name, ar in preds.items()}

    mode = cfg.mode
    if mode == "mixed":
        mode = "utility" if rng.random() < 0.5 else "preorder"
    if cfg.total is True:
        mode = "utility"
    if mode == "utility":
        utilities = {s: [rng.randrange(cfg.utility_levels) for _ in players] for s in profiles}
        return from_payoff_table(vocab, action_sets, utilities, profiles=profiles, interp=interp)
    shell = PDModel(vocab, action_sets, profiles, None)
    weak = {p: _random_preorder(rng, len(shell), cfg.pair_prob) for p in players}
    return PDModel(vocab, action_sets, shell.profiles, weak, interp)


def fuzz_models(count: int, seed: int = 0, cfg: GenConfig = FUZZ_CONFIG):
    """``count`` models with sub-seeds ``seed, seed+1, ...``."""
    return [generate(cfg.with_seed(seed + k)) for k in range(count)]


# -- oracles ------------------------------------------------------------------------

def _le(m, x, s, t):
    return m.prefers(x, s, t)


def _lt(m, x, s, t):
    return m.prefers(x, s, t) and not m.prefers(x, t, s)


def oracle_nash(m: PDModel, group) -> list:
    everyone = set(m.vocab.players)
    out = []
    for s in m.profiles:
        blocked = False
        for x in group:
            for t in m.profiles:
                if agree(s, t, everyone - {x}) and _lt(m, x, s, t):
                    blocked = True
        if not blocked:
            out.append(s)
    return out


def oracle_weak_pareto(m: PDModel, group) -> list:
    rest = set(m.vocab.players) - set(group)
    out = []
    for s in m.profiles:
        if not any(agree(s, t, rest) and all(_lt(m, x, s, t) for x in group) for t in m.profiles):
            out.append(s)
    return out


def _pa_y_at(m, s, fixed, group) -> bool:
    for t in m.profiles:
        if (agree(s, t, fixed)
                and all(_le(m, x, s, t) for x in group)
                and any(_lt(m, x, s, t) for x in group)):
            return False
    return True


def oracle_pa_y(m: PDModel, fixed, group) -> list:
    return [s for s in m.profiles if _pa_y_at(m, s, fixed, group)]


def oracle_strong_pareto(m: PDModel, group) -> list:
    return oracle_pa_y(m, set(m.vocab.players) - set(group), group)


def oracle_ca1(m: PDModel, group) -> list:
    sp = oracle_strong_pareto(m, group)
    ne = oracle_nash(m, group)
    return [s for s in m.profiles if s in sp and s in ne]


def _all_subsets(members):
    for k in range(len(members) + 1):
        yield from itertools.combinations(members, k)


def oracle_ca2(m: PDModel, group) -> list:
    members = [p for p in m.vocab.players if p in set(group)]
    return [s for s in m.profiles
            if all(_pa_y_at(m, s, set(m.vocab.players) - set(sub), sub) for sub in _all_subsets(members))]


def all_covers(group, order) -> list[tuple]:
    """Every family of proper subsets of ``group`` whose union is ``group``."""
    members = [p for p in order if p in set(group)]
    if len(members) > ORACLE_CA_LIMIT:
        raise ResourceError(f"cover enumeration over {len(members)} players is too large")
    proper = [frozenset(c) for c in _all_subsets(members) if len(c) < len(members)]
    target = frozenset(members)
    out = []
    for mask in range(1 << len(proper)):
        fam = [proper[i] for i in range(len(proper)) if mask >> i & 1]
        union = set()
        for c in fam:
            union |= c
        if union == target:
            out.append(tuple(fam))
    return out


def oracle_ca(m: PDModel, group) -> list:
    """Search every cover explicitly."""
    order = m.vocab.players
    group = set(group)
    rest = set(order) - group
    fams = all_covers(group, order)
    ne = oracle_nash(m, group)
    out = []
    for s in m.profiles:
        if s not in ne:
            continue
        good = {}
        for fam in fams:
            ok = True
            for sub in fam:
                if sub not in good:
                    good[sub] = _pa_y_at(m, s, rest, sub)
                if not good[sub]:
                    ok = False
                    break
            if ok:
                out.append(s)
                break
    return out


# -- reference evaluator ----------------------------------------------------------------

def reference_reach(m: PDModel, s, query) -> list:
    return [t for t in m.profiles
            if agree(s, t, query.eq)
            and all(_le(m, x, s, t) for x in query.weak)
            and all(_lt(m, x, s, t) for x in query.strict)]


def reference_eval(m: PDModel, s, f) -> bool:
    """Direct recursive reading of the truth definition (bound formulas only)."""
    if isinstance(f, Atom):
        return tuple(s[a] for a in f.args) in m.interp[f.pred]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not reference_eval(m, s, f.body)
    if isinstance(f, And):
        return reference_eval(m, s, f.left) and reference_eval(m, s, f.right)
    if isinstance(f, Box):
        return all(reference_eval(m, t, f.body) for t in reference_reach(m, s, f.query))
    if isinstance(f, Dep):
        return all(s[f.player] == t[f.player] for t in reference_reach(m, s, f.query))
    raise TypeError(f"reference_eval needs a bound formula, got {type(f).__name__}")
