"""Vocabularies, strategy profiles and preference-dependence (PD) models.

A PD model carries, for every player ``x``, a reflexive and transitive
relation ``s <=_x t`` ("t is at least as good as s for x") over the
admissible strategy profiles.  Everything the evaluator needs is derived from
three relation families:

* ``s =_X t``   -- s and t agree on the actions of every player in X,
* ``s <=_X t``  -- ``s <=_x t`` for every x in X,
* ``s <_X t``   -- ``s <_x t`` for every x in X, where ``<_x`` is the strict
  part of ``<=_x``.

All three are vacuous (the total relation) for the empty group.

Models are immutable.  Relations are stored as boolean matrices indexed by
the canonical profile order, which is lexicographic in the declared action
order of each player.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, FormatError, ModelError, VocabularyError

__all__ = [
    "Vocabulary",
    "Profile",
    "Query",
    "GroupRelationQuery",
    "PDModel",
    "agree",
    "natural_key",
    "from_payoff_table",
    "from_explicit_preorder",
    "transitive_closure",
]


def natural_key(name: str):
    """Sort key placing numeric identifiers in numeric order before names."""
    return (0, int(name), "") if name.isdigit() else (1, 0, name)


@dataclass(frozen=True)
class Vocabulary:
    players: tuple[str, ...]
    predicates: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        players = tuple(str(p) for p in self.players)
        if not players:
            raise VocabularyError("a vocabulary needs at least one player")
        if len(set(players)) != len(players):
            raise VocabularyError(f"duplicate player identifiers in {players}")
        preds = {str(k): int(v) for k, v in dict(self.predicates).items()}
        for name, arity in preds.items():
            if arity < 0:
                raise VocabularyError(f"predicate {name} has negative arity {arity}")
        object.__setattr__(self, "players", players)
        object.__setattr__(self, "predicates", preds)

    def __hash__(self):
        return hash((self.players, tuple(sorted(self.predicates.items()))))

    def check_group(self, group: Iterable[str]) -> frozenset[str]:
        group = frozenset(str(p) for p in group)
        unknown = group.difference(self.players)
        if unknown:
            raise VocabularyError(f"unknown player(s) {sorted(unknown, key=natural_key)}")
        return group

    def ordered(self, group: Iterable[str]) -> tuple[str, ...]:
        """Members of ``group`` in declaration order."""
        group = self.check_group(group)
        return tuple(p for p in self.players if p in group)

    def complement(self, group: Iterable[str]) -> frozenset[str]:
        return frozenset(self.players) - self.check_group(group)

    def subsets(self, group: Iterable[str] | None = None) -> list[frozenset[str]]:
        """All subsets of ``group`` (default: all players), by size then order."""
        members = self.players if group is None else self.ordered(group)
        out = []
        for k in range(len(members) + 1):
            out.extend(frozenset(c) for c in itertools.combinations(members, k))
        return out


@dataclass(frozen=True)
class Profile:
    """One admissible assignment of an action to every player."""

    players: tuple[str, ...]
    actions: tuple[str, ...]

    def __post_init__(self):
        if len(self.players) != len(self.actions):
            raise DomainError("a profile must assign exactly one action to every player")

    @property
    def id(self) -> str:
        # single-character action names concatenate ("RJ"); longer ones need a separator
        if all(len(a) == 1 for a in self.actions):
            return "".join(self.actions)
        return ",".join(self.actions)

    @property
    def assignment(self) -> dict[str, str]:
        return dict(zip(self.players, self.actions))

    def __getitem__(self, player: str) -> str:
        try:
            return self.actions[self.players.index(player)]
        except ValueError:
            raise VocabularyError(f"unknown player {player!r}") from None

    def __str__(self):
        return self.id


def agree(s: Profile, t: Profile, group: Iterable[str]) -> bool:
    """``s =_X t``: same action for every member of ``group``."""
    return all(s[x] == t[x] for x in group)


@dataclass(frozen=True)
class Query:
    """The three subscripts ``(=_X, <=_X', <_X'')`` of a modality.

    Components are player sets.  Unbound formulas may also hold a
    :class:`lpfd.formula.Complement` in any position.
    """

    eq: frozenset = frozenset()
    weak: frozenset = frozenset()
    strict: frozenset = frozenset()

    def groups(self):
        return (self.eq, self.weak, self.strict)

    def players(self) -> frozenset:
        return frozenset().union(*self.groups())


GroupRelationQuery = Query


def transitive_closure(rel: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a square boolean matrix (Warshall)."""
    out = np.array(rel, dtype=bool, copy=True)
    np.fill_diagonal(out, True)
    for k in range(out.shape[0]):
        out |= np.outer(out[:, k], out[k, :])
    return out


class PDModel:
    """A finite preference-dependence model.

    Parameters
    ----------
    vocab:
        players and predicate arities.
    actions:
        either a sequence of actions shared by all players or a mapping from
        player to that player's actions.
    profiles:
        admissible profiles (Profiles or action tuples); ``None`` means the
        full product of the per-player action sets.
    weak:
        mapping player -> boolean matrix ``W`` with ``W[i, j]`` iff
        profile i <=_x profile j, indexed in the order of ``profiles``.
        ``None`` gives every player the discrete (identity) preorder.
    interp:
        mapping predicate -> iterable of action tuples.  Unmentioned
        predicates are interpreted as empty.
    utilities:
        optional per-player numeric payoffs the preorders were induced from;
        kept only so the model can be written back in utility form.
    """

    def __init__(self, vocab: Vocabulary, actions, profiles, weak, interp=None, utilities=None):
        self.vocab = vocab
        players = vocab.players
        if isinstance(actions, Mapping):
            missing = [p for p in players if p not in {str(k) for k in actions}]
            if missing:
                raise FormatError(f"no actions given for player(s) {missing}")
            per = {str(k): tuple(str(a) for a in v) for k, v in actions.items()}
            self.action_sets = {p: per[p] for p in players}
        else:
            shared = tuple(str(a) for a in actions)
            self.action_sets = {p: shared for p in players}
        for p, acts in self.action_sets.items():
            if not acts:
                raise ModelError(f"player {p} has no actions")
            if len(set(acts)) != len(acts):
                raise ModelError(f"duplicate actions for player {p}")
        seen = {}
        for p in players:
            for a in self.action_sets[p]:
                seen.setdefault(a, None)
        self.actions = tuple(seen)

        if profiles is None:
            given = [Profile(players, combo) for combo in
                     itertools.product(*(self.action_sets[p] for p in players))]
            order = list(range(len(given)))
        else:
            given = [self._coerce_profile(s) for s in profiles]
            if len(set(given)) != len(given):
                raise ModelError("duplicate profiles")
            rank = {p: {a: i for i, a in enumerate(self.action_sets[p])} for p in players}
            order = sorted(range(len(given)),
                           key=lambda i: tuple(rank[p][a] for p, a in zip(players, given[i].actions)))
        if not given:
            raise ModelError("a PD model needs at least one strategy profile")
        self.profiles: tuple[Profile, ...] = tuple(given[i] for i in order)
        self._index = {s: i for i, s in enumerate(self.profiles)}
        self._by_id = {s.id: s for s in self.profiles}

        if weak is None:
            weak = {p: np.eye(len(given), dtype=bool) for p in players}
        self._weak = {}
        for p in players:
            if p not in weak:
                raise ModelError(f"no preference relation for player {p}")
            mat = np.asarray(weak[p], dtype=bool)
            n = len(given)
            if mat.shape != (n, n):
                raise ModelError(f"preference matrix for {p} has shape {mat.shape}, expected {(n, n)}")
            mat = mat[np.ix_(order, order)].copy()
            mat.setflags(write=False)
            self._weak[p] = mat
        self._check_preorders()

        self.interp = {}
        for name, tuples in (interp or {}).items():
            if name not in vocab.predicates:
                raise VocabularyError(f"interpretation for undeclared predicate {name!r}")
            arity = vocab.predicates[name]
            clean = set()
            for tup in tuples:
                tup = tuple(str(a) for a in tup)
                if len(tup) != arity:
                    raise ModelError(f"tuple {tup} for {name} does not have arity {arity}")
                if not set(tup) <= set(self.actions):
                    raise ModelError(f"tuple {tup} for {name} uses unknown actions")
                clean.add(tup)
            self.interp[name] = frozenset(clean)
        for name in vocab.predicates:
            self.interp.setdefault(name, frozenset())

        self.utilities = None
        if utilities is not None:
            self.utilities = {p: {s: Fraction(utilities[p][s]) for s in self.profiles} for p in players}

        self._eq = {}
        for k, p in enumerate(players):
            col = np.array([s.actions[k] for s in self.profiles], dtype=object)
            mat = col[:, None] == col[None, :]
            mat.setflags(write=False)
            self._eq[p] = mat
        self._strict = {}
        for p, w in self._weak.items():
            mat = w & ~w.T
            mat.setflags(write=False)
            self._strict[p] = mat
        self._relations = {}

    # -- construction helpers -------------------------------------------------

    def _coerce_profile(self, s) -> Profile:
        players = self.vocab.players
        if isinstance(s, Profile):
            if s.players != players:
                raise DomainError(f"profile {s} belongs to a different vocabulary")
            acts = s.actions
        elif isinstance(s, str):
            # the two id spellings: "RJ" and "coop,conf"
            acts = tuple(a.strip() for a in s.split(",")) if "," in s else tuple(s)
        else:
            acts = tuple(str(a) for a in s)
            if len(acts) != len(players):
                raise ModelError(f"profile {acts} does not assign an action to every player")
        for p, a in zip(players, acts):
            if a not in self.action_sets[p]:
                raise ModelError(f"action {a!r} is not available to player {p}")
        return Profile(players, acts)

    def _check_preorders(self):
        for p, w in self._weak.items():
            if not w.diagonal().all():
                raise ModelError(f"preference of {p} is not reflexive")
            composed = (w.astype(np.int32) @ w.astype(np.int32)) > 0
            if (composed & ~w).any():
                raise ModelError(f"preference of {p} is not transitive")

    # -- lookup ---------------------------------------------------------------

    def __len__(self):
        return len(self.profiles)

    def __iter__(self):
        return iter(self.profiles)

    def __contains__(self, s):
        return s in self._index

    def index(self, s: Profile) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise DomainError(f"profile {s} is not a profile of this model") from None

    def profile(self, ref) -> Profile:
        """Resolve a Profile, profile id, ``"a,b,c"`` string or action tuple."""
        if isinstance(ref, Profile):
            self.index(ref)
            return ref
        if isinstance(ref, str):
            if ref in self._by_id:
                return self._by_id[ref]
            parts = tuple(x.strip() for x in ref.strip("()").split(","))
        else:
            parts = tuple(str(a) for a in ref)
        cand = Profile(self.vocab.players, parts) if len(parts) == len(self.vocab.players) else None
        if cand is None or cand not in self._index:
            raise DomainError(f"no profile {ref!r} in this model")
        return cand

    # -- relations ------------------------------------------------------------

    def weak_matrix(self, player: str) -> np.ndarray:
        self.vocab.check_group([player])
        return self._weak[player]

    def strict_matrix(self, player: str) -> np.ndarray:
        self.vocab.check_group([player])
        return self._strict[player]

    def eq_matrix(self, player: str) -> np.ndarray:
        self.vocab.check_group([player])
        return self._eq[player]

    def prefers(self, player: str, s: Profile, t: Profile) -> bool:
        """``s <=_player t``."""
        return bool(self.weak_matrix(player)[self.index(s), self.index(t)])

    def relation(self, q: Query) -> np.ndarray:
        """Boolean matrix of ``s =_X t and s <=_X' t and s <_X'' t``."""
        key = (frozenset(q.eq), frozenset(q.weak), frozenset(q.strict))
        hit = self._relations.get(key)
        if hit is not None:
            return hit
        for g in key:
            self.vocab.check_group(g)
        n = len(self.profiles)
        rel = np.ones((n, n), dtype=bool)
        for x in key[0]:
            rel &= self._eq[x]
        for x in key[1]:
            rel &= self._weak[x]
        for x in key[2]:
            rel &= self._strict[x]
        rel.setflags(write=False)
        self._relations[key] = rel
        return rel

    def agree(self, s: Profile, t: Profile, group) -> bool:
        group = self.vocab.check_group(group)
        self.index(s), self.index(t)
        return agree(s, t, group)

    def weak_pref_all(self, s: Profile, t: Profile, group) -> bool:
        group = self.vocab.check_group(group)
        i, j = self.index(s), self.index(t)
        return all(self._weak[x][i, j] for x in group)

    def strict_pref_all(self, s: Profile, t: Profile, group) -> bool:
        group = self.vocab.check_group(group)
        i, j = self.index(s), self.index(t)
        return all(self._strict[x][i, j] for x in group)

    def reach_set(self, s: Profile, q: Query) -> list[Profile]:
        """Profiles t with s =_X t, s <=_X' t and s <_X'' t, in canonical order."""
        row = self.relation(q)[self.index(s)]
        return [self.profiles[j] for j in np.flatnonzero(row)]

    # -- properties -----------------------------------------------------------

    def is_total(self, player: str) -> bool:
        w = self.weak_matrix(player)
        return bool((w | w.T).all())

    @property
    def total(self) -> bool:
        return all(self.is_total(p) for p in self.vocab.players)

    def preference_pairs(self, player: str, *, reflexive: bool = False) -> list[tuple[Profile, Profile]]:
        """All pairs (s, t) with s <=_player t in canonical order."""
        w = self.weak_matrix(player)
        return [(self.profiles[i], self.profiles[j])
                for i, j in zip(*np.nonzero(w)) if reflexive or i != j]

    def __eq__(self, other):
        if not isinstance(other, PDModel):
            return NotImplemented
        return (self.vocab == other.vocab
                and self.action_sets == other.action_sets
                and self.profiles == other.profiles
                and self.interp == other.interp
                and all(np.array_equal(self._weak[p], other._weak[p]) for p in self.vocab.players))

    __hash__ = None

    def __repr__(self):
        return (f"PDModel(players={list(self.vocab.players)}, profiles={len(self.profiles)}, "
                f"total={self.total})")


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise FormatError(f"utility {value!r} is not a number")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except ValueError:
            raise FormatError(f"utility {value!r} is not a number") from None
    if isinstance(value, float):
        # exact decimal reading of what the user wrote, not the binary float
        return Fraction(repr(value))
    raise FormatError(f"utility {value!r} is not a number")


def _vocab(players, predicates) -> Vocabulary:
    return players if isinstance(players, Vocabulary) else Vocabulary(tuple(players), predicates or {})


def from_payoff_table(players, actions, utilities, *, profiles=None, predicates=None, interp=None) -> PDModel:
    """Build a total PD model from numeric payoffs.

    ``utilities`` maps each profile (a Profile, profile id, or action tuple)
    to a sequence with one number per player; ``s <=_x t`` iff
    ``u_x(s) <= u_x(t)``.  Comparison is exact (fractions), never float.
    """
    vocab = _vocab(players, predicates)
    shell = PDModel(vocab, actions, profiles, None)
    table = {}
    for key, values in utilities.items():
        s = shell.profile(key)
        values = list(values)
        if len(values) != len(vocab.players):
            raise FormatError(f"utility entry for {s} needs {len(vocab.players)} numbers")
        table[s] = [_as_fraction(v) for v in values]
    missing = [s.id for s in shell.profiles if s not in table]
    if missing:
        raise FormatError(f"missing utility entries for profile(s) {missing}")
    weak = {}
    for k, p in enumerate(vocab.players):
        u = [table[s][k] for s in shell.profiles]
        weak[p] = np.array([[a <= b for b in u] for a in u], dtype=bool)
    per_player = {p: {s: table[s][k] for s in shell.profiles} for k, p in enumerate(vocab.players)}
    return PDModel(vocab, shell.action_sets, shell.profiles, weak, interp, utilities=per_player)


def from_explicit_preorder(players, actions, profiles, pairs, *, predicates=None, interp=None) -> PDModel:
    """Build a PD model whose preorders are the closures of the given pairs.

    ``pairs`` maps player -> iterable of ``(s, t)`` meaning ``s <=_x t``;
    players without an entry get the discrete preorder.
    """
    vocab = _vocab(players, predicates)
    shell = PDModel(vocab, actions, profiles, None)
    pairs = {str(k): v for k, v in (pairs or {}).items()}
    unknown = set(pairs) - set(vocab.players)
    if unknown:
        raise VocabularyError(f"preference pairs for unknown player(s) {sorted(unknown)}")
    weak = {}
    for p in vocab.players:
        rel = np.eye(len(shell), dtype=bool)
        for s, t in pairs.get(p, ()):
            rel[shell.index(shell.profile(s)), shell.index(shell.profile(t))] = True
        weak[p] = transitive_closure(rel)
    return PDModel(vocab, shell.action_sets, shell.profiles, weak, interp)
