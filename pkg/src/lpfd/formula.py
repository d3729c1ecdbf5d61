"""Formula ASTs, macro expansion and ``Free``.

The core language has atoms, the two constants, negation, conjunction, the
universal modality ``Box(q, phi)`` and dependence atoms ``Dep(q, y)``.
Everything else (disjunction, implication, the dual modality, ``D``/``DD``,
and the game-theoretic operators ``pa``, ``paY``, ``na``, ``ca1``, ``ca2``,
``ca``) is a macro that :func:`bind` expands against a vocabulary.

``Box(q, phi)`` holds at s when phi holds at every t with ``s =_X t``,
``s <=_X' t`` and ``s <_X'' t`` -- it is *universal*, even though the
concrete syntax of the source literature writes it with angle brackets.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterable

from .errors import ResourceError, VocabularyError
from .model import Query, Vocabulary

# Above this size the cover disjunction for ``ca`` is not expanded; use the
# native solver in lpfd.analysis instead.
CA_EXPANSION_LIMIT = 4


@dataclass(frozen=True)
class Complement:
    """Group literal ``-{...}``: every player except the listed ones."""

    members: frozenset


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        from .syntax import to_text
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    pred: str
    args: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Box(Formula):
    query: Query
    body: Formula


@dataclass(frozen=True, slots=True)
class Dep(Formula):
    query: Query
    player: str


# -- macros ------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Dual(Formula):
    """Existential counterpart of Box: ``~Box(q, ~phi)``."""

    query: Query
    body: Formula


@dataclass(frozen=True, slots=True)
class DepAll(Formula):
    """Conjunction of ``Dep(q, y)`` over y in ``group``."""

    query: Query
    group: frozenset


@dataclass(frozen=True, slots=True)
class DD(Formula):
    group: frozenset
    body: Formula


@dataclass(frozen=True, slots=True)
class D(Formula):
    group: frozenset
    player: str


@dataclass(frozen=True, slots=True)
class Pa(Formula):
    group: frozenset


@dataclass(frozen=True, slots=True)
class PaY(Formula):
    fixed: frozenset
    group: frozenset


@dataclass(frozen=True, slots=True)
class Na(Formula):
    group: frozenset


@dataclass(frozen=True, slots=True)
class Ca1(Formula):
    group: frozenset


@dataclass(frozen=True, slots=True)
class Ca2(Formula):
    group: frozenset


@dataclass(frozen=True, slots=True)
class Ca(Formula):
    group: frozenset


CORE = (Atom, Top, Bottom, Not, And, Box, Dep)
MACROS = (Or, Implies, Dual, DepAll, DD, D, Pa, PaY, Na, Ca1, Ca2, Ca)

TRUE = Top()
FALSE = Bottom()


def q(eq=(), weak=(), strict=()) -> Query:
    """Shorthand for a Query over plain player sets."""
    return Query(frozenset(eq), frozenset(weak), frozenset(strict))


# -- core-level combinators (what the macros expand to) -----------------------

def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def lor(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def dual(query: Query, body: Formula) -> Formula:
    return Not(Box(query, Not(body)))


def big_and(parts: Iterable[Formula]) -> Formula:
    """Left-associated conjunction; the empty conjunction is ``true``."""
    out = None
    for p in parts:
        out = p if out is None else And(out, p)
    return TRUE if out is None else out


def big_or(parts: Iterable[Formula]) -> Formula:
    """Left-associated disjunction; the empty disjunction is ``false``."""
    out = None
    for p in parts:
        out = p if out is None else lor(out, p)
    return FALSE if out is None else out


def balanced_or(parts: list[Formula]) -> Formula:
    """Disjunction as a balanced tree, so huge disjunctions stay shallow."""
    if not parts:
        return FALSE
    while len(parts) > 1:
        nxt = [lor(parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def dep_all(query: Query, group: Iterable[str], order: tuple[str, ...]) -> Formula:
    group = frozenset(group)
    return big_and(Dep(query, y) for y in order if y in group)


def pa_y(fixed: frozenset, group: frozenset, order: tuple[str, ...]) -> Formula:
    """Conjunction over x in group of ``Box((fixed, group-{x}, {x}), false)``."""
    return big_and(Box(Query(frozenset(fixed), frozenset(group) - {x}, frozenset([x])), FALSE)
                   for x in order if x in group)


def proper_subsets(group: frozenset, order: tuple[str, ...]) -> list[frozenset]:
    """All subsets of ``group`` except ``group`` itself, by size then order."""
    members = [p for p in order if p in group]
    out = []
    for k in range(len(members)):
        out.extend(frozenset(c) for c in itertools.combinations(members, k))
    return out


def covers(group: frozenset, order: tuple[str, ...]):
    """Yield every family of proper subsets of ``group`` whose union is ``group``.

    Families are tuples listed in the order of :func:`proper_subsets`; the
    empty group yields exactly the empty family.
    """
    pool = proper_subsets(group, order)
    target = frozenset(group)
    for mask in range(1 << len(pool)):
        fam = tuple(pool[i] for i in range(len(pool)) if mask >> i & 1)
        if frozenset().union(*fam) == target:
            yield fam


# -- binding ------------------------------------------------------------------

class _Binder:
    def __init__(self, vocab: Vocabulary, ca_limit: int):
        self.vocab = vocab
        self.order = vocab.players
        self.all = frozenset(vocab.players)
        self.ca_limit = ca_limit
        self._paY = {}

    def group(self, g) -> frozenset:
        if isinstance(g, Complement):
            return self.vocab.complement(g.members)
        return self.vocab.check_group(g)

    def query(self, qq: Query) -> Query:
        return Query(self.group(qq.eq), self.group(qq.weak), self.group(qq.strict))

    def player(self, y: str) -> str:
        if y not in self.all:
            raise VocabularyError(f"unknown player {y!r}")
        return y

    def pa_y(self, fixed, group):
        key = (fixed, group)
        if key not in self._paY:
            self._paY[key] = pa_y(fixed, group, self.order)
        return self._paY[key]

    def na(self, group):
        return big_and(self.pa_y(self.all - {x}, frozenset([x])) for x in self.order if x in group)

    def pa(self, group):
        return self.pa_y(self.all - group, group)

    def __call__(self, f: Formula) -> Formula:
        match f:
            case Atom(pred, args):
                if pred not in self.vocab.predicates:
                    raise VocabularyError(f"unknown predicate {pred!r}")
                if len(args) != self.vocab.predicates[pred]:
                    raise VocabularyError(
                        f"{pred} has arity {self.vocab.predicates[pred]}, got {len(args)} argument(s)")
                for a in args:
                    self.player(a)
                return f
            case Top() | Bottom():
                return f
            case Not(body):
                return Not(self(body))
            case And(a, b):
                return And(self(a), self(b))
            case Box(qq, body):
                return Box(self.query(qq), self(body))
            case Dep(qq, y):
                return Dep(self.query(qq), self.player(y))
            case Or(a, b):
                return lor(self(a), self(b))
            case Implies(a, b):
                return implies(self(a), self(b))
            case Dual(qq, body):
                return dual(self.query(qq), self(body))
            case DepAll(qq, g):
                return dep_all(self.query(qq), self.group(g), self.order)
            case DD(g, body):
                return Box(Query(self.group(g)), self(body))
            case D(g, y):
                return Dep(Query(self.group(g)), self.player(y))
            case Pa(g):
                return self.pa(self.group(g))
            case PaY(fixed, g):
                return self.pa_y(self.group(fixed), self.group(g))
            case Na(g):
                return self.na(self.group(g))
            case Ca1(g):
                g = self.group(g)
                return And(self.pa(g), self.na(g))
            case Ca2(g):
                g = self.group(g)
                return big_and(self.pa(sub) for sub in self.vocab.subsets(g))
            case Ca(g):
                return self.ca(self.group(g))
        raise TypeError(f"not a formula: {f!r}")

    def ca(self, g: frozenset) -> Formula:
        if len(g) > self.ca_limit:
            raise ResourceError(
                f"ca over {len(g)} players is too large to expand (limit {self.ca_limit}); "
                "use the native solver in lpfd.analysis")
        if len(g) == 0:
            warnings.warn("ca({}) holds vacuously: the empty family covers the empty group",
                          stacklevel=3)
        elif len(g) == 1:
            warnings.warn("ca of a single player is unsatisfiable: no family of proper "
                          "subsets covers a singleton", stacklevel=3)
        nash = self.na(g)
        fixed = self.all - g
        # families share prefixes, so build each conjunction from its prefix's node
        prefix = {(): None}

        def conj(fam):
            if fam not in prefix:
                head = conj(fam[:-1])
                last = self.pa_y(fixed, fam[-1])
                prefix[fam] = last if head is None else And(head, last)
            return prefix[fam]

        disjuncts = []
        for fam in covers(g, self.order):
            body = conj(fam)
            disjuncts.append(nash if body is None else And(nash, body))
        return balanced_or(disjuncts)


def resolve_group(g, vocab: Vocabulary) -> frozenset:
    """Concrete member set of a group literal (complements included)."""
    return _Binder(vocab, CA_EXPANSION_LIMIT).group(g)


def bind(f: Formula, vocab: Vocabulary, *, ca_limit: int = CA_EXPANSION_LIMIT) -> Formula:
    """Resolve groups against ``vocab`` and expand every macro.

    Raises VocabularyError for unknown players or predicates and arity
    mismatches, and ResourceError when a ``ca`` group exceeds ``ca_limit``.
    """
    return _Binder(vocab, ca_limit)(f)


def is_core(f: Formula) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if not isinstance(g, CORE):
            return False
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, And):
            stack.extend((g.left, g.right))
        elif isinstance(g, Box):
            stack.append(g.body)
    return True


def free(f: Formula) -> frozenset:
    """Players the truth of ``f`` is claimed to depend on.

    Atoms contribute their arguments, Boolean connectives take unions, and a
    modality or dependence atom contributes exactly its ``=`` group.
    """
    match f:
        case Atom(_, args):
            return frozenset(args)
        case Top() | Bottom():
            return frozenset()
        case Not(body):
            return free(body)
        case And(a, b):
            return free(a) | free(b)
        case Box(qq, _) | Dep(qq, _):
            return frozenset(qq.eq)
    raise TypeError(f"free() needs a bound formula, got {type(f).__name__}")


def subformulas(f: Formula):
    """Pre-order walk over a core formula."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (Not, Box)):
            stack.append(g.body)
        elif isinstance(g, And):
            stack.extend((g.right, g.left))


# -- recognisers for expanded sugar (display and schema matching) -------------

def as_implies(f):
    if isinstance(f, Not) and isinstance(f.body, And) and isinstance(f.body.right, Not):
        return f.body.left, f.body.right.body
    return None


def as_or(f):
    if (isinstance(f, Not) and isinstance(f.body, And)
            and isinstance(f.body.left, Not) and isinstance(f.body.right, Not)):
        return f.body.left.body, f.body.right.body
    return None


def as_dual(f):
    if isinstance(f, Not) and isinstance(f.body, Box) and isinstance(f.body.body, Not):
        return f.body.query, f.body.body.body
    return None


def resugar(f: Formula) -> Formula:
    """Rewrite expanded implications, disjunctions and duals back into macros.

    ``bind(resugar(f), V) == f`` for every core formula ``f``; the result is
    only meant to be easier to read.
    """
    match f:
        case Not(body):
            d = as_dual(f)
            if d is not None:
                return Dual(d[0], resugar(d[1]))
            imp = as_implies(f)
            if imp is not None and not isinstance(imp[0], Not):
                return Implies(resugar(imp[0]), resugar(imp[1]))
            o = as_or(f)
            if o is not None:
                return Or(resugar(o[0]), resugar(o[1]))
            if imp is not None:
                return Implies(resugar(imp[0]), resugar(imp[1]))
            return Not(resugar(body))
        case And(a, b):
            return And(resugar(a), resugar(b))
        case Box(qq, body):
            return Box(qq, resugar(body))
    return f
