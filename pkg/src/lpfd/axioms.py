"""Axiom schemata of the LPFD Hilbert system, instance enumeration and
soundness fuzzing.

A schema is described by

* a *space*: the metavariables in the order they are chosen, each with a
  domain that may depend on earlier choices (``Y`` ranges over supersets of
  ``X`` for monotonicity, and so on),
* side conditions, checked on a complete substitution,
* ``build``: substitution -> concrete (bound, core) formula,
* ``extract``: concrete formula -> candidate substitution.

Matching is ``extract`` followed by the side conditions and a rebuild that
must reproduce the candidate exactly, so ``build`` is the single source of
truth for each schema's shape.  Matching is purely syntactic.

Substitution keys: ``X``, ``X'``, ``X''``, ``Y``, ``Z`` (groups), ``Y'``,
``Y''`` (groups, monotonicity only), ``x`` (a player), ``phi``, ``psi``
(formulas).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from .errors import ResourceError

from .formula import (FALSE, TRUE, And, Atom, Bottom, Box, Dep, Formula, Not, Top, as_dual,
                      as_implies, big_or, dep_all, dual, free, implies, lor)
from .model import PDModel, Query, Vocabulary
from .semantics import truth_vector

E = frozenset()


def _q(eq, weak, strict) -> Query:
    return Query(frozenset(eq), frozenset(weak), frozenset(strict))


def _qs(s) -> Query:
    return _q(s["X"], s["X'"], s["X''"])


def _from_q(qq: Query, **more) -> dict:
    return {"X": qq.eq, "X'": qq.weak, "X''": qq.strict, **more}


def read_dep_all(f: Formula):
    """Undo :func:`lpfd.formula.dep_all`: returns (query or None, group) or None."""
    if isinstance(f, Top):
        return None, E
    deps = []
    while isinstance(f, And):
        if not isinstance(f.right, Dep):
            return None
        deps.append(f.right)
        f = f.left
    if not isinstance(f, Dep):
        return None
    deps.append(f)
    queries = {d.query for d in deps}
    if len(queries) != 1:
        return None
    return deps[0].query, frozenset(d.player for d in deps)


# -- domains ---------------------------------------------------------------------

def _any(s, v: Vocabulary):
    return v.subsets()


def _supersets(var):
    return lambda s, v: [g for g in v.subsets() if s[var] <= g]


def _subsets(var):
    return lambda s, v: v.subsets(s[var])


def _containing(var):
    return lambda s, v: [g for g in v.subsets() if s[var] in g]


def _supersets_of_free(var):
    return lambda s, v: [g for g in v.subsets() if free(s[var]) <= g]


def _players(s, v: Vocabulary):
    return list(v.players)


FORMULA = "formula"


@dataclass(frozen=True)
class Condition:
    text: str
    check: Callable[[dict], bool]


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    text: str
    space: tuple                     # ((var, domain or FORMULA), ...)
    build: Callable[[dict, tuple], Formula]
    extract: Callable[[Formula], Optional[dict]]
    conditions: tuple = ()

    @property
    def variables(self) -> tuple:
        return tuple(v for v, _ in self.space)

    def instantiate(self, subst: dict, vocab: Vocabulary) -> Formula:
        return self.build(subst, vocab.players)

    def holds(self, subst: dict) -> list[Condition]:
        """Side conditions violated by ``subst`` (empty list when all hold)."""
        return [c for c in self.conditions if not c.check(subst)]


# -- the schemata ------------------------------------------------------------------

def _ex_K(f):
    imp = as_implies(f)
    if imp is None or not isinstance(imp[0], Box):
        return None
    inner = as_implies(imp[0].body)
    if inner is None:
        return None
    return _from_q(imp[0].query, phi=inner[0], psi=inner[1])


def _b_K(s, order):
    qq = _qs(s)
    return implies(Box(qq, implies(s["phi"], s["psi"])),
                   implies(Box(qq, s["phi"]), Box(qq, s["psi"])))


def _b_K_printed(s, order):
    qq = _qs(s)
    return And(Box(qq, implies(s["phi"], s["psi"])),
               implies(Box(qq, s["phi"]), Box(qq, s["psi"])))


def _ex_K_printed(f):
    if not isinstance(f, And) or not isinstance(f.left, Box):
        return None
    inner = as_implies(f.left.body)
    if inner is None:
        return None
    return _from_q(f.left.query, phi=inner[0], psi=inner[1])


def _b_c1(s, order):
    return implies(s["phi"], Box(_q(s["X"], E, E), s["phi"]))


def _ex_c1(f):
    imp = as_implies(f)
    if imp is None or not isinstance(imp[1], Box):
        return None
    return {"X": imp[1].query.eq, "phi": imp[0]}


def _preference_free(f) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Box, Dep)) and (g.query.weak or g.query.strict):
            return False
        if isinstance(g, (Not, Box)):
            stack.append(g.body)
        elif isinstance(g, And):
            stack.extend((g.left, g.right))
    return True


def _b_c2(s, order):
    qq = _qs(s)
    return implies(Box(qq, s["phi"]), Box(qq, Box(qq, s["phi"])))


def _ex_box_antecedent(f):
    imp = as_implies(f)
    if imp is None or not isinstance(imp[0], Box):
        return None
    return _from_q(imp[0].query, phi=imp[0].body)


def _b_d(s, order):
    return implies(Box(_q(s["X"], s["X'"], E), s["phi"]), s["phi"])


def _b_e(s, order):
    return implies(Box(_qs(s), s["phi"]), Box(_q(s["Y"], s["Y'"], s["Y''"]), s["phi"]))


def _ex_e(f):
    imp = as_implies(f)
    if imp is None or not isinstance(imp[0], Box) or not isinstance(imp[1], Box):
        return None
    hi = imp[1].query
    return _from_q(imp[0].query, phi=imp[0].body, Y=hi.eq, **{"Y'": hi.weak, "Y''": hi.strict})


def _b_f(s, order):
    return implies(dual(_qs(s), s["phi"]), dual(_q(s["X"], s["X'"] | s["X''"], s["X''"]), s["phi"]))


def _ex_dual_antecedent(f):
    imp = as_implies(f)
    if imp is None:
        return None
    d = as_dual(imp[0])
    if d is None:
        return None
    return _from_q(d[0], phi=d[1])


def _b_g(s, order):
    X, X1, X2, Y = s["X"], s["X'"], s["X''"], s["Y"]
    return implies(dual(_qs(s), dual(_q(X, X1 - Y, X2 | Y), s["phi"])),
                   dual(_q(X, X1, X2 | Y), s["phi"]))


def _ex_nested_dual(which):
    def ex(f):
        imp = as_implies(f)
        if imp is None:
            return None
        outer = as_dual(imp[0])
        if outer is None:
            return None
        inner = as_dual(outer[1])
        if inner is None:
            return None
        qq, q2 = outer[0], inner[0]
        y = qq.weak - q2.weak if which == "g" else qq.strict - q2.strict
        return _from_q(qq, phi=inner[1], Y=y)
    return ex


def _b_h(s, order):
    X, X1, X2, Y = s["X"], s["X'"], s["X''"], s["Y"]
    return implies(dual(_qs(s), dual(_q(X, X1 | Y, X2 - Y), s["phi"])),
                   dual(_q(X, X1 | Y, X2), s["phi"]))


def _b_j(s, order):
    X, X1, X2 = s["X"], s["X'"], s["X''"]
    qq = _qs(s)
    branches = big_or(dual(_q(X, X1, X2 | {x}), s["psi"]) for x in order if x in X1)
    tail = dual(qq, And(s["psi"], dual(_q(X, X1, E), s["phi"])))
    return implies(And(s["phi"], dual(qq, s["psi"])), lor(branches, tail))


def _ex_j(f):
    imp = as_implies(f)
    if imp is None or not isinstance(imp[0], And):
        return None
    d = as_dual(imp[0].right)
    if d is None:
        return None
    return _from_q(d[0], phi=imp[0].left, psi=d[1])


def _b_IIIa(s, order):
    return Dep(_qs(s), s["x"])


def _ex_IIIa(f):
    if not isinstance(f, Dep):
        return None
    return _from_q(f.query, x=f.player)


def _b_IIIb(s, order):
    qq = _qs(s)
    return implies(And(dep_all(qq, s["Y"], order), dep_all(_q(s["Y"], s["X'"], s["X''"]), s["Z"], order)),
                   dep_all(qq, s["Z"], order))


def _ex_IIIb(f):
    imp = as_implies(f)
    if imp is None or not isinstance(imp[0], And):
        return None
    left = read_dep_all(imp[0].left)
    right = read_dep_all(imp[0].right)
    cons = read_dep_all(imp[1])
    if left is None or right is None or cons is None:
        return None
    qq = left[0] or cons[0] or (right[0] and _q(E, right[0].weak, right[0].strict)) or _q(E, E, E)
    y = right[0].eq if right[0] is not None else left[1]
    return _from_q(qq, Y=y, Z=right[1] if right[0] is not None else cons[1])


def _b_IVa(s, order):
    qq = _qs(s)
    return implies(And(dep_all(qq, s["Y"], order), Box(_q(s["Y"], s["X'"], s["X''"]), s["phi"])),
                   Box(qq, s["phi"]))


def _ex_IVa(f):
    imp = as_implies(f)
    if imp is None or not isinstance(imp[0], And) or not isinstance(imp[1], Box):
        return None
    inner = imp[0].right
    if not isinstance(inner, Box):
        return None
    return _from_q(imp[1].query, phi=imp[1].body, Y=inner.query.eq)


Q3 = (("X", _any), ("X'", _any), ("X''", _any))

K = AxiomSchema(
    "II.b", "[q](phi -> psi) -> ([q]phi -> [q]psi)",
    Q3 + (("phi", FORMULA), ("psi", FORMULA)), _b_K, _ex_K)

K_PRINTED = AxiomSchema(
    "II.b-printed", "[q](phi -> psi) & ([q]phi -> [q]psi)",
    Q3 + (("phi", FORMULA), ("psi", FORMULA)), _b_K_printed, _ex_K_printed)

C1 = AxiomSchema(
    "II.c1", "phi -> [=X; <={}; <{}]phi, provided Free(phi) <= X",
    (("phi", FORMULA), ("X", _supersets_of_free("phi"))), _b_c1, _ex_c1,
    (Condition("Free(phi) <= X", lambda s: free(s["phi"]) <= s["X"]),))

C1_PREFERENCE_FREE = AxiomSchema(
    "II.c1-pf", "phi -> [=X; <={}; <{}]phi, provided Free(phi) <= X and phi has no "
                "preference subscripts",
    (("phi", FORMULA), ("X", _supersets_of_free("phi"))), _b_c1, _ex_c1,
    (Condition("Free(phi) <= X", lambda s: free(s["phi"]) <= s["X"]),
     Condition("phi has no preference subscripts", lambda s: _preference_free(s["phi"]))))

C2 = AxiomSchema(
    "II.c2", "[q]phi -> [q][q]phi", Q3 + (("phi", FORMULA),), _b_c2, _ex_box_antecedent)

D_AX = AxiomSchema(
    "II.d", "[=X; <=X'; <{}]phi -> phi",
    (("X", _any), ("X'", _any), ("phi", FORMULA)), _b_d,
    lambda f: (lambda r: r and {k: r[k] for k in ("X", "X'", "phi")})(_ex_box_antecedent(f)))

MONO = AxiomSchema(
    "II.e", "[=X; <=X'; <X'']phi -> [=Y; <=Y'; <Y'']phi, provided X<=Y, X'<=Y', X''<=Y''",
    Q3 + (("Y", _supersets("X")), ("Y'", _supersets("X'")), ("Y''", _supersets("X''")),
          ("phi", FORMULA)),
    _b_e, _ex_e,
    (Condition("X <= Y", lambda s: s["X"] <= s["Y"]),
     Condition("X' <= Y'", lambda s: s["X'"] <= s["Y'"]),
     Condition("X'' <= Y''", lambda s: s["X''"] <= s["Y''"])))

F_AX = AxiomSchema(
    "II.f", "dia[=X; <=X'; <X'']phi -> dia[=X; <=X'|X''; <X'']phi",
    Q3 + (("phi", FORMULA),), _b_f, _ex_dual_antecedent)

G_AX = AxiomSchema(
    "II.g", "dia[q]dia[=X; <=X'-Y; <X''|Y]phi -> dia[=X; <=X'; <X''|Y]phi, provided Y <= X'",
    Q3 + (("Y", _subsets("X'")), ("phi", FORMULA)), _b_g, _ex_nested_dual("g"),
    (Condition("Y <= X'", lambda s: s["Y"] <= s["X'"]),))

H_AX = AxiomSchema(
    "II.h", "dia[q]dia[=X; <=X'|Y; <X''-Y]phi -> dia[=X; <=X'|Y; <X'']phi, provided Y <= X''",
    Q3 + (("Y", _subsets("X''")), ("phi", FORMULA)), _b_h, _ex_nested_dual("h"),
    (Condition("Y <= X''", lambda s: s["Y"] <= s["X''"]),))

J_AX = AxiomSchema(
    "II.j", "(phi & dia[q]psi) -> (OR_{x in X'} dia[=X; <=X'; <X''|{x}]psi "
            "| dia[q](psi & dia[=X; <=X'; <{}]phi))",
    Q3 + (("phi", FORMULA), ("psi", FORMULA)), _b_j, _ex_j)

DEP_REFL = AxiomSchema(
    "III.a", "dep[=X; <=X'; <X''] x, provided x in X",
    (("x", _players), ("X", _containing("x")), ("X'", _any), ("X''", _any)), _b_IIIa, _ex_IIIa,
    (Condition("x in X", lambda s: s["x"] in s["X"]),))

DEP_TRANS = AxiomSchema(
    "III.b", "dep[q]Y & dep[=Y; <=X'; <X'']Z -> dep[q]Z",
    Q3 + (("Y", _any), ("Z", _any)), _b_IIIb, _ex_IIIb)

TRANSFER = AxiomSchema(
    "IV.a", "dep[q]Y & [=Y; <=X'; <X'']phi -> [q]phi",
    Q3 + (("Y", _any), ("phi", FORMULA)), _b_IVa, _ex_IVa)

#: Every axiom schema of the system (the rules (I) and (II)(a) are handled by
#: the derivation checker).
SCHEMATA: tuple[AxiomSchema, ...] = (K, C1, C2, D_AX, MONO, F_AX, G_AX, H_AX, J_AX,
                                     DEP_REFL, DEP_TRANS, TRANSFER)
BY_NAME = {s.name: s for s in SCHEMATA + (K_PRINTED, C1_PREFERENCE_FREE)}
RULES = {"I": "classical propositional logic (checked as tautologies)",
         "II.a": "necessitation: from phi infer [q]phi"}


# -- deliberately broken variants (negative controls for the fuzzer) ------------------

def _b_f_strict(s, order):
    return implies(dual(_qs(s), s["phi"]), dual(_q(s["X"], s["X'"], s["X'"] | s["X''"]), s["phi"]))


def _b_f_swapped(s, order):
    return implies(dual(_q(s["X"], s["X'"] | s["X''"], s["X''"]), s["phi"]), dual(_qs(s), s["phi"]))


def _b_e_reversed(s, order):
    return implies(Box(_q(s["Y"], s["Y'"], s["Y''"]), s["phi"]), Box(_qs(s), s["phi"]))


def _b_d_strict(s, order):
    return implies(Box(_qs(s), s["phi"]), s["phi"])


MUTANTS = {
    # the union lands in the strict slot instead of the weak one
    "II.f-union-into-strict": AxiomSchema("II.f-union-into-strict", "", F_AX.space, _b_f_strict,
                                          lambda f: None),
    # antecedent and consequent exchanged; stays valid because <_X'' already implies <=_X''
    "II.f-swapped": AxiomSchema("II.f-swapped", "", F_AX.space, _b_f_swapped, lambda f: None),
    "II.e-reversed": AxiomSchema("II.e-reversed", "", MONO.space, _b_e_reversed, lambda f: None),
    "II.d-with-strict": AxiomSchema("II.d-with-strict", "", Q3 + (("phi", FORMULA),), _b_d_strict,
                                    lambda f: None),
}


# -- matching ------------------------------------------------------------------------

def explain_match(schema: AxiomSchema, candidate: Formula, vocab: Vocabulary):
    """Return ``(substitution, None)`` or ``(None, reason)``."""
    subst = schema.extract(candidate)
    if not subst:
        return None, f"formula does not have the shape of {schema.name}"
    try:
        rebuilt = schema.build(subst, vocab.players)
    except (KeyError, TypeError):
        return None, f"formula does not have the shape of {schema.name}"
    if rebuilt != candidate:
        return None, f"formula does not have the shape of {schema.name}"
    failed = schema.holds(subst)
    if failed:
        return None, f"side condition of {schema.name} fails: {failed[0].text}"
    return subst, None


def match_schema(schema: AxiomSchema, candidate: Formula, vocab: Vocabulary) -> Optional[dict]:
    """Substitution turning ``schema`` into ``candidate``, or None."""
    return explain_match(schema, candidate, vocab)[0]


# -- formula pools ---------------------------------------------------------------------

def _queries(vocab: Vocabulary):
    subs = vocab.subsets()
    return [Query(a, b, c) for a in subs for b in subs for c in subs]


def base_pool(vocab: Vocabulary) -> list[Formula]:
    import itertools
    out = [FALSE, TRUE]
    for name, ar in vocab.predicates.items():
        out.extend(Atom(name, args) for args in itertools.product(vocab.players, repeat=ar))
    return out


def formula_pool(vocab: Vocabulary, depth: int = 1) -> list[Formula]:
    """Atoms and constants, closed ``depth`` times under negation, one
    modality over every query, and dependence atoms."""
    pool = base_pool(vocab)
    qs = _queries(vocab)
    for _ in range(depth):
        layer = list(pool)
        layer += [Not(f) for f in pool]
        layer += [Box(qq, f) for qq in qs for f in pool]
        layer += [Dep(qq, y) for qq in qs for y in vocab.players]
        seen = {}
        for f in layer:
            seen.setdefault(f, None)
        pool = list(seen)
    return pool


def random_group(rng: random.Random, vocab: Vocabulary) -> frozenset:
    return frozenset(p for p in vocab.players if rng.random() < 0.5)


def random_query(rng: random.Random, vocab: Vocabulary) -> Query:
    return Query(random_group(rng, vocab), random_group(rng, vocab), random_group(rng, vocab))


def random_formula(rng: random.Random, vocab: Vocabulary, depth: int = 1) -> Formula:
    base = base_pool(vocab)
    if depth <= 0:
        return rng.choice(base)
    r = rng.random()
    if r < 0.25:
        return rng.choice(base)
    if r < 0.35:
        return Not(random_formula(rng, vocab, depth - 1))
    if r < 0.75:
        return Box(random_query(rng, vocab), random_formula(rng, vocab, depth - 1))
    return Dep(random_query(rng, vocab), rng.choice(vocab.players))


# -- enumeration and sampling ------------------------------------------------------------

class InstanceStream:
    """Iterator over instances; ``truncated`` is set when ``limit`` cut it short."""

    def __init__(self, schema: AxiomSchema, vocab: Vocabulary, depth: int, limit: Optional[int]):
        self.schema = schema
        self.vocab = vocab
        self.depth = depth
        self.limit = limit
        self.truncated = False
        self.count = 0
        self._it = self._generate()

    def __iter__(self):
        return self

    def __next__(self) -> Formula:
        return next(self._it)

    def substitutions(self) -> Iterator[dict]:
        pool = formula_pool(self.vocab, self.depth) if any(d == FORMULA for _, d in self.schema.space) else []
        space = self.schema.space

        def rec(i, subst):
            if i == len(space):
                if not self.schema.holds(subst):
                    yield dict(subst)
                return
            var, dom = space[i]
            for val in (pool if dom == FORMULA else dom(subst, self.vocab)):
                subst[var] = val
                yield from rec(i + 1, subst)
            subst.pop(var, None)

        yield from rec(0, {})

    def _generate(self):
        for subst in self.substitutions():
            if self.limit is not None and self.count >= self.limit:
                self.truncated = True
                return
            self.count += 1
            yield self.schema.instantiate(subst, self.vocab)


def enumerate_instances(schema: AxiomSchema, vocab: Vocabulary, depth: int = 1,
                        limit: Optional[int] = None) -> InstanceStream:
    """All instances with groups over subsets of the players and formula
    metavariables from :func:`formula_pool` at ``depth``."""
    return InstanceStream(schema, vocab, depth, limit)


def sample_substitution(schema: AxiomSchema, vocab: Vocabulary, rng: random.Random, depth: int = 1,
                        tries: int = 1000) -> dict:
    """Random substitution satisfying the side conditions (rejection sampling
    for conditions the domains do not already enforce)."""
    for _ in range(tries):
        subst = {}
        for var, dom in schema.space:
            if dom == FORMULA:
                subst[var] = random_formula(rng, vocab, depth)
            else:
                subst[var] = rng.choice(dom(subst, vocab))
        if not schema.holds(subst):
            return subst
    raise ResourceError(f"no substitution for {schema.name} met its side conditions in {tries} tries")


def sample_instances(schema: AxiomSchema, vocab: Vocabulary, rng: random.Random, n: int, depth: int = 1):
    return [schema.instantiate(sample_substitution(schema, vocab, rng, depth), vocab) for _ in range(n)]


# -- soundness fuzzing ----------------------------------------------------------------------

@dataclass
class Violation:
    seed: int
    schema: str
    instance: Formula
    profile: str

    def to_dict(self):
        from .syntax import pretty
        return {"seed": self.seed, "schema": self.schema, "profile": self.profile,
                "instance": pretty(self.instance)}


@dataclass
class FuzzReport:
    models: int
    seed: int
    depth: int
    checked: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def violated_schemata(self) -> list[str]:
        return sorted({v.schema for v in self.violations})

    def count(self, name: str) -> int:
        return sum(v.schema == name for v in self.violations)

    def to_dict(self, max_examples: int = 5) -> dict:
        per = {}
        for name, n in self.checked.items():
            per[name] = {"instances": n, "violations": self.count(name)}
        examples = {}
        for v in self.violations:
            examples.setdefault(v.schema, [])
            if len(examples[v.schema]) < max_examples:
                examples[v.schema].append(v.to_dict())
        return {"models": self.models, "seed": self.seed, "depth": self.depth,
                "schemata": per, "total_violations": len(self.violations),
                "examples": examples}


def check_instances(m: PDModel, schema_name: str, instances, seed: int, report: FuzzReport,
                    keep_valid: Optional[list] = None):
    for f in instances:
        vec = truth_vector(m, f)
        report.checked[schema_name] = report.checked.get(schema_name, 0) + 1
        if not vec.all():
            bad = int(np.flatnonzero(~vec)[0])
            report.violations.append(Violation(seed, schema_name, f, m.profiles[bad].id))
        elif keep_valid is not None:
            keep_valid.append(f)


def soundness_fuzz(models: int = 200, seed: int = 0, depth: int = 1, samples: int = 20,
                   schemata=SCHEMATA, cfg=None, model_list=None) -> FuzzReport:
    """Check sampled instances of every schema on ``models`` random PD models.

    Each model ``k`` is generated from sub-seed ``seed + k`` and its
    instances are drawn from ``random.Random(seed + k)``, so any reported
    violation can be replayed from its seed alone.  Necessitation is
    exercised by boxing instances that were found valid.
    """
    from .testgen import FUZZ_CONFIG, generate
    cfg = cfg or FUZZ_CONFIG
    report = FuzzReport(models, seed, depth)
    for k in range(models):
        sub = seed + k
        m = model_list[k] if model_list is not None else generate(cfg.with_seed(sub))
        rng = random.Random(sub)
        valid_ones = []
        for schema in schemata:
            check_instances(m, schema.name, sample_instances(schema, m.vocab, rng, samples, depth),
                            sub, report, valid_ones)
        nec = [Box(random_query(rng, m.vocab), f) for f in rng.sample(valid_ones, min(samples, len(valid_ones)))]
        check_instances(m, "II.a", nec, sub, report)
    return report


def check_model(m: PDModel, depth: int = 1, limit: Optional[int] = 2000, schemata=SCHEMATA) -> dict:
    """Enumerate instances of every schema on one model (up to ``limit`` each)."""
    report = FuzzReport(1, 0, depth)
    truncated = {}
    for schema in schemata:
        stream = enumerate_instances(schema, m.vocab, depth, limit)
        check_instances(m, schema.name, stream, 0, report)
        truncated[schema.name] = stream.truncated
    return {"report": report, "truncated": truncated}
