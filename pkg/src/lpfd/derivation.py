"""Hilbert-style derivation scripts and their checker.

Script format::

    # comment
    players: 1, 2, 3
    predicates: P/1, Q/2
    1. <formula> BY axiom(II.e, X={}, X'={3}, X''={1}, Y={2}, Y'={3}, Y''={1})
    2. <formula> BY TAUT
    3. <formula> BY MP 1,2
    4. <formula> BY NEC 3 [={1}; <={}; <{}]

Formulas may use the derived operators (``pa``, ``paY``, ``D`` ...); every
line is bound against the declared players before checking, so a line is
judged on its core expansion.  Axiom arguments are optional: those given
must agree with the substitution found by matching.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .axioms import BY_NAME, explain_match
from .errors import FormatError, ParseError, ResourceError
from .formula import And, Atom, Bottom, Box, Dep, Formula, Not, Top, as_implies, bind
from .model import Query, Vocabulary
from .syntax import parse, parse_group, parse_query

TAUT_LEAF_LIMIT = 20


@dataclass(frozen=True)
class AxiomStep:
    name: str
    args: tuple = ()        # ((metavariable, frozenset or player), ...)


@dataclass(frozen=True)
class ModusPonens:
    first: int
    second: int


@dataclass(frozen=True)
class Necessitation:
    line: int
    query: Query


@dataclass(frozen=True)
class Tautology:
    pass


Justification = Union[AxiomStep, ModusPonens, Necessitation, Tautology]


@dataclass(frozen=True)
class Step:
    number: int
    formula: Formula
    why: Justification
    source_line: int = 0


@dataclass(frozen=True)
class Derivation:
    vocab: Vocabulary
    steps: tuple

    @property
    def conclusion(self) -> Optional[Formula]:
        return self.steps[-1].formula if self.steps else None


@dataclass
class Verdict:
    accepted: bool
    line: Optional[int] = None
    code: Optional[str] = None
    reason: Optional[str] = None
    log: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"accepted": self.accepted, "line": self.line, "code": self.code,
                "reason": self.reason, "steps": self.log}


# -- parsing ----------------------------------------------------------------------------

_STEP = re.compile(r"^\s*(\d+)\.\s*(.*?)\s+BY\s+(.+?)\s*$")
_AXIOM = re.compile(r"^axiom\s*\(\s*([A-Za-z0-9_.\-]+)\s*(?:,(.*))?\)$")
_ARG = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*'*)\s*=\s*(\{[^}]*\}|[A-Za-z0-9_]+)\s*(?:,|$)")
_MP = re.compile(r"^MP\s+(\d+)\s*,\s*(\d+)$")
_NEC = re.compile(r"^NEC\s+(\d+)\s*(\[.*\])$")


def _justification(text: str, lineno: int) -> Justification:
    text = text.strip()
    if text == "TAUT":
        return Tautology()
    if m := _MP.match(text):
        return ModusPonens(int(m.group(1)), int(m.group(2)))
    if m := _NEC.match(text):
        inner = m.group(2).strip()[1:-1]
        try:
            return Necessitation(int(m.group(1)), parse_query(inner))
        except ParseError as e:
            raise ParseError(f"bad NEC subscript: {e.message}", lineno, e.column) from None
    if m := _AXIOM.match(text):
        args = []
        rest = (m.group(2) or "").strip()
        pos = 0
        while pos < len(rest):
            a = _ARG.match(rest, pos)
            if a is None:
                raise ParseError(f"bad axiom argument near {rest[pos:]!r}", lineno, pos + 1)
            key, val = a.group(1), a.group(2)
            args.append((key, parse_group(val) if val.startswith("{") else val))
            pos = a.end()
        return AxiomStep(m.group(1), tuple(args))
    raise ParseError(f"unknown justification {text!r}", lineno, 1)


def _header_predicates(text: str, lineno: int) -> dict:
    out = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        name, _, ar = item.partition("/")
        if not ar.isdigit():
            raise ParseError(f"predicate must be NAME/ARITY, got {item!r}", lineno, 1)
        out[name.strip()] = int(ar)
    return out


def _resolve(why: Justification, vocab: Vocabulary) -> Justification:
    """Turn complement literals into concrete groups (binding checks names)."""
    if isinstance(why, Necessitation):
        return Necessitation(why.line, bind(Box(why.query, Top()), vocab).query)
    if isinstance(why, AxiomStep):
        args = []
        for key, val in why.args:
            if not isinstance(val, str):
                val = bind(Box(Query(val, frozenset(), frozenset()), Top()), vocab).query.eq
            args.append((key, val))
        return AxiomStep(why.name, tuple(args))
    return why


def parse_derivation(text: str) -> Derivation:
    """Read a proof script; formulas are bound against the declared vocabulary."""
    players, preds = None, {}
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, val = body.partition(":")
        if sep and key.strip() in ("players", "predicates") and not _STEP.match(body):
            if key.strip() == "players":
                players = tuple(p.strip() for p in val.split(",") if p.strip())
            else:
                preds = _header_predicates(val, lineno)
            continue
        m = _STEP.match(body)
        if m is None:
            raise ParseError("expected 'n. <formula> BY <justification>'", lineno, 1)
        raw.append((lineno, int(m.group(1)), m.group(2), m.group(3)))
    if not players:
        raise FormatError("proof script needs a 'players:' header")
    vocab = Vocabulary(players, preds)
    steps = []
    for k, (lineno, num, ftext, jtext) in enumerate(raw, 1):
        why = _resolve(_justification(jtext, lineno), vocab)
        if num != k:
            raise ParseError(f"step numbered {num}, expected {k}", lineno, 1)
        try:
            f = parse(ftext)
        except ParseError as e:
            raise ParseError(e.message, lineno, e.column) from None
        steps.append(Step(num, bind(f, vocab), why, lineno))
    return Derivation(vocab, tuple(steps))


# -- tautology check -------------------------------------------------------------------------

def _leaves(f: Formula, out: dict):
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, And):
            stack.extend((g.left, g.right))
        elif isinstance(g, (Atom, Box, Dep)):
            out.setdefault(g, len(out))


def is_tautology(f: Formula) -> bool:
    """Truth-table check, treating atoms, modalities and dependence atoms as
    propositional letters."""
    leaves = {}
    _leaves(f, leaves)
    k = len(leaves)
    if k > TAUT_LEAF_LIMIT:
        raise ResourceError(f"tautology check over {k} letters exceeds {TAUT_LEAF_LIMIT}")
    rows = np.arange(1 << k)
    cols = {g: (rows >> i & 1).astype(bool) for g, i in leaves.items()}
    memo = {}

    def ev(g):
        if id(g) in memo:
            return memo[id(g)]
        if isinstance(g, Top):
            v = np.ones(1 << k, dtype=bool)
        elif isinstance(g, Bottom):
            v = np.zeros(1 << k, dtype=bool)
        elif isinstance(g, Not):
            v = ~ev(g.body)
        elif isinstance(g, And):
            v = ev(g.left) & ev(g.right)
        else:
            v = cols[g]
        memo[id(g)] = v
        return v

    return bool(ev(f).all())


# -- checking ---------------------------------------------------------------------------------

class _Reject(Exception):
    def __init__(self, code, reason):
        super().__init__(reason)
        self.code = code
        self.reason = reason


def _earlier(proved: dict, ref: int, here: int) -> Formula:
    if ref >= here or ref not in proved:
        raise _Reject("bad_reference", f"line {ref} is not an earlier line")
    return proved[ref]


def _check_axiom(step: Step, vocab: Vocabulary) -> dict:
    schema = BY_NAME.get(step.why.name)
    if schema is None:
        raise _Reject("unknown_axiom", f"no axiom named {step.why.name!r}")
    subst, problem = explain_match(schema, step.formula, vocab)
    if subst is None:
        code = "side_condition" if problem.startswith("side condition") else "no_match"
        raise _Reject(code, problem)
    for key, val in step.why.args:
        if key not in subst:
            raise _Reject("substitution_mismatch", f"{schema.name} has no metavariable {key}")
        if subst[key] != val:
            raise _Reject("substitution_mismatch", f"{key} does not match the formula")
    return subst


def _check_mp(step: Step, proved: dict):
    a = _earlier(proved, step.why.first, step.number)
    b = _earlier(proved, step.why.second, step.number)
    for minor, major in ((a, b), (b, a)):
        imp = as_implies(major)
        if imp is not None and imp[0] == minor and imp[1] == step.formula:
            return
    raise _Reject("bad_mp", f"lines {step.why.first} and {step.why.second} do not give this formula by MP")


def _check_nec(step: Step, proved: dict):
    body = _earlier(proved, step.why.line, step.number)
    if step.formula != Box(step.why.query, body):
        raise _Reject("bad_nec", f"formula is not the stated box applied to line {step.why.line}")


def check_derivation(d: Derivation) -> Verdict:
    """Accept iff every line is justified; otherwise report the first bad line."""
    proved = {}
    log = []
    for step in d.steps:
        try:
            why = step.why
            if isinstance(why, AxiomStep):
                _check_axiom(step, d.vocab)
                kind = f"axiom {why.name}"
            elif isinstance(why, ModusPonens):
                _check_mp(step, proved)
                kind = "MP"
            elif isinstance(why, Necessitation):
                _check_nec(step, proved)
                kind = "NEC"
            else:
                try:
                    ok = is_tautology(step.formula)
                except ResourceError as e:
                    raise _Reject("too_large", str(e)) from None
                if not ok:
                    raise _Reject("not_tautology", "formula is not a propositional tautology")
                kind = "TAUT"
        except _Reject as r:
            log.append({"line": step.number, "ok": False, "rule": type(step.why).__name__})
            return Verdict(False, step.number, r.code, r.reason, log)
        proved[step.number] = step.formula
        log.append({"line": step.number, "ok": True, "rule": kind})
    return Verdict(True, None, None, None, log)


def check_script(text: str) -> Verdict:
    return check_derivation(parse_derivation(text))
