"""Concrete ASCII syntax: a hand-written recursive-descent parser and printer.

::

    phi   ::= imp
    imp   ::= disj [ "->" imp ]
    disj  ::= conj { "|" conj }
    conj  ::= unary { "&" unary }
    unary ::= "~" unary
            | "[" query "]" unary                 universal modality
            | "dia" "[" query "]" unary           its dual
            | "dep" "[" query "]" (var | group)   dependence atom(s)
            | "DD" "(" group ")" unary
            | "D" "(" group ";" var ")"
            | ("pa" | "na" | "ca1" | "ca2" | "ca") "(" group ")"
            | "paY" "(" group ";" group ")"      fixed group first
            | "true" | "false"
            | PRED "(" [var {"," var}] ")"
            | "(" phi ")"
    query ::= "=" group ";" "<=" group ";" "<" group
    group ::= "{" [var {"," var}] "}" | "-" group-literal

The printer always parenthesises binary connectives and flattens
left-nested chains of ``&`` / ``|``, so ``parse(to_text(f)) == f``.
"""
from __future__ import annotations

import re

from .errors import ParseError
from .formula import (And, Atom, Bottom, Box, Ca, Ca1, Ca2, Complement, D, DD, Dep, DepAll, Dual,
                      Formula, Implies, Na, Not, Or, Pa, PaY, Top)
from .model import Query, natural_key

KEYWORDS = {"true", "false", "dia", "dep", "pa", "paY", "na", "ca1", "ca2", "ca", "D", "DD"}
GROUP_MACROS = {"pa": Pa, "na": Na, "ca1": Ca1, "ca2": Ca2, "ca": Ca}

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z0-9_]+)|(?P<op>->|<=|[<=(){}\[\];,~&|-]))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None:
                rest = text[pos:]
                if rest.strip() == "":
                    break
                off = pos + len(rest) - len(rest.lstrip())
                raise ParseError(f"unexpected character {text[off]!r}", *self.where(off))
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def where(self, offset: int):
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        shown = "end of input" if tok[0] == "eof" else repr(tok[1])
        return ParseError(f"{message}, found {shown}", *self.where(tok[2]))

    def expect(self, value):
        tok = self.peek()
        if tok[1] != value or tok[0] == "eof":
            raise self.error(f"expected {value!r}")
        return self.next()

    def accept(self, value):
        if self.peek()[1] == value and self.peek()[0] != "eof":
            return self.next()
        return None

    def ident(self, what="identifier"):
        tok = self.peek()
        if tok[0] != "ident":
            raise self.error(f"expected {what}")
        return self.next()[1]


class _Parser:
    def __init__(self, text):
        self.t = _Tokens(text)

    def formula(self) -> Formula:
        left = self.disj()
        if self.t.accept("->"):
            return Implies(left, self.formula())
        return left

    def disj(self):
        left = self.conj()
        while self.t.accept("|"):
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.t.accept("&"):
            left = And(left, self.unary())
        return left

    def group(self):
        if self.t.accept("-"):
            return Complement(self.group_literal())
        return self.group_literal()

    def group_literal(self):
        self.t.expect("{")
        members = []
        if not self.t.accept("}"):
            members.append(self.t.ident("player"))
            while self.t.accept(","):
                members.append(self.t.ident("player"))
            self.t.expect("}")
        return frozenset(members)

    def query(self):
        self.t.expect("=")
        eq = self.group()
        self.t.expect(";")
        self.t.expect("<=")
        weak = self.group()
        self.t.expect(";")
        self.t.expect("<")
        strict = self.group()
        return Query(eq, weak, strict)

    def bracketed_query(self):
        self.t.expect("[")
        qq = self.query()
        self.t.expect("]")
        return qq

    def unary(self):
        kind, value, _ = self.t.peek()
        if kind == "eof":
            raise self.t.error("expected a formula")
        if value == "~":
            self.t.next()
            return Not(self.unary())
        if value == "(":
            self.t.next()
            inner = self.formula()
            self.t.expect(")")
            return inner
        if value == "[":
            qq = self.bracketed_query()
            return Box(qq, self.unary())
        if kind != "ident":
            raise self.t.error("expected a formula")
        self.t.next()
        if value == "true":
            return Top()
        if value == "false":
            return Bottom()
        if value == "dia":
            qq = self.bracketed_query()
            return Dual(qq, self.unary())
        if value == "dep":
            qq = self.bracketed_query()
            if self.t.peek()[1] in ("{", "-"):
                return DepAll(qq, self.group())
            return Dep(qq, self.t.ident("player"))
        if value in GROUP_MACROS:
            self.t.expect("(")
            g = self.group()
            self.t.expect(")")
            return GROUP_MACROS[value](g)
        if value == "paY":
            self.t.expect("(")
            fixed = self.group()
            self.t.expect(";")
            g = self.group()
            self.t.expect(")")
            return PaY(fixed, g)
        if value == "D":
            self.t.expect("(")
            g = self.group()
            self.t.expect(";")
            y = self.t.ident("player")
            self.t.expect(")")
            return D(g, y)
        if value == "DD":
            self.t.expect("(")
            g = self.group()
            self.t.expect(")")
            return DD(g, self.unary())
        # predicate application
        self.t.expect("(")
        args = []
        if not self.t.accept(")"):
            args.append(self.t.ident("player"))
            while self.t.accept(","):
                args.append(self.t.ident("player"))
            self.t.expect(")")
        return Atom(value, tuple(args))


def parse(text: str) -> Formula:
    """Parse concrete syntax into an (unbound) formula."""
    p = _Parser(text)
    f = p.formula()
    if p.t.peek()[0] != "eof":
        raise p.t.error("unexpected trailing input")
    return f


def parse_group(text: str):
    """Parse a bare group literal such as ``{1,2}`` or ``-{E}``."""
    p = _Parser(text)
    g = p.group()
    if p.t.peek()[0] != "eof":
        raise p.t.error("unexpected trailing input")
    return g


def parse_query(text: str) -> Query:
    """Parse ``[=g; <=g; <g]`` (brackets optional)."""
    p = _Parser(text)
    bracketed = p.t.peek()[1] == "["
    qq = p.bracketed_query() if bracketed else p.query()
    if p.t.peek()[0] != "eof":
        raise p.t.error("unexpected trailing input")
    return qq


# -- printing -----------------------------------------------------------------

def group_text(g) -> str:
    if isinstance(g, Complement):
        return "-" + group_text(g.members)
    return "{" + ",".join(sorted(g, key=natural_key)) + "}"


def query_text(qq: Query) -> str:
    return f"[={group_text(qq.eq)}; <={group_text(qq.weak)}; <{group_text(qq.strict)}]"


def _chain(f, cls):
    parts = []
    while isinstance(f, cls):
        parts.append(f.right)
        f = f.left
    parts.append(f)
    return parts[::-1]


def to_text(f: Formula) -> str:
    """Canonical concrete syntax for ``f`` (bound or unbound)."""
    match f:
        case Atom(pred, args):
            return f"{pred}({','.join(args)})"
        case Top():
            return "true"
        case Bottom():
            return "false"
        case Not(body):
            return "~" + to_text(body)
        case And():
            return "(" + " & ".join(to_text(p) for p in _chain(f, And)) + ")"
        case Or():
            return "(" + " | ".join(to_text(p) for p in _chain(f, Or)) + ")"
        case Implies(a, b):
            return f"({to_text(a)} -> {to_text(b)})"
        case Box(qq, body):
            return f"{query_text(qq)} {to_text(body)}"
        case Dual(qq, body):
            return f"dia{query_text(qq)} {to_text(body)}"
        case Dep(qq, y):
            return f"dep{query_text(qq)} {y}"
        case DepAll(qq, g):
            return f"dep{query_text(qq)} {group_text(g)}"
        case DD(g, body):
            return f"DD({group_text(g)}) {to_text(body)}"
        case D(g, y):
            return f"D({group_text(g)}; {y})"
        case PaY(fixed, g):
            return f"paY({group_text(fixed)}; {group_text(g)})"
        case Pa(g) | Na(g) | Ca1(g) | Ca2(g) | Ca(g):
            name = {Pa: "pa", Na: "na", Ca1: "ca1", Ca2: "ca2", Ca: "ca"}[type(f)]
            return f"{name}({group_text(g)})"
    raise TypeError(f"not a formula: {f!r}")


def pretty(f: Formula) -> str:
    """Like :func:`to_text` but with implications, disjunctions and duals
    folded back out of their core expansions."""
    from .formula import resugar
    return to_text(resugar(f))
