"""Command-line front end.

Subcommands::

    lpfd check  MODEL --formula F [--at PROFILE]
    lpfd solve  MODEL --concept C [--group G] [--fixed G] [--method M] [--figure PNG]
    lpfd axioms MODEL [--depth D] [--limit N] [--schema NAME ...]
    lpfd fuzz   [--models N] [--seed S] [--depth D] [--samples K] [--config YAML]
    lpfd prove  SCRIPT

MODEL is a YAML model file or one of the bundled fixtures (rockjazz, pd1,
pd2); SCRIPT is a proof file or a bundled proof name.  Every subcommand
accepts ``--format human|json``.

Exit status: 0 when a verdict was computed (a false formula, a rejected
proof and a fuzz run with findings all count), 1 for usage, input and
format errors, 2 when an internal consistency check fails.  Errors are
reported as ``lpfd: error [reason]: message`` on stderr, and additionally
as a JSON object on stdout under ``--format json``.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import analysis, axioms, crosscheck
from .derivation import check_script
from .errors import DomainError, FormatError, LPFDError, ParseError
from .formula import Ca, Ca1, Ca2, Na, Pa, PaY, bind, resolve_group
from .modelio import (builtin_proof, error_payload, load_config, load_model, to_json)
from .semantics import evaluate, truth_vector
from .syntax import group_text, parse, parse_group, pretty
from .testgen import FUZZ_CONFIG, fuzz_models

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2


class UsageError(LPFDError):
    reason = "usage_error"


class InvariantBreach(Exception):
    """Two routes that must agree did not."""

    reason = "internal_invariant"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- helpers ---------------------------------------------------------------------------

def _group(text: str, vocab) -> frozenset:
    text = text.strip()
    if not text.startswith(("{", "-")):
        text = "{" + text + "}"
    try:
        g = parse_group(text)
    except ParseError as e:
        raise UsageError(f"bad group {text!r}: {e}") from None
    return resolve_group(g, vocab)


def _gtext(m, g) -> str:
    return "{" + ",".join(m.vocab.ordered(g)) + "}"


def _formula_text(args) -> str:
    if args.formula is not None:
        return args.formula
    try:
        return Path(args.formula_file).read_text()
    except OSError as e:
        raise FormatError(f"cannot read formula file {args.formula_file!r}: {e.strerror}") from None


_CONCEPT_OF = {Pa: "strongPareto", Na: "nash", Ca1: "ca1", Ca2: "ca2", Ca: "ca"}


def _concept_report(m, f):
    """Native analysis report for a formula that is one derived concept."""
    if isinstance(f, PaY):
        return analysis.pa_y(m, resolve_group(f.fixed, m.vocab), resolve_group(f.group, m.vocab))
    name = _CONCEPT_OF.get(type(f))
    if name is None:
        return None
    return analysis.solve(m, name, resolve_group(f.group, m.vocab))


def _evidence_text(m, rep, s) -> str:
    ev = rep.evidence.get(s)
    if ev is None:
        return ""
    if ev.cover is not None:
        return "cover " + " ".join(_gtext(m, c) for c in ev.cover)
    if ev.blocked_by is not None:
        who = f" ({ev.player} gains)" if ev.player else ""
        sub = f" via subgroup {_gtext(m, ev.subgroup)}" if ev.subgroup is not None else ""
        return f"blocked by {ev.blocked_by.id}{who}{sub}"
    if ev.uncovered is not None:
        return f"no cover: {_gtext(m, ev.uncovered)} in no optimal proper subgroup"
    return ""


# -- subcommands ---------------------------------------------------------------------------

def cmd_check(args, out):
    m = load_model(args.model)
    raw = parse(_formula_text(args))
    f = bind(raw, m.vocab, ca_limit=args.ca_limit) if not (isinstance(raw, Ca) and args.native) else None
    rep = _concept_report(m, raw)
    if f is not None:
        vec = truth_vector(m, f)
    else:
        vec = [s in rep.solutions for s in m.profiles]
    if rep is not None and f is not None:
        native = [s in rep.solutions for s in m.profiles]
        if list(map(bool, vec)) != native:
            raise InvariantBreach(f"formula route and native analysis disagree on {pretty(raw)}")
    targets = [m.profile(args.at)] if args.at else list(m.profiles)
    rows = []
    for s in targets:
        i = m.index(s)
        entry = {"profile": s.id, "value": bool(vec[i])}
        if f is not None:
            w = evaluate(m, s, f).witness
            if w is not None:
                entry["witness"] = w.id
        if rep is not None:
            extra = analysis.AnalysisReport.to_dict(rep, m)["profiles"][s.id]
            for k, v in extra.items():
                if k != "solution":
                    entry[k] = v
        rows.append(entry)
    result = {"formula": pretty(raw), "results": rows}
    if not args.at:
        result["valid"] = all(r["value"] for r in rows)
    if args.format == "json":
        out.write(to_json(result) + "\n")
        return EXIT_OK
    out.write(f"formula: {result['formula']}\n")
    for r, s in zip(rows, targets):
        line = f"{r['profile']}: {'true' if r['value'] else 'false'}"
        if "witness" in r and f is not None:
            line += f"  (witness {r['witness']})"
        if rep is not None:
            detail = _evidence_text(m, rep, s)
            if detail:
                line += f"  [{detail}]"
        out.write(line + "\n")
    if not args.at:
        out.write(f"valid: {'yes' if result['valid'] else 'no'}\n")
    return EXIT_OK


def cmd_solve(args, out):
    m = load_model(args.model)
    group = _group(args.group, m.vocab) if args.group else frozenset(m.vocab.players)
    fixed = _group(args.fixed, m.vocab) if args.fixed else None
    concept = analysis.CONCEPT_ALIASES.get(args.concept, args.concept)
    if concept == "paY" and fixed is None:
        raise UsageError("--concept paY needs --fixed")
    if fixed is not None and concept != "paY":
        raise UsageError("--fixed only applies to --concept paY")
    rep = analysis.solve(m, concept, group, fixed=fixed, method=args.method)
    if args.figure:
        from .plotting import membership_figure
        membership_figure(m, group, args.figure, highlight=concept)
    data = rep.to_dict(m)
    if args.figure:
        data["figure"] = str(args.figure)
    if args.format == "json":
        out.write(to_json(data) + "\n")
        return EXIT_OK
    head = f"{rep.concept} for {_gtext(m, group)}"
    if fixed is not None:
        head += f" fixing {_gtext(m, fixed)}"
    out.write(f"{head} ({rep.method}): {', '.join(rep.solution_ids) or 'none'}\n")
    width = max(len(s.id) for s in m.profiles)
    for s in m.profiles:
        mark = "solution" if s in rep.solutions else "-"
        detail = _evidence_text(m, rep, s)
        out.write(f"  {s.id:<{width}}  {mark}{'  ' + detail if detail else ''}\n")
    if args.figure:
        out.write(f"figure written to {args.figure}\n")
    return EXIT_OK


def _schemata(names, variants):
    if not names:
        chosen = list(axioms.SCHEMATA)
        if variants:
            chosen += [axioms.K_PRINTED, axioms.C1_PREFERENCE_FREE]
        return chosen
    out = []
    for n in names:
        if n in axioms.BY_NAME:
            out.append(axioms.BY_NAME[n])
        elif n in axioms.MUTANTS:
            out.append(axioms.MUTANTS[n])
        else:
            raise UsageError(f"unknown schema {n!r}; known: {sorted(axioms.BY_NAME) + sorted(axioms.MUTANTS)}")
    return out


def cmd_axioms(args, out):
    m = load_model(args.model)
    res = axioms.check_model(m, depth=args.depth, limit=args.limit,
                             schemata=_schemata(args.schema, args.variants))
    rep = res["report"]
    data = rep.to_dict(max_examples=3)
    for name, trunc in res["truncated"].items():
        data["schemata"].setdefault(name, {"instances": 0, "violations": 0})["truncated"] = trunc
    data.pop("seed")
    data.pop("models")
    if args.format == "json":
        out.write(to_json(data) + "\n")
        return EXIT_OK
    out.write(f"axiom instances at depth {args.depth} (limit {args.limit} per schema)\n")
    for name, row in data["schemata"].items():
        flag = " (truncated)" if row.get("truncated") else ""
        out.write(f"  {name:<16} {row['instances']:>7} instances  {row['violations']:>5} violations{flag}\n")
    for name, exs in data["examples"].items():
        for ex in exs:
            out.write(f"  counterexample {name} at {ex['profile']}: {ex['instance']}\n")
    return EXIT_OK


def cmd_fuzz(args, out):
    cfg = load_config(args.config) if args.config else FUZZ_CONFIG
    models = fuzz_models(args.models, args.seed, cfg)
    seeds = range(args.seed, args.seed + args.models)
    chosen = _schemata(args.schema, False)
    sound = axioms.soundness_fuzz(args.models, args.seed, args.depth, args.samples,
                                  schemata=chosen, cfg=cfg, model_list=models)
    data = {"config": cfg.to_dict(), "soundness": sound.to_dict(max_examples=3)}
    if not args.no_oracles:
        data["oracles"] = crosscheck.oracle_equivalence(models, seeds).to_dict()
    if args.theorems:
        data["theorems"] = crosscheck.theorem_suite(models, seeds).to_dict()
    if args.figure:
        from .plotting import fuzz_figure
        fuzz_figure(data["soundness"], args.figure)
        data["figure"] = str(args.figure)
    if args.format == "json":
        out.write(to_json(data) + "\n")
        return EXIT_OK
    s = data["soundness"]
    out.write(f"soundness: {args.models} models from seed {args.seed}, depth {args.depth}, "
              f"{args.samples} samples per schema\n")
    for name, row in s["schemata"].items():
        out.write(f"  {name:<24} {row['instances']:>7} instances  {row['violations']:>5} violations\n")
    for name, exs in s["examples"].items():
        for ex in exs:
            out.write(f"  counterexample {name}: seed {ex['seed']} profile {ex['profile']}: {ex['instance']}\n")
    if "oracles" in data:
        o = data["oracles"]
        out.write(f"oracles: {o['comparisons']} comparisons, {o['mismatches']} mismatches\n")
        for ex in o["examples"]:
            out.write(f"  mismatch seed {ex['seed']} {ex['concept']} {ex['group']} ({ex['method']}): "
                      f"expected {ex['expected']} got {ex['got']}\n")
    if "theorems" in data:
        t = data["theorems"]
        out.write(f"theorems: {sum(t['checked'].values())} checks, {t['violations']} violations\n")
        for ex in t["examples"]:
            out.write(f"  violation {ex}\n")
    if args.figure:
        out.write(f"figure written to {args.figure}\n")
    return EXIT_OK


def cmd_prove(args, out):
    path = Path(args.script)
    if path.exists():
        try:
            text = path.read_text()
        except OSError as e:
            raise FormatError(f"cannot read proof {args.script!r}: {e.strerror}") from None
    else:
        name = args.script if args.script.endswith(".lpfdproof") else args.script + ".lpfdproof"
        try:
            text = builtin_proof(name)
        except (FileNotFoundError, OSError):
            raise FormatError(f"no proof file {args.script!r}") from None
    verdict = check_script(text)
    if args.format == "json":
        out.write(to_json(verdict.to_dict()) + "\n")
        return EXIT_OK
    if verdict.accepted:
        out.write(f"accepted ({len(verdict.log)} lines)\n")
    else:
        out.write(f"rejected at line {verdict.line} [{verdict.code}]: {verdict.reason}\n")
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human")

    p = _Parser(prog="lpfd", description="Model checking and game analysis for LPFD.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="evaluate a formula on a model")
    c.add_argument("model")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--formula")
    src.add_argument("--formula-file")
    c.add_argument("--at", help="profile id, e.g. JJ or conf,conf,observe (default: every profile)")
    c.add_argument("--ca-limit", type=int, default=4, help="largest group for which ca is expanded")
    c.add_argument("--native", action="store_true", help="decide a top-level ca natively, no expansion")
    c.set_defaults(run=cmd_check)

    s = sub.add_parser("solve", parents=[common], help="compute a solution concept")
    s.add_argument("model")
    s.add_argument("--concept", required=True,
                   choices=sorted(set(analysis.CONCEPTS) | set(analysis.CONCEPT_ALIASES)))
    s.add_argument("--group", help="players, e.g. {E,A} or -{3} (default: everyone)")
    s.add_argument("--fixed", help="fixed group for paY")
    s.add_argument("--method", choices=analysis.METHODS, default="direct")
    s.add_argument("--figure", help="write a concept-membership heatmap to this file")
    s.set_defaults(run=cmd_solve)

    a = sub.add_parser("axioms", parents=[common], help="check axiom instances on a model")
    a.add_argument("model")
    a.add_argument("--depth", type=int, default=1)
    a.add_argument("--limit", type=int, default=2000, help="instances per schema")
    a.add_argument("--schema", action="append", help="restrict to these schemata (repeatable)")
    a.add_argument("--variants", action="store_true",
                   help="also run the printed-K and preference-free-c1 variants")
    a.set_defaults(run=cmd_axioms)

    f = sub.add_parser("fuzz", parents=[common], help="soundness fuzzing and oracle equivalence")
    f.add_argument("--models", type=int, default=200)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--depth", type=int, default=1)
    f.add_argument("--samples", type=int, default=20, help="sampled instances per schema and model")
    f.add_argument("--config", help="YAML generator config")
    f.add_argument("--schema", action="append", help="schemata or mutants to fuzz (repeatable)")
    f.add_argument("--no-oracles", action="store_true", help="skip solver/oracle comparison")
    f.add_argument("--theorems", action="store_true", help="also run the collective-agency theorem checks")
    f.add_argument("--figure", help="write a per-schema bar chart to this file")
    f.set_defaults(run=cmd_fuzz)

    r = sub.add_parser("prove", parents=[common], help="check a derivation script")
    r.add_argument("script")
    r.set_defaults(run=cmd_prove)
    return p


def _wants_json(argv) -> bool:
    for i, a in enumerate(argv):
        if a == "--format=json" or (a == "--format" and i + 1 < len(argv) and argv[i + 1] == "json"):
            return True
    return False


def run(argv=None, out=None, err=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        for flag in ("models", "samples", "limit"):
            if getattr(args, flag, 1) is not None and getattr(args, flag, 1) < 1:
                raise UsageError(f"--{flag} must be positive")
        if getattr(args, "depth", 0) < 0:
            raise UsageError("--depth must be non-negative")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", UserWarning)
            code = args.run(args, out)
        for w in caught:
            err.write(f"lpfd: warning: {w.message}\n")
        return code
    except (LPFDError, InvariantBreach) as e:
        code = EXIT_INTERNAL if isinstance(e, InvariantBreach) else EXIT_USAGE
        payload = error_payload(e) if isinstance(e, LPFDError) else \
            {"ok": False, "reason": e.reason, "message": str(e)}
        err.write(f"lpfd: error [{payload['reason']}]: {payload['message']}\n")
        if _wants_json(argv):
            out.write(to_json(payload) + "\n")
        return code
    except SystemExit as e:     # --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    except Exception as e:      # anything else is a bug
        err.write(f"lpfd: error [internal_error]: {type(e).__name__}: {e}\n")
        if _wants_json(argv):
            out.write(to_json({"ok": False, "reason": "internal_error", "message": str(e)}) + "\n")
        return EXIT_INTERNAL


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
