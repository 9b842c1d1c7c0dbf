"""``pal``: parse, evaluate, announce, check validity, run the suites and the wise men puzzle.

Every command first builds a JSON-ready report; the human-readable output is
rendered from that report.  Exit status: 0 valid/true, 1 countermodel/false,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable, Optional, Sequence

from . import checker, wisemen
from .checker import Countermodel, Scope, ScopeError, Semantics
from .direct import EvaluationError, announce, eval_direct, extension
from .formula import ParseError, parse, render, to_json
from .model import FrameClass, ModelError, load_model, model_to_dict
from .sse import eval_sse

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _csv(text: str) -> tuple[str, ...]:
    items = tuple(x.strip() for x in text.split(",") if x.strip())
    if not items and text.strip():
        raise argparse.ArgumentTypeError(f"bad list: {text!r}")
    return items


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as e:
        raise UsageError(f"parse error: {e}") from e


def _read_model(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return load_model(fh.read())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _scope(args, **defaults) -> Scope:
    values = dict(defaults)
    for key, attr in (("max_worlds", "max_worlds"), ("agents", "agents"), ("atoms", "atoms"),
                      ("frame", "frame"), ("model_budget", "budget")):
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = v
    if getattr(args, "semantics", None) is not None:
        values["semantics"] = Semantics(args.semantics)
    return Scope(**values)


def _verdict_report(v, scope: Scope) -> dict[str, Any]:
    out: dict[str, Any] = {"verdict": "valid" if v.valid else "countermodel",
                           "semantics": scope.semantics.value, "frame": scope.frame.value,
                           "max_worlds": scope.max_worlds}
    if isinstance(v, Countermodel):
        out.update(v.to_dict())
    else:
        out["models_checked"] = v.models_checked
        out["budget_exhausted"] = v.budget_exhausted
    return out


# ---------------------------------------------------------------------------
# commands: each returns (report, exit code)

def cmd_parse(args):
    f = _formula(args.formula)
    return {"formula": render(f), "ast": to_json(f)}, EXIT_OK


def cmd_eval(args):
    m = _read_model(args.model)
    f = _formula(args.formula)
    report: dict[str, Any] = {"world": args.world, "semantics": args.semantics, "formula": render(f)}
    if args.semantics == "sse":
        domain = args.domain if args.domain is not None else m.worlds
        value = eval_sse(m, domain, args.world, f)
        report["domain"] = [w for w in m.worlds if w in set(domain)]
    else:
        if args.domain is not None:
            raise UsageError("--domain only applies to --semantics sse")
        value = eval_direct(m, args.world, f)
    report["value"] = value
    return report, EXIT_OK if value else EXIT_FALSE


def cmd_announce(args):
    m = _read_model(args.model)
    f = _formula(args.formula)
    if not extension(m, f):
        # nothing survives: the announcement cannot be made truthfully
        return {"error": f"{render(f)} is false at every world"}, EXIT_FALSE
    return model_to_dict(announce(m, f)), EXIT_OK


def cmd_valid(args):
    scope = _scope(args)
    v = checker.check_valid(_formula(args.formula), scope)
    return _verdict_report(v, scope), EXIT_OK if v.valid else EXIT_FALSE


def cmd_rule(args):
    scope = _scope(args)
    premises = [_formula(p) for p in args.premise]
    v = checker.check_rule(premises, _formula(args.conclusion), scope)
    return _verdict_report(v, scope), EXIT_OK if v.valid else EXIT_FALSE


def cmd_suite(args):
    if args.name == "axioms":
        scope = _scope(args)
        frames = [FrameClass(args.frame)] if args.frame else None
        sems = [Semantics(args.semantics)] if args.semantics else [Semantics.DIRECT, Semantics.SSE]
        report = checker.run_axiom_suite(scope, frames=frames, semantics=sems)
        return {"suite": report.suite, "ok": report.ok, "entries": report.to_json()}, _code(report.ok)
    if args.name == "substitution":
        scope = _scope(args, agents=("a",))
        sems = [Semantics(args.semantics)] if args.semantics else [Semantics.DIRECT, Semantics.SSE]
        report = checker.run_substitution_suite(scope, semantics=sems)
        return {"suite": report.suite, "ok": report.ok, "entries": report.to_json()}, _code(report.ok)
    if args.frame not in (None, "k"):
        raise UsageError("the faithfulness suite enumerates K models only")
    fr = checker.run_faithfulness(max_worlds=args.max_worlds or 2, agents=args.agents or ("a", "b"),
                                  atoms=args.atoms or ("p", "q"), n_formulas=args.formulas,
                                  samples=args.samples, seed=args.seed)
    return {"suite": "faithfulness", "ok": fr.ok, **fr.to_dict()}, _code(fr.ok)


def cmd_wisemen(args):
    r = wisemen.solve(footnote=args.footnote_axioms, consequence_worlds=args.consequence_worlds)
    return {"ok": r.ok, **r.to_dict()}, _code(r.ok)


def _code(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_FALSE


# ---------------------------------------------------------------------------
# human output

def _human_verdict(report: dict[str, Any]) -> tuple[str, str]:
    if report["verdict"] == "valid":
        note = ", budget exhausted" if report["budget_exhausted"] else ""
        return (f"VALID up to {report['max_worlds']} worlds ({report['frame']}, {report['semantics']}; "
                f"{report['models_checked']} models checked{note})"), ""
    where = f"world {report['world']}"
    if "domain" in report:
        where += f", domain {{{','.join(report['domain'])}}}"
    # the model document goes to stdout so it can be fed back to `pal eval`
    return json.dumps(report["model"], indent=2), f"COUNTERMODEL at {where}"


def _human_suite(report: dict[str, Any]) -> str:
    if report["suite"] == "faithfulness":
        lines = [f"formulas: {report['formulas']}",
                 f"exhaustive cases: {report['exhaustive_cases']}",
                 f"random cases: {report['random_cases']}",
                 f"discrepancies: {len(report['discrepancies'])}"]
        lines += [f"  {d}" for d in report["discrepancies"]]
        return "\n".join(lines)
    lines = []
    for e in report["entries"]:
        flag = "" if e.get("expected") in (None, e["verdict"]) else f"  MISMATCH (expected {e['expected']})"
        note = f"  [{e['note']}]" if "note" in e else ""
        lines.append(f"{e['name']:<28} {e['form']:<17} {e['semantics']:<9} {e['frame']:<3} "
                     f"{e['verdict'].upper():<13} {e['millis']:>9.1f} ms{flag}{note}")
    lines.append("all as expected" if report["ok"] else "some entries differ from expectation")
    return "\n".join(lines)


def _human(command: str, report: dict[str, Any]) -> tuple[str, str]:
    """(stdout, stderr) text for a report."""
    if command == "parse":
        return report["formula"], ""
    if command == "eval":
        return "true" if report["value"] else "false", ""
    if command == "announce":
        if "error" in report:
            return "", report["error"]
        return json.dumps(report, indent=2), ""
    if command in ("valid", "rule"):
        return _human_verdict(report)
    if command == "suite":
        return _human_suite(report), ""
    if command == "wisemen":
        lines = ["cascade: " + " -> ".join(str(n) for n in report["cascade"]),
                 f"premises hold at every world: {'yes' if report['premises_ok'] else 'NO'}",
                 f"goal (sse, full domain): {'VALID' if report['goal_ok_sse'] else 'FAILS'}",
                 f"negative control falsifies goal: {'yes' if report['negative_control_falsified'] else 'NO'}"]
        if report["consequence"] is not None:
            lines.append(f"premises => goal over small S5 models: {report['consequence'].upper()}")
        lines.append(f"theorem whitespot_c: {'VALID' if report['goal_ok'] else 'FAILS'}")
        return "\n".join(lines), ""
    raise AssertionError(command)


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print the report as JSON")
    scope = argparse.ArgumentParser(add_help=False)
    scope.add_argument("--max-worlds", type=int, dest="max_worlds")
    scope.add_argument("--agents", type=_csv)
    scope.add_argument("--atoms", type=_csv)
    scope.add_argument("--frame", choices=[f.value for f in FrameClass])
    scope.add_argument("--budget", type=int, help="stop after this many models")

    p = argparse.ArgumentParser(prog="pal", description="Public announcement logic model checker.")
    p.add_argument("--json", action="store_true", default=False, help="print the report as JSON")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", parents=[common], help="parse and pretty-print a formula")
    sp.add_argument("formula")
    sp.set_defaults(run=cmd_parse)

    sp = sub.add_parser("eval", parents=[common], help="evaluate a formula at a world of a model file")
    sp.add_argument("--model", required=True)
    sp.add_argument("--world", required=True)
    sp.add_argument("--domain", type=_csv, help="evaluation domain (sse only); default all worlds")
    sp.add_argument("--semantics", choices=["direct", "sse"], default="direct")
    sp.add_argument("formula")
    sp.set_defaults(run=cmd_eval)

    sp = sub.add_parser("announce", parents=[common], help="print the model after announcing a formula")
    sp.add_argument("--model", required=True)
    sp.add_argument("formula")
    sp.set_defaults(run=cmd_announce)

    sems = [s.value for s in Semantics]
    sp = sub.add_parser("valid", parents=[common, scope], help="bounded validity check")
    sp.add_argument("--semantics", choices=sems)
    sp.add_argument("formula")
    sp.set_defaults(run=cmd_valid)

    sp = sub.add_parser("rule", parents=[common, scope], help="bounded check of a rule")
    sp.add_argument("--premise", action="append", default=[])
    sp.add_argument("--conclusion", required=True)
    sp.add_argument("--semantics", choices=sems)
    sp.set_defaults(run=cmd_rule)

    sp = sub.add_parser("suite", parents=[common, scope], help="run an experiment suite")
    sp.add_argument("name", choices=["axioms", "substitution", "faithfulness"])
    sp.add_argument("--semantics", choices=["direct", "sse"])
    sp.add_argument("--formulas", type=int, default=500, help="faithfulness: generated formulas")
    sp.add_argument("--samples", type=int, default=10_000, help="faithfulness: random 3-world cases")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(run=cmd_suite)

    sp = sub.add_parser("wisemen", parents=[common], help="solve the wise men puzzle")
    sp.add_argument("--footnote-axioms", action="store_true",
                    help="also assume C(ws x -> K y ws x) for x != y")
    sp.add_argument("--consequence-worlds", type=int, default=0,
                    help="also check premises => goal over S5 models up to this size")
    sp.set_defaults(run=cmd_wisemen)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    run: Callable = args.run
    try:
        report, code = run(args)
    except (UsageError, ParseError, ModelError, EvaluationError, ScopeError) as e:
        print(f"pal: error: {e}", file=err)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(report, indent=2), file=out)
    else:
        text, note = _human(args.command, report)
        if note:
            print(note, file=err)
        if text:
            print(text, file=out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
