"""Command-line front end.

Exit status: 0 done, 1 decided false under ``--assert-true``, 2 usage or
parse error, 3 time budget exceeded, 4 no solution formula over the
projection family.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from typing import Sequence

from .cad import TimeBudgetExceeded, compute_cad
from .formula import ParseError, free_vars, parse, parse_poly, render
from .models import (
    BUILTIN_MODELS,
    identifiability_sentence,
    implicitization_formula,
    load_model,
    membership_sentence,
    model_compare_sentence,
    quantity_region_formula,
)
from .polynomial import UsageError
from .qe import SolutionFormulaError, Stats, decide, eliminate

ENV_BUDGET = "CADQE_TIME_BUDGET"

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET, EXIT_NO_FORMULA = 0, 1, 2, 3, 4


def _budget(text: str | None) -> float | None:
    if text is None or text == "":
        return None
    try:
        val = float(text)
    except ValueError:
        raise UsageError(f"time budget must be a number of seconds, got {text!r}") from None
    if val <= 0:
        raise UsageError("time budget must be positive")
    return val


def _precision(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("precision must be at least 1")
    return n


def _order(text: str | None) -> list[str] | None:
    if not text:
        return None
    return [v for v in re.split(r"[\s,]+", text) if v]


def _read_input(args) -> str:
    if (args.text is None) == (args.file is None):
        raise UsageError("give exactly one input: inline text or --file")
    if args.text is not None:
        return args.text
    if args.file == "-":
        return sys.stdin.read()
    try:
        with open(args.file, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e.strerror}") from None


def _num(a, digits: int) -> str:
    return str(a.value) if a.is_rational else a.approx(digits)


def _emit(args, record: dict, lines: list[str]):
    if args.format == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _stats_dict(s: Stats) -> dict:
    return {"cells_built": s.cells_built, "cells_skipped": s.cells_skipped,
            "variables": s.variables, "projection_sizes": list(s.projection_sizes)}


def _report_stats(args, s: Stats):
    if args.stats:
        print("stats: " + json.dumps(_stats_dict(s), sort_keys=True), file=sys.stderr)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _do_decide(args, sentence) -> int:
    d = decide(sentence, var_order=_order(args.var_order), short_circuit=not args.no_short_circuit,
               time_budget=args.time_budget)
    word = "true" if d.value else "false"
    rec = {"value": d.value}
    lines = [word]
    g = d.genuine
    if args.witness and g:
        rec["witness"] = {v: _num(a, args.precision) for v, a in g.items()}
        label = "witness" if d.value else "counterexample"
        lines.append(f"{label}: " + ", ".join(f"{v} = {x}" for v, x in rec["witness"].items()))
    _emit(args, rec, lines)
    _report_stats(args, d.stats)
    return EXIT_FALSE if (args.assert_true and not d.value) else EXIT_OK


def _do_eliminate(args, f) -> int:
    stats = Stats()
    out = eliminate(f, var_order=_order(args.var_order), short_circuit=not args.no_short_circuit,
                    time_budget=args.time_budget, stats=stats)
    text = render(out)
    _emit(args, {"formula": text}, [text])
    _report_stats(args, stats)
    return EXIT_OK


def _solve(args, f) -> int:
    if args.emit:
        text = render(f)
        _emit(args, {"formula": text}, [text])
        return EXIT_OK
    if free_vars(f):
        return _do_eliminate(args, f)
    return _do_decide(args, f)


def cmd_decide(args) -> int:
    return _do_decide(args, parse(_read_input(args)))


def cmd_eliminate(args) -> int:
    return _do_eliminate(args, parse(_read_input(args)))


def cmd_cad(args) -> int:
    text = _read_input(args)
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    pieces = [s.strip() for s in re.split(r"[;,\n]", text) if s.strip()]
    if not pieces:
        raise UsageError("no polynomials given")
    order = _order(args.var_order) or []
    polys = []
    for s in pieces:
        p = parse_poly(s, order)
        for g in p.gens:
            if g not in order:
                order.append(g)
        polys.append(p)
    polys = [p.set_gens(order) for p in polys]
    deadline = None if args.time_budget is None else time.monotonic() + args.time_budget
    tree = compute_cad(polys, args.level, gens=order, deadline=deadline)
    recs = tree.records(args.precision, exact=args.exact)
    if args.format == "json":
        print(json.dumps({"variables": list(tree.gens),
                          "families": [[str(p) for p in fam] for fam in tree.families]}, sort_keys=True))
        for r in recs:
            print(json.dumps(r, sort_keys=True))
        return EXIT_OK
    print("variables: " + ", ".join(tree.gens))
    for k, fam in enumerate(tree.families, 1):
        print(f"level {k}: " + ", ".join(str(p) for p in fam))
    signs = {-1: "-", 0: "0", 1: "+"}
    for r in recs:
        path = ".".join(map(str, r["path"]))
        sv = "".join(signs[s] for s in r["signs"])
        line = f"{'  ' * (r['level'] - 1)}[{path}] {r['kind']} ({', '.join(r['sample'])}) signs {sv or '-'}"
        if args.exact:
            line += " exact " + json.dumps(r["exact"], sort_keys=True)
        print(line)
    print(f"{len(tree.leaves())} leaves")
    return EXIT_OK


def cmd_model(args) -> int:
    q = args.question
    if q == "list":
        for name in sorted(BUILTIN_MODELS):
            m = BUILTIN_MODELS[name]()
            print(f"{name}: params {', '.join(m.params)}; observables {', '.join(m.observables)}")
        return EXIT_OK
    if q == "ci":
        if not args.conclusion:
            raise UsageError("ci needs at least one --conclusion")
        f = membership_sentence(args.premise or [], args.conclusion, args.n, args.form)
        return _solve(args, f)
    if not args.models:
        raise UsageError(f"{q} needs a model (built-in name or description file)")
    models = [load_model(m) for m in args.models]
    if q == "compare":
        if len(models) != 2:
            raise UsageError("compare needs exactly two models")
        return _solve(args, model_compare_sentence(models[0], models[1], args.mode))
    if len(models) != 1:
        raise UsageError(f"{q} takes one model")
    m = models[0]
    if q == "implicitize":
        return _solve(args, implicitization_formula(m))
    if q == "identify":
        return _solve(args, identifiability_sentence(m, args.quantity or None, args.with_observables))
    if q == "region":
        if not args.quantity or len(args.quantity) != 1:
            raise UsageError("region needs exactly one --quantity")
        return _solve(args, quantity_region_formula(m, args.quantity[0], args.var))
    raise UsageError(f"unknown model question {q!r}")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, inline: bool = True):
    if inline:
        p.add_argument("text", nargs="?", help="inline input (omit when using --file)")
        p.add_argument("-f", "--file", help="read input from a file ('-' for stdin)")
    p.add_argument("--var-order", help="comma-separated variable order; CAD cost depends heavily on it")
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="plain text or line-delimited JSON records")
    p.add_argument("--precision", type=_precision, default=6, help="decimal digits for sample coordinates")
    p.add_argument("--time-budget", default=None,
                   help=f"seconds before giving up (default from ${ENV_BUDGET})")
    p.add_argument("--stats", action="store_true", help="print cell statistics to stderr")


def _solver_opts(p: argparse.ArgumentParser):
    p.add_argument("--assert-true", action="store_true", help="exit 1 when the sentence is false")
    p.add_argument("--witness", action="store_true", help="print a witness or counterexample")
    p.add_argument("--no-short-circuit", action="store_true", help="evaluate every child cell")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cadqe", description="Real quantifier elimination by cylindrical "
                                 "algebraic decomposition.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide a sentence")
    _common(p)
    _solver_opts(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("eliminate", help="eliminate quantifiers from a formula")
    _common(p)
    p.add_argument("--no-short-circuit", action="store_true", help="evaluate every child cell")
    p.set_defaults(func=cmd_eliminate)

    p = sub.add_parser("cad", help="print a sign-invariant decomposition")
    _common(p)
    p.add_argument("--level", type=int, default=None, help="decompose only the first LEVEL variables")
    p.add_argument("--exact", action="store_true", help="include exact defining data of sample coordinates")
    p.set_defaults(func=cmd_cad)

    p = sub.add_parser("model", help="ask a question about statistical models")
    p.add_argument("question", choices=("compare", "identify", "implicitize", "region", "ci", "list"))
    p.add_argument("models", nargs="*", help="built-in model names or model description files")
    _common(p, inline=False)
    _solver_opts(p)
    p.add_argument("--mode", choices=("inclusion", "equality", "overlap"), default="inclusion")
    p.add_argument("--quantity", action="append", help="polynomial in the parameters (repeatable)")
    p.add_argument("--var", default="r", help="free variable naming the quantity in region questions")
    p.add_argument("--with-observables", action="store_true", help="keep the observable block in identify")
    p.add_argument("--premise", action="append", help="independence statement such as '1 _||_ 3 | 2'")
    p.add_argument("--conclusion", action="append", help="independence statement; several form a disjunction")
    p.add_argument("--n", type=int, default=3, help="number of Gaussian variables for ci")
    p.add_argument("--form", choices=("correlation", "covariance"), default="correlation")
    p.add_argument("--emit", action="store_true", help="print the compiled formula instead of solving it")
    p.set_defaults(func=cmd_model)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    try:
        args.time_budget = _budget(args.time_budget if args.time_budget is not None
                                   else os.environ.get(ENV_BUDGET))
        return args.func(args)
    except ParseError as e:
        print(f"cadqe: parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as e:
        print(f"cadqe: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TimeBudgetExceeded as e:
        print(f"cadqe: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except SolutionFormulaError as e:
        print(f"cadqe: {e}", file=sys.stderr)
        return EXIT_NO_FORMULA


def main() -> None:
    sys.exit(run())
