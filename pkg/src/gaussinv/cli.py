"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 property violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .bracket import evaluate, load_formulas
from .diagram import DiagramError, GaussDiagram, parse, serialize
from .families import FamilyError, FamilySpec, generate, load_builtin, table1_report
from .lab import corpus, find_violation, formula_of, sample_order_checks, solve

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2
DEFAULT_SEED = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- inputs --------------------------------------------------------------------


def read_formulas(arg: str) -> dict:
    """A formula file path, or the name of a shipped file (``lk``, ``theorem1_all``)."""
    path = Path(arg)
    if path.is_file():
        return load_formulas(path)
    name = arg[: -len(".formula")] if arg.endswith(".formula") else arg
    try:
        return load_builtin(name)
    except FileNotFoundError:
        raise UsageError(f"no formula file {arg!r}") from None


def read_diagram(arg: str) -> GaussDiagram:
    """A Gauss-code file path, or a family name such as ``L_3_5`` or ``hopf_pp``."""
    path = Path(arg)
    if path.is_file():
        return parse(path.read_text())
    name = arg[: -len(".gauss")] if arg.endswith(".gauss") else arg
    try:
        return generate(FamilySpec.parse(name))
    except FamilyError as exc:
        raise UsageError(f"no diagram file {arg!r} and {exc}") from None


# -- output --------------------------------------------------------------------


def _cell(x):
    return str(x) if isinstance(x, Fraction) else x


def render(fmt: str, header: list, rows: list, meta: dict) -> str:
    if fmt == "json":
        doc = dict(meta)
        doc["rows"] = [{h: _cell(v) for h, v in zip(header, r)} for r in rows]
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(v) for v in r])
        return buf.getvalue()
    lines = [f"# {k}: {v}" for k, v in sorted(meta.items()) if not isinstance(v, (dict, list))]
    widths = [max(len(str(h)), *(len(str(_cell(r[i]))) for r in rows)) if rows else len(str(h))
              for i, h in enumerate(header)]
    lines.append("  ".join(str(h).ljust(w) for h, w in zip(header, widths)).rstrip())
    for r in rows:
        lines.append("  ".join(str(_cell(v)).ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------------


def cmd_eval(args) -> int:
    rows = []
    for darg in args.diagrams:
        d = read_diagram(darg)
        for farg in args.formulas:
            for name, f in read_formulas(farg).items():
                rows.append((darg, name, evaluate(f, d)))
    emit(args, render(args.format, ["diagram", "formula", "value"], rows, {"command": "eval"}))
    return EXIT_OK


def cmd_walk(args) -> int:
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    d = read_diagram(args.diagram)
    formulas = read_formulas(args.formula)
    rng = random.Random(args.seed)
    rows, transcripts = [], {}
    for name, f in formulas.items():
        walk_seed = rng.getrandbits(64)
        bad = find_violation(f, d, args.steps, walk_seed)
        start = evaluate(f, d)
        if bad is None:
            rows.append((name, start, start, "constant"))
        else:
            lo, hi = sorted((bad.before, bad.after))
            rows.append((name, lo, hi, "varied"))
            transcripts[name] = bad.replay_text()
    meta = {"command": "walk", "diagram": args.diagram, "seed": args.seed, "steps": args.steps}
    if transcripts:
        meta["transcripts"] = transcripts
    text = render(args.format, ["formula", "min", "max", "status"], rows, meta)
    if transcripts and args.format == "text":
        text += "".join(f"# transcript for {n}\n{t}" for n, t in transcripts.items())
    emit(args, text)
    return EXIT_VIOLATION if transcripts else EXIT_OK


def cmd_table1(args) -> int:
    if args.max_param < 1 or args.max_param % 2 == 0:
        raise UsageError("the maximum parameter must be an odd integer >= 1")
    rows = [("L_mn", m, n, name, v) for m, n, name, v in table1_report(args.max_param)]
    meta = {"command": "table1", "max_param": args.max_param}
    emit(args, render(args.format, ["family", "m", "n", "formula", "value"], rows, meta))
    return EXIT_OK


def cmd_solve(args) -> int:
    report = solve(args.max_arity, args.samples, args.seed, verify_walks=args.verify_walks)
    if args.format == "json":
        text = report.to_json() + "\n"
    else:
        rows = []
        for i, (v, s) in enumerate(zip(report.vectors, report.status)):
            f = formula_of(v, report.basis)
            for c, p in f.terms:
                rows.append((i, s, c, serialize(p).replace("\n", " | ")))
        meta = {"command": "solve", "k": args.max_arity, "samples": args.samples,
                "seed": args.seed, "verify_seed": report.verify_seed,
                "dimension": len(report.vectors)}
        text = render(args.format, ["vector", "status", "coefficient", "pattern"], rows, meta)
    emit(args, text)
    return EXIT_VIOLATION if "demoted" in report.status else EXIT_OK


def cmd_order(args) -> int:
    formulas = read_formulas(args.formula)
    diagrams = corpus(args.seed, 50)
    rows = []
    for name, f in formulas.items():
        checks = sample_order_checks(f, args.size, args.samples, args.seed, diagrams)
        nonzero = sum(1 for _, _, v in checks if v != 0)
        rows.append((name, args.size, args.samples, nonzero))
    meta = {"command": "order", "seed": args.seed, "size": args.size, "samples": args.samples}
    emit(args, render(args.format, ["formula", "size", "samples", "nonzero"], rows, meta))
    # a nonzero alternating sum means the formula is not of order < size
    return EXIT_VIOLATION if any(r[3] for r in rows) else EXIT_OK


def cmd_family(args) -> int:
    d = read_diagram(args.name)
    if args.format == "json":
        text = json.dumps({"name": args.name, "arrows": len(d), "gauss": serialize(d, canonical=False)},
                          indent=2, sort_keys=True) + "\n"
    else:
        text = serialize(d, canonical=False) + "\n"
    emit(args, text)
    return EXIT_OK


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = _Parser(prog="gaussinv", description="Gauss-diagram formulas for two-component links.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eval", parents=[common], help="evaluate formulas on diagrams")
    s.add_argument("formulas", nargs="+", help="formula files; the last arguments are diagrams")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("walk", parents=[common], help="check formulas along a random move walk")
    s.add_argument("diagram")
    s.add_argument("formula")
    s.add_argument("--steps", type=int, default=100)
    s.set_defaults(func=cmd_walk)

    s = sub.add_parser("table1", parents=[common], help="formula values on the L(m, n) family")
    s.add_argument("max_param", type=int, nargs="?", default=7)
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("solve", parents=[common], help="solve for invariant pattern combinations")
    s.add_argument("--max-arity", type=int, default=1)
    s.add_argument("--samples", type=int, default=500)
    s.add_argument("--verify-walks", type=int, default=20)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("order", parents=[common], help="sampled crossing-change order checks")
    s.add_argument("formula")
    s.add_argument("--size", type=int, default=4)
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("family", parents=[common], help="print a family diagram")
    s.add_argument("name", help="e.g. L_3_5, hopf_pm, unlink, twist_chain_2_1")
    s.set_defaults(func=cmd_family)
    return p


def _split_eval(args):
    # eval takes formula files followed by diagrams; a diagram is anything
    # that is not a formula file
    items = args.formulas
    k = len(items)
    while k > 0 and not _is_formula(items[k - 1]):
        k -= 1
    if k == 0 or k == len(items):
        raise UsageError("eval needs at least one formula and one diagram")
    args.formulas, args.diagrams = items[:k], items[k:]


def _is_formula(arg: str) -> bool:
    if arg.endswith(".formula"):
        return True
    if arg.endswith(".gauss"):
        return False
    path = Path(arg)
    if path.is_file():
        lines = (ln.split("#", 1)[0].strip() for ln in path.read_text().splitlines())
        first = next((ln for ln in lines if ln), "")
        return not first.startswith("comp1:")
    try:
        read_formulas(arg)
        return True
    except UsageError:
        return False


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("steps", "samples", "max_arity", "size", "seed", "verify_walks"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            print(f"gaussinv: error: --{name.replace('_', '-')} must be >= 0", file=sys.stderr)
            return EXIT_USAGE
    try:
        if args.command == "eval":
            _split_eval(args)
        return args.func(args)
    except (UsageError, DiagramError, FamilyError, ValueError, KeyError) as exc:
        print(f"gaussinv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
