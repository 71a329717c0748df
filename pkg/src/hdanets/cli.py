"""Command-line entry point: ``hdanets convert|stats|check|validate``.

Exit codes: 0 success, 1 unreadable or unsupported input, 2 exploration
budget exhausted (partial output is still written), 3 failed check.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .budget import Budget, BudgetExceeded
from .cubical import Complex, validate
from .export import (
    complex_from_json,
    complex_to_dot,
    complex_to_json,
    dumps,
    st_to_dot,
    st_to_json,
    stats_csv,
)
from .ingest import ParseError, load_net
from .net import as_plain
from .semantics import build, build_bounded, check_flatten, check_truncation, validate_st

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_CHECK = 0, 1, 2, 3
SEMANTICS = ("hda", "aposteriori", "apriori", "st")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="net file (.pnml or .gnet.json)")
    common.add_argument("--input-format", choices=("pnml", "gnet"), help="override format detection")
    common.add_argument("--semantics", choices=SEMANTICS, default="hda")
    common.add_argument("--max-cells", type=_positive, default=100_000, help="cell/state budget")
    common.add_argument("--max-dim", type=_positive, default=8, help="dimension cap")
    common.add_argument("--max-step-size", type=_positive, help="step size cap (default: max-dim)")
    common.add_argument("--output", help="write here instead of stdout")

    parser = _Parser(prog="hdanets", description="Translate Petri nets into higher-dimensional automata.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("convert", parents=[common], help="emit the complex or ST-graph")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    sub.add_parser("stats", parents=[common], help="per-dimension cell counts as CSV")
    p = sub.add_parser("check", parents=[common], help="compare against the reachability graphs")
    p.add_argument("--lemma", choices=("truncation", "flatten", "all"), default="all")
    p = sub.add_parser("validate", parents=[common], help="check the face-map identities")
    p.add_argument("--load-complex", help=argparse.SUPPRESS)
    return parser


def _load(args):
    if not args.input:
        raise InputError("--input is required")
    try:
        net, initial, diags = load_net(args.input, args.input_format)
    except ParseError as exc:
        raise InputError(str(exc)) from None
    except (OSError, ValueError) as exc:
        raise InputError(f"{args.input}: {exc}") from None
    for d in diags:
        print(d, file=sys.stderr)
    sem = args.semantics
    if sem == "st":
        if net.kind == "pni":
            raise InputError("ST-graphs are not defined for nets with inhibitor arcs")
        return net, initial
    if net.kind == "gnet":
        if not net.is_constant():
            raise InputError("this G-net has non-constant flow; use --semantics st")
        net = as_plain(net)
    if sem == "hda" and net.kind == "pni":
        raise InputError("net has inhibitor arcs; use --semantics aposteriori or apriori")
    return net, initial


def _budget(args) -> Budget:
    return Budget(args.max_cells, args.max_dim, args.max_step_size)


def _build(args, net, initial):
    """Returns ``(result, note)``; ``note`` is set when a budget cut exploration short."""
    budget = _budget(args)
    try:
        result = build(net, initial, args.semantics, budget)
    except BudgetExceeded as exc:
        return exc.partial, f"{exc}; output is partial"
    if result.truncated:
        return result, f"exploration truncated at dimension {budget.max_dim}"
    return result, None


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_convert(args) -> int:
    net, initial = _load(args)
    result, note = _build(args, net, initial)
    if args.format == "json":
        doc = complex_to_json(result) if isinstance(result, Complex) else st_to_json(result)
        text = dumps(doc)
    else:
        text = complex_to_dot(result) if isinstance(result, Complex) else st_to_dot(result)
    _emit(args, text)
    if note:
        print(f"note: {note}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_stats(args) -> int:
    net, initial = _load(args)
    result, note = _build(args, net, initial)
    _emit(args, stats_csv(result))
    if note:
        print(f"note: {note}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_check(args) -> int:
    net, initial = _load(args)
    budget = _budget(args)
    lemmas = ("truncation", "flatten") if args.lemma == "all" else (args.lemma,)
    lines, failed, bounded = [], False, False
    built = build_bounded(net, initial, args.semantics, budget)
    for lemma in lemmas:
        if lemma == "flatten" and args.semantics == "st":
            lines.append("flatten: SKIP (G-nets have no step graph)")
            continue
        oracle = check_truncation if lemma == "truncation" else check_flatten
        res = oracle(net, initial, args.semantics, budget, built)
        lines.append(f"{lemma}: {res.status}")
        lines.extend(f"  {d}" for d in res.details)
        failed |= not res.ok
        bounded |= res.bounded
    _emit(args, "\n".join(lines) + "\n")
    if failed:
        return EXIT_CHECK
    return EXIT_BUDGET if bounded else EXIT_OK


def cmd_validate(args) -> int:
    note = None
    if args.load_complex:
        try:
            result = complex_from_json(json.loads(Path(args.load_complex).read_text(encoding="utf-8")))
        except (OSError, ValueError) as exc:
            raise InputError(f"{args.load_complex}: {exc}") from None
    else:
        net, initial = _load(args)
        result, note = _build(args, net, initial)
    problems = validate(result) if isinstance(result, Complex) else validate_st(result)
    _emit(args, "".join(f"{p}\n" for p in problems) or "no violations\n")
    if problems:
        return EXIT_CHECK
    if note:
        print(f"note: {note}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


COMMANDS = {"convert": cmd_convert, "stats": cmd_stats, "check": cmd_check, "validate": cmd_validate}


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
