"""Command-line front end: ``erue check|prove|export-dot|show``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .checker import ProofScript, check_script, load_script, load_script_builtin
from .dot import to_dot
from .prover import FO, HO, ModeConfig, SearchLimits, parse_hints, prove
from .syntax import format_problem, load_problem, resolve_path
from .terms import ErueError

BUILTINS = ("ref1", "ref2")
EXIT_PARSE = 3


def _load_script(args) -> ProofScript:
    if args.builtin:
        return load_script_builtin(args.builtin)
    if not args.script:
        raise ErueError("give a script path or --builtin ref1|ref2")
    return load_script(args.script)


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_PARSE


def cmd_check(args) -> int:
    try:
        script = _load_script(args)
    except (OSError, ErueError) as exc:
        return _fail(str(exc))
    report = check_script(script)
    print(report.machine() if args.machine else report.text(), end="")
    return report.exit_code


def cmd_prove(args) -> int:
    try:
        path = resolve_path(args.problem)
        problem = load_problem(path)
        hints = ()
        if args.hints:
            hints = parse_hints(resolve_path(args.hints).read_text(), problem.signature)
        limits = SearchLimits(
            max_clauses=args.max_clauses,
            max_weight=args.max_weight,
            max_helper_depth=args.helper_depth,
            max_depth=args.depth,
            time_budget=args.time,
        )
    except (OSError, ErueError, ValueError) as exc:
        return _fail(str(exc))
    problem.source = str(path.resolve())
    mode = ModeConfig(FO if args.fo else HO, hints, chain=args.chain)
    report = prove(problem, mode, limits)
    print(report.text(), end="")
    if not report.found:
        return 1
    text = report.script.format()
    if args.output:
        Path(args.output).write_text(text)
        print(f"script written to {args.output}")
    else:
        print(text, end="")
    return 0


def cmd_export_dot(args) -> int:
    try:
        script = _load_script(args)
    except (OSError, ErueError) as exc:
        return _fail(str(exc))
    report = check_script(script)
    if not report.ok:
        print(report.text(), end="", file=sys.stderr)
        return 2 if report.exit_code != EXIT_PARSE else EXIT_PARSE
    dot = to_dot(report, script.name or "derivation")
    if args.output:
        Path(args.output).write_text(dot)
    else:
        print(dot, end="")
    return 0


def cmd_show(args) -> int:
    try:
        if args.builtin:
            print(load_script_builtin(args.builtin).format(), end="")
            return 0
        if not args.path:
            raise ErueError("give a path or --builtin ref1|ref2")
        path = resolve_path(args.path)
        if path.suffix == ".ers":
            print(load_script(path).format(), end="")
        else:
            print(format_problem(load_problem(path)), end="")
    except (OSError, ErueError) as exc:
        return _fail(str(exc))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="erue", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify a proof script")
    p.add_argument("script", nargs="?")
    p.add_argument("--builtin", choices=BUILTINS)
    p.add_argument("--machine", action="store_true", help="one line per step")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("prove", help="saturate a problem until the empty clause or a limit")
    p.add_argument("problem")
    p.add_argument("--fo", action="store_true", help="first-order-restricted rule set")
    p.add_argument("--chain", action="store_true", help="allow the chain reading of Solve")
    p.add_argument("--hints", help="file of 'bind <Var> := <term>' lines")
    p.add_argument("--max-clauses", type=int, default=100_000)
    p.add_argument("--max-weight", type=int, default=40)
    p.add_argument("--depth", type=int, default=40)
    p.add_argument("--helper-depth", type=int, default=2)
    p.add_argument("--time", type=float, default=60.0)
    p.add_argument("-o", "--output", help="write the proof script here")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("export-dot", help="derivation graph of a verified script")
    p.add_argument("script", nargs="?")
    p.add_argument("--builtin", choices=BUILTINS)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("show", help="pretty-print a problem or script")
    p.add_argument("path", nargs="?")
    p.add_argument("--builtin", choices=BUILTINS)
    p.set_defaults(func=cmd_show)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
