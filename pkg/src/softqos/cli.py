"""``softqos solve|refine|run|repl <file>``.

Exit codes: 0 ok / holds / success, 1 usage or input error,
2 refinement fails or agent stuck, 3 exploration bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import report
from .constraint import ConstraintError
from .lang.lexer import ParseError
from .lang.parser import parse_problem
from .problem import Model
from .refinement import Orientation, locally_refines, reliability_margin
from .repl import ReplSession
from .solver import solve
from .vm import Exhaustive, Machine, Outcome, RunPolicy, Seeded, VMError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAIL = 2
EXIT_BOUND = 3

_RUN_EXIT = {Outcome.SUCCESS: EXIT_OK, Outcome.STUCK: EXIT_FAIL, Outcome.BOUND_EXCEEDED: EXIT_BOUND}


class UsageError(Exception):
    pass


def load(path: str) -> Model:
    text = Path(path).read_text(encoding="utf-8")
    return parse_problem(text).build()


def _emit(args, text: str, data: dict) -> None:
    if args.format == "json":
        print(json.dumps(data, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def cmd_solve(args) -> int:
    model = load(args.file)
    rep = solve(model.scsp())
    _emit(args, report.solution_text(rep), report.solution_json(rep))
    return EXIT_OK


def cmd_refine(args) -> int:
    model = load(args.file)
    orientation = args.orientation or model.problem.orientation
    if orientation is None:
        raise UsageError("refine needs an orientation: add `orientation ...;` to the file or pass --orientation")
    query = model.refinement_query(orientation)
    rep = locally_refines(query)
    if model.spec.kind in ("probabilistic", "fuzzy"):
        rel = reliability_margin(query.implementation, query.requirement, query.interface)
        rep = replace(rep, blevel=rel.blevel)
    name = Orientation(orientation).value
    _emit(args, report.refinement_text(rep, name), report.refinement_json(rep, name))
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_run(args) -> int:
    model = load(args.file)
    if model.problem.agent is None:
        raise UsageError("problem file has no `agent` section")
    mode = Exhaustive(args.depth) if args.exhaustive else Seeded(args.seed)
    result = Machine(model).run(RunPolicy(mode, max_steps=args.max_steps))
    _emit(args, report.run_text(result, trace=args.trace, exhaustive=args.exhaustive), report.run_json(result))
    return _RUN_EXIT[result.outcome]


def cmd_repl(args, stdin=None) -> int:
    session = ReplSession(load(args.file))
    stdin = stdin or sys.stdin
    interactive = stdin.isatty()
    while True:
        if interactive:
            print("> ", end="", flush=True)
        line = stdin.readline()
        if not line:
            break
        line = line.split("#", 1)[0].strip()
        if line in ("quit", "exit"):
            break
        for out in session.execute(line):
            print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="softqos", description="Soft constraint QoS toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(func=func)
        return p

    add("solve", cmd_solve, "solve the SCSP given by `con`")
    p = add("refine", cmd_refine, "check local refinement")
    p.add_argument("--orientation", choices=[o.value for o in Orientation])
    p = add("run", cmd_run, "run the agent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--depth", type=int, default=64)
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--trace", action="store_true")
    add("repl", cmd_repl, "interactive store console")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ParseError, ConstraintError, VMError, UsageError, ValueError) as exc:
        print(f"softqos: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
