"""Command-line front end.

Commands: exec, check, repair, render, inject, bench. Exit codes:
0 success, 1 parse error, 2 runtime error, 3 layout has errors (check).
Content outputs are deterministic given flags and seed; wall-clock
timings go to stderr or the separate timing section of bench reports.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import bench as benchmod
from .corrupt import inject_errors
from .errors import PsdlRuntimeError, PsdlSyntaxError
from .interp import Layout, SceneTemplate, execute
from .lang import parse, unparse
from .loss import total_loss
from .render import render_svg
from .repair import STRATEGIES, SearchConfig, repair

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_RUNTIME = 2
EXIT_INVALID_LAYOUT = 3


def _load_program(path: str):
    return parse(Path(path).read_text(encoding="utf-8"))


def _write_json(data: dict, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def _cmd_exec(args) -> int:
    template = SceneTemplate.load(args.template)
    try:
        program = _load_program(args.program)
    except PsdlSyntaxError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    try:
        layout = execute(program, template)
    except PsdlRuntimeError as err:
        print(f"runtime error: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    layout.save(args.out)
    return EXIT_OK


def _cmd_check(args) -> int:
    template = SceneTemplate.load(args.template)
    if args.layout:
        layout = Layout.load(args.layout)
    else:
        try:
            program = _load_program(args.program)
        except PsdlSyntaxError as err:
            print(f"parse error: {err}", file=sys.stderr)
            return EXIT_PARSE
        try:
            layout = execute(program, template)
        except PsdlRuntimeError as err:
            print(f"runtime error: {err}", file=sys.stderr)
            return EXIT_RUNTIME
    report = total_loss(layout)
    text = json.dumps(report.to_json(), indent=2)
    print(text)
    if args.out:
        _write_json(report.to_json(), Path(args.out))
    return EXIT_OK if report.error_count == 0 else EXIT_INVALID_LAYOUT


def _cmd_repair(args) -> int:
    template = SceneTemplate.load(args.template)
    try:
        program = _load_program(args.program)
    except PsdlSyntaxError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    try:
        result = repair(program, template, args.strategy, SearchConfig(seed=args.seed))
    except PsdlRuntimeError as err:
        print(f"runtime error: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if result.program is not None:
        (out / "repaired.psdl").write_text(unparse(result.program), encoding="utf-8")
    result.layout.save(out / "layout.json")
    trace_json = result.trace.to_json() if result.trace is not None else {}
    _write_json(trace_json, out / "trace.json")
    print(f"errors before: {result.report_before.error_count}")
    print(f"errors after:  {result.report_after.error_count}")
    print(f"repair time: {result.wall_time_s:.2f}s", file=sys.stderr)
    return EXIT_OK


def _cmd_render(args) -> int:
    layout = Layout.load(args.layout)
    report = total_loss(layout)
    render_svg(layout, args.out, report)
    return EXIT_OK


def _cmd_inject(args) -> int:
    template = SceneTemplate.load(args.template)
    try:
        program = _load_program(args.program)
    except PsdlSyntaxError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    try:
        execute(program, template)
    except PsdlRuntimeError as err:
        print(f"runtime error: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    corrupted = inject_errors(program, random.Random(args.seed), args.errors)
    Path(args.out).write_text(unparse(corrupted), encoding="utf-8")
    return EXIT_OK


def _cmd_bench(args) -> int:
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    seeds = [int(s) for s in args.seeds.split(",")]
    report = benchmod.run_bench(Path(args.corpus), strategies, seeds, args.errors)
    print(benchmod.format_table(report), end="")
    if args.out:
        benchmod.save_report(report, Path(args.out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psdl",
        description="Scene layout programs: execute, check, repair, render, benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exec", help="execute a program against a template")
    p.add_argument("--template", required=True)
    p.add_argument("--program", required=True)
    p.add_argument("--out", required=True, help="layout JSON path")
    p.set_defaults(fn=_cmd_exec)

    p = sub.add_parser("check", help="report layout errors (exit 3 when any)")
    p.add_argument("--template", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--layout")
    src.add_argument("--program")
    p.add_argument("--out", help="also write the report JSON here")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("repair", help="repair a faulty program")
    p.add_argument("--template", required=True)
    p.add_argument("--program", required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="psdl")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_repair)

    p = sub.add_parser("render", help="render a layout to top-down SVG")
    p.add_argument("--layout", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("inject", help="corrupt a clean program at random edit sites")
    p.add_argument("--template", required=True)
    p.add_argument("--program", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--errors", type=int, default=benchmod.DEFAULT_ERRORS_PER_SCENE,
                   help="number of sites to corrupt")
    p.add_argument("--out", required=True, help="corrupted program path")
    p.set_defaults(fn=_cmd_inject)

    p = sub.add_parser("bench", help="corrupt-and-repair benchmark over a corpus")
    p.add_argument("--corpus", required=True, help="directory of scene (.json, .psdl) pairs")
    p.add_argument("--strategies", default=",".join(STRATEGIES))
    p.add_argument("--seeds", default="0")
    p.add_argument("--errors", type=int, default=benchmod.DEFAULT_ERRORS_PER_SCENE)
    p.add_argument("--out", help="report JSON path")
    p.set_defaults(fn=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
