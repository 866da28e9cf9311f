"""Command-line entry point: ``hypertope <verb> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .errors import (
    CapExceeded,
    ElementBudgetExceeded,
    FlagBudgetExceeded,
    GeneratorNotInParent,
    HypertopeError,
    NotAFlag,
    NotInvolutions,
    ParseError,
    RDoesNotGenerate,
    TypeOutOfRange,
)

_INPUT_ERRORS = (ParseError, NotInvolutions, GeneratorNotInParent, RDoesNotGenerate, TypeOutOfRange, NotAFlag)
_BUDGET_ERRORS = (CapExceeded, ElementBudgetExceeded, FlagBudgetExceeded)


def _types(text: str) -> list[int]:
    text = text.strip()
    if not text or text in ("-", "none"):
        return []
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad type list {text!r}") from None


def _load(path: str) -> harness.InputSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    spec = harness.parse_input(text)
    spec.name = spec.name or Path(path).stem
    return spec


def _emit(args, payload, text_lines):
    if args.quiet:
        return
    if args.json:
        sys.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        for line in text_lines:
            print(line)


def _summary_lines(report: dict) -> list[str]:
    g, c, v = report["geometry"], report["classification"], report["verdicts"]
    lines = [
        f"group order      {report['group']['order']}",
        f"parabolic orders {report['parabolics']['orders']}",
        f"element counts   {g['element_counts']}",
        f"geometry         {g['is_geometry']}",
    ]
    for key in ("c_group", "c_plus_group"):
        if key in report["criteria"]:
            lines.append(f"{key:<16} {report['criteria'][key]['verdict']}")
    if c is not None:
        lines += [
            f"chambers         {g['chamber_count']}",
            f"thin / firm / rc {g['thin']} / {g['firm']} / {g['residually_connected']}",
            f"classification   {c['label']}",
            f"aut order        {c['aut_order']}",
        ]
    lines.append(f"hypertope        {v['hypertope']}")
    lines.append(f"regular / chiral {v['regular_hypertope']} / {v['chiral_hypertope']}")
    for key, value in report["witnesses"].items():
        lines.append(f"witness {key}: {value}")
    return lines


def cmd_check(args) -> int:
    report = harness.run_report(_load(args.file), cap=args.cap, include_timing=args.timing)
    if args.json:
        if not args.quiet:
            sys.stdout.write(harness.dumps_report(report))
    else:
        _emit(args, report, _summary_lines(report))
    return harness.exit_code_for(report)


def cmd_classify(args) -> int:
    report = harness.run_report(_load(args.file), cap=args.cap, include_timing=args.timing)
    c = report["classification"]
    payload = {"classification": c, "verdicts": report["verdicts"]}
    lines = [c["label"] if c else "not a geometry"]
    _emit(args, payload, lines)
    return harness.exit_code_for(report)


def cmd_export_dot(args) -> int:
    spec = _load(args.file)
    if args.cap:
        spec.cap = args.cap
    text = harness.export_dot(spec, args.residue)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    elif not args.quiet:
        sys.stdout.write(text)
    return harness.EXIT_OK


def cmd_catalog(args) -> int:
    rows, worst = [], harness.EXIT_OK
    for name, spec, expected in harness.load_catalog(args.names or None):
        report = harness.run_report(spec, cap=args.cap)
        code = harness.exit_code_for(report)
        mismatches = harness.compare_expected(report, expected) if expected else ["no snapshot"]
        if mismatches and code == harness.EXIT_OK:
            code = harness.EXIT_INCONSISTENT
        worst = max(worst, code)
        rows.append({"name": name, "summary": harness.summarize(report), "mismatches": mismatches, "exit": code})
    lines = []
    for r in rows:
        s = r["summary"]
        status = "ok" if not r["mismatches"] else "MISMATCH " + "; ".join(r["mismatches"])
        lines.append(f"{r['name']:<28} order {s['group_order']:<4} {s['kind'] or '-':<15} {status}")
    _emit(args, rows, lines)
    return worst


def cmd_verify(args) -> int:
    kwargs = {}
    if args.search:
        kwargs = {"ranks": tuple(args.ranks), "rank4_max_order": args.rank4_max_order,
                  "degree": args.degree, "signature": args.signature}
    suite = harness.verify_main_theorem(args.names or None, search=args.search,
                                        max_order=args.max_order, **kwargs)
    d = suite.as_dict()
    lines = [f"catalog fixtures  {len(d['catalog'])}"]
    if d["search"] is not None:
        for k, v in d["search"]["counts"].items():
            lines.append(f"{k:<17} {v}")
    lines.append(f"rank-3 rc & firm  {d['rank3']['residually_connected_and_firm']}/{d['rank3']['checked']}")
    lines.append(f"violations        {len(d['theorem_violations'])}")
    for v in d["theorem_violations"]:
        lines.append(f"THEOREM-VIOLATION {v}")
    _emit(args, d, lines)
    return harness.EXIT_OK if suite.ok else harness.EXIT_THEOREM


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="group order cap (default: $HYPERTOPE_CAP or 100000)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--quiet", action="store_true", help="no output; exit code only")

    parser = argparse.ArgumentParser(prog="hypertope", description="Coset geometries of C-groups and C+-groups.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("check", parents=[common], help="full report for one input file")
    p.add_argument("file")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-identity)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", parents=[common], help="FlagTransitive / Chiral / Neither")
    p.add_argument("file")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("export-dot", parents=[common], help="DOT text of a base-chamber residue")
    p.add_argument("file")
    p.add_argument("--residue", type=_types, default=[], help="types of the base flag, e.g. '0' or '0,1'")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("catalog", parents=[common], help="run built-in fixtures against their snapshots")
    p.add_argument("names", nargs="*")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify-main-theorem", parents=[common], help="catalog plus optional search")
    p.add_argument("names", nargs="*", help="restrict the catalog part to these fixtures")
    p.add_argument("--search", action="store_true", help="also enumerate generating tuples in built-in groups")
    p.add_argument("--max-order", type=int, default=60, help="largest group order searched (default 60)")
    p.add_argument("--ranks", type=int, nargs="+", default=[3, 4], help="ranks to search (default 3 4)")
    p.add_argument("--rank4-max-order", type=int, default=24, help="order limit for rank 4 (default 24)")
    p.add_argument("--degree", type=int, default=None, help="only groups of this degree")
    p.add_argument("--signature", type=int, nargs=3, default=None, metavar=("A1", "A2", "A12"),
                   help="rank-3 filter on the orders of a1, a2 and a1^-1 a2")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        code, msg = harness.EXIT_PARSE, exc
    except _BUDGET_ERRORS as exc:
        code, msg = harness.EXIT_CAP, exc
    except HypertopeError as exc:
        code, msg = harness.EXIT_INCONSISTENT, exc
    if isinstance(msg, ParseError) and getattr(msg, "errors", None):
        text = "\n".join(f"  {e}" for e in msg.errors)
        print(f"error: {type(msg).__name__}\n{text}", file=sys.stderr)
    else:
        print(f"error: {type(msg).__name__}: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
