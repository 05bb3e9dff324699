"""Command line front end: ``zerolab <command> [--fixture NAME|PATH] ...``.

Exit status: 0 when every check passes (refusals and skips included),
1 when some check fails, 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import fixtures
from .liegroup import StructuralError
from .pipelines import COMMAND_KINDS, FAIL, Options, Report, run_fixture

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zerolab", description="Run zero-scheme, GKM and Kostant section checks on fixtures.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in list(COMMAND_KINDS) + ["all"]:
        sp = sub.add_parser(name, help=f"run {name} fixtures" if name != "all" else "run every bundled fixture")
        if name != "all":
            sp.add_argument("--fixture", required=True, help="bundled fixture name or path to a JSON file")
        sp.add_argument("--degree-bound", type=int, default=None, help="override the fixture degree bound")
        sp.add_argument("--long-running", action="store_true", help="include minutes-scale checks")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="machine-readable output")
        fmt.add_argument("--table", dest="fmt", action="store_const", const="table", help="human-readable output (default)")
        sp.add_argument("--check", default=None, help="run only the named check")
    lp = sub.add_parser("list", help="list bundled fixtures")
    lp.add_argument("--kind", default=None, help="only fixtures of this kind")
    lp.add_argument("--json", dest="fmt", action="store_const", const="json")
    return p


def render_table(report: Report) -> str:
    data = report.to_json()
    lines = [f"== {data['fixture']} ({data['kind']}): {data['status'].upper()}"]
    width = max((len(c["name"]) for c in data["checks"]), default=0)
    for c in data["checks"]:
        line = f"  {c['name']:<{width}}  {c['status']}"
        detail = c.get("detail")
        if c["status"] != "pass" and detail is not None:
            line += f"  {json.dumps(detail, sort_keys=True)}"
        lines.append(line)
    for key, val in data["tables"].items():
        if isinstance(val, list) and val and all(isinstance(v, list) for v in val):
            lines.append(f"  {key}:")
            for row in val:
                lines.append("    " + " ".join(str(x) for x in row))
        else:
            lines.append(f"  {key}: {json.dumps(val, sort_keys=True) if not isinstance(val, str) else val}")
    return "\n".join(lines)


def _emit(reports: List[Report], fmt: str, out) -> None:
    if fmt == "json":
        payload = [r.to_json() for r in reports]
        out.write(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2, sort_keys=False) + "\n")
    else:
        out.write("\n".join(render_table(r) for r in reports) + "\n")


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    fmt = getattr(args, "fmt", None) or "table"

    if args.command == "list":
        cat = fixtures.catalog(args.kind)
        if fmt == "json":
            out.write(json.dumps(cat, indent=2) + "\n")
        else:
            for c in cat:
                flags = "".join([" [negative]" if c["negative"] else "", " [long-running]" if c["long_running"] else ""])
                out.write(f"{c['name']:<22} {c['kind']:<14} {c['description']}{flags}\n")
        return EXIT_OK

    opts = Options(degree_bound=args.degree_bound, long_running=args.long_running, only=args.check)
    try:
        if args.command == "all":
            datas = [fixtures.load(c["name"]) for c in fixtures.catalog() if not c["negative"]]
        else:
            data = fixtures.load(args.fixture)
            if data["kind"] not in COMMAND_KINDS[args.command]:
                sys.stderr.write(
                    f"zerolab: fixture {data['name']!r} has kind {data['kind']!r}; "
                    f"{args.command} expects {', '.join(COMMAND_KINDS[args.command])}\n"
                )
                return EXIT_USAGE
            datas = [data]
        reports = [run_fixture(d, opts) for d in datas]
    except fixtures.FixtureError as exc:
        sys.stderr.write(f"zerolab: {exc}\n")
        return EXIT_USAGE
    except (StructuralError, KeyError, ValueError) as exc:
        sys.stderr.write(f"zerolab: invalid fixture: {exc}\n")
        return EXIT_USAGE
    _emit(reports, fmt, out)
    return EXIT_FAIL if any(r.status == FAIL for r in reports) else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
