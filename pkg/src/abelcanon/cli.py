"""Command-line entry point.

Exit codes: 0 success, 1 domain failure (validation, failed checks),
2 usage error.  ``--json`` prints a deterministic report envelope on stdout;
timings go to stderr so the JSON stays byte-identical across runs.
"""

from __future__ import annotations

import argparse
import sys

from . import checks, formats, reports
from .cover import DivisibilityError, RealizationRequired
from .formats import SpecFormatError
from .geometry import LineArrangement
from .solver import DEFAULT_NODE_CAP, SearchCapExceeded


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {n}")
    return n


def _emit(args, command: list[str], body, text: str, status: str = "ok") -> None:
    if args.json:
        sys.stdout.write(formats.dumps(reports.envelope(command, body, status)))
    else:
        print(text)


def _timing(seconds: float) -> None:
    print(f"elapsed {seconds:.2f}s", file=sys.stderr)


def cmd_groups(args) -> int:
    rep = reports.groups_report(args.order)
    _emit(args, ["groups", str(args.order)], rep, reports.render_groups(rep))
    return 0


def _parse_group_flag(text: str, order: int):
    try:
        G, _ = formats.parse_group([int(s) for s in text.split(",") if s.strip()])
    except (ValueError, SpecFormatError) as exc:
        raise UsageError(f"malformed group {text!r}: {exc}")
    if G.order != order:
        raise UsageError(f"group {G} has order {G.order}, not {order}")
    return G


def cmd_solve(args) -> int:
    groups = [_parse_group_flag(args.group, args.order)] if args.group else None
    body, timing = reports.solve_report(
        args.order,
        groups,
        do_dedup=args.dedup,
        require_generating=args.require_generating,
        jobs=args.jobs,
        node_cap=args.node_cap,
    )
    command = ["solve", str(args.order)] + (["--group", args.group] if args.group else [])
    command += ["--dedup"] * args.dedup + ["--require-generating"] * args.require_generating
    _emit(args, command, body, reports.render_solve(body))
    _timing(timing["total_seconds"])
    return 0


def cmd_sweep(args) -> int:
    if args.d_from > args.d_to:
        raise UsageError(f"empty range: {args.d_from} > {args.d_to}")
    body, timing = reports.sweep_report(args.d_from, args.d_to, jobs=args.jobs, node_cap=args.node_cap)
    _emit(args, ["sweep", str(args.d_from), str(args.d_to)], body, reports.render_sweep(body, timing))
    _timing(sum(timing.values()))
    return 0


def cmd_invariants(args) -> int:
    spec = formats.load_cover_spec(formats.read_json(args.specfile))
    rep = reports.invariants_report(spec)
    _emit(args, ["invariants", args.specfile], rep, reports.render_invariants(rep))
    return 0


def cmd_arrangement(args) -> int:
    data = formats.read_json(args.file)
    if not isinstance(data, dict):
        raise SpecFormatError("arrangement file must be a JSON object")
    try:
        arr, group, alphas, min_mult = _arrangement_input(data)
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"bad arrangement file: missing or malformed {exc}") from exc
    rep = reports.arrangement_report(arr, group, alphas, min_mult)
    _emit(args, ["arrangement", args.file], rep, reports.render_arrangement(rep))
    return 0


def _arrangement_input(data: dict):
    """Accepts a bare arrangement, one with group and alphas, or a cover spec."""
    group = alphas = None
    min_mult = 3
    if "arrangement" in data:
        # a full cover spec: analyse its arrangement with its characters
        arr_data = data["arrangement"]
        group, iso = formats.parse_group(data["group"])
        alphas = [iso(a) for a in arr_data.get("alphas", [])] or None
        min_mult = int(arr_data.get("min_multiplicity", 3))
    else:
        arr_data = data
        if "group" in data and "alphas" in data:
            group, iso = formats.parse_group(data["group"])
            alphas = [iso(a) for a in data["alphas"]]
            min_mult = int(data.get("min_multiplicity", 3))
    arr: LineArrangement = formats.load_arrangement(arr_data)
    if alphas is not None and len(alphas) != len(arr):
        raise SpecFormatError(f"{len(alphas)} characters for {len(arr)} lines")
    return arr, group, alphas, min_mult


def cmd_verify_paper(args) -> int:
    try:
        results = checks.run_checks(args.only, jobs=args.jobs)
    except KeyError as exc:
        raise UsageError(exc.args[0])
    ok = all(r.passed for r in results)
    text = []
    for r in results:
        text.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<12} {r.claim}")
        text.extend(f"        {d}" for d in r.details)
        print(f"{r.name}: {r.seconds:.2f}s", file=sys.stderr)
    text.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    command = ["verify-paper"] + (["--only", *args.only] if args.only else [])
    _emit(args, command, [r.to_json() for r in results], "\n".join(text), "ok" if ok else "failed")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="abelcanon",
        description="Abelian covers of the projective plane whose covering map is the canonical map.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="print a JSON report")
        sp.set_defaults(func=fn)
        return sp

    def parallel(sp):
        sp.add_argument("--jobs", type=_positive, default=1, help="worker processes")
        sp.add_argument("--node-cap", type=_positive, default=DEFAULT_NODE_CAP,
                        help="maximum search nodes per (group, g') cell")

    sp = add("groups", cmd_groups, "list abelian groups of an order")
    sp.add_argument("order", type=_positive)

    sp = add("solve", cmd_solve, "classify covers of one degree")
    sp.add_argument("order", type=_positive)
    sp.add_argument("--group", help="restrict to one group, e.g. 2,2,2,2")
    sp.add_argument("--dedup", action="store_true", help="group solutions into automorphism orbits")
    sp.add_argument("--require-generating", action="store_true",
                    help="drop solutions whose characters do not generate the group")
    parallel(sp)

    sp = add("sweep", cmd_sweep, "classify a range of degrees")
    sp.add_argument("d_from", type=_positive, metavar="FROM")
    sp.add_argument("d_to", type=_positive, metavar="TO")
    parallel(sp)

    sp = add("invariants", cmd_invariants, "invariants of a cover spec file")
    sp.add_argument("specfile")

    sp = add("arrangement", cmd_arrangement, "analyse a line arrangement file")
    sp.add_argument("file")

    sp = add("verify-paper", cmd_verify_paper, "recompute every numeric classification claim")
    sp.add_argument("--only", nargs="+", metavar="NAME", help=f"subset of: {', '.join(checks.CHECKS)}")
    sp.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (SpecFormatError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DivisibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SearchCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (RealizationRequired, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
