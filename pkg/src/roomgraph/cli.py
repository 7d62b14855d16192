"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or bound error,
3 legitimately unreachable / not factorable.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import Unreachable, bfs_distance, build_graph, export_dot, export_jsonl, verify_theorems
from .core import DEFAULT_MAX_VERTICES, Instance, format_config, parse_config, validate_path
from .errors import NotFactorableError, RoomGraphError
from .oracle import parse_grid, run_oracle
from .perm import Permutation, factor_into_derangements
from .planner import plan_path
from .walk import WalkConfig, run_walk

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNREACHABLE = 0, 1, 2, 3


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _instance(args) -> Instance:
    return Instance(args.people, args.rooms)


def _write_exports(g, dot: str | None, jsonl: str | None) -> None:
    if dot:
        with open(dot, "w") as fh:
            fh.write(export_dot(g))
    if jsonl:
        with open(jsonl, "w") as fh:
            fh.writelines(export_jsonl(g))


def cmd_analyze(args) -> int:
    inst = _instance(args)
    g = build_graph(inst, args.max_vertices)
    report = verify_theorems(inst, g)
    sys.stdout.write(report.to_json())
    _write_exports(g, args.dot, args.jsonl)
    return EXIT_OK if report.all_pass else EXIT_FAIL


def cmd_export(args) -> int:
    if not (args.dot or args.jsonl):
        raise RoomGraphError("export needs --dot and/or --jsonl")
    g = build_graph(_instance(args), args.max_vertices)
    _write_exports(g, args.dot, args.jsonl)
    return EXIT_OK


def cmd_path(args) -> int:
    inst = _instance(args)
    f = parse_config(args.src, inst.rooms, inst.people)
    g = parse_config(args.dst, inst.rooms, inst.people)
    out = plan_path(f, g, inst.rooms)
    result = {
        "reachable": out.reachable,
        "length": out.length,
        "path": [format_config(c) for c in out.path] if out.reachable else [],
    }
    code = EXIT_OK if out.reachable else EXIT_UNREACHABLE
    if not out.reachable:
        result["reason"] = out.reason.value
    elif not (validate_path(out.path) and out.path[0] == f and out.path[-1] == g):
        result["valid"] = False
        code = EXIT_FAIL
    if args.compare_bfs:
        try:
            result["bfs_distance"] = bfs_distance(inst, f, g, max_vertices=args.max_vertices)
        except Unreachable:
            result["bfs_distance"] = None
        result["agree"] = (result["bfs_distance"] is not None) == out.reachable
        if not result["agree"]:
            code = EXIT_FAIL
    _emit(result)
    return code


def cmd_walk(args) -> int:
    inst = _instance(args)
    start = parse_config(args.start, inst.rooms, inst.people) if args.start else (1,) * inst.people
    cfg = WalkConfig(inst, start, args.steps, args.walkers, args.seed, args.mode, args.max_vertices)
    stats = run_walk(cfg, args.jobs)
    sys.stdout.write(stats.to_json())
    return EXIT_OK


def cmd_derange(args) -> int:
    p = Permutation.parse(args.perm)
    try:
        fac = factor_into_derangements(p)
    except NotFactorableError as e:
        _emit({"perm": p.format(), "error": "NotFactorable", "detail": str(e)})
        return EXIT_UNREACHABLE
    ok = fac.verify()
    _emit({
        "perm": p.format(),
        "factors": [f.format() for f in fac.factors],
        "count": len(fac),
        "order": "product is factors[0] o factors[1] o ...; the last factor acts first",
        "verified": ok,
    })
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    report = run_oracle(parse_grid(args.grid), args.pairs, args.seed, args.max_vertices)
    _emit(report.to_dict())
    return EXIT_OK if report.ok else EXIT_FAIL


def _add_instance(p: argparse.ArgumentParser) -> None:
    p.add_argument("--people", "-n", type=int, required=True)
    p.add_argument("--rooms", "-m", type=int, required=True)


def _add_bound(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES,
                   help="largest M**N allowed for enumeration (default 2**22)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="roomgraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="enumerate G(N,M) and check the connectivity structure")
    _add_instance(p)
    _add_bound(p)
    p.add_argument("--dot")
    p.add_argument("--jsonl")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("export", help="write DOT and/or JSONL dumps of G(N,M)")
    _add_instance(p)
    _add_bound(p)
    p.add_argument("--dot")
    p.add_argument("--jsonl")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("path", help="construct a path between two configurations")
    _add_instance(p)
    _add_bound(p)
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--compare-bfs", action="store_true")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("walk", help="seeded random walk statistics")
    _add_instance(p)
    _add_bound(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--walkers", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--start", help="start configuration (default: everyone in room 1)")
    p.add_argument("--mode", choices=["per-state", "occupancy"], default="per-state")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("derange", help="factor a permutation into derangements")
    p.add_argument("--perm", required=True, help="image list, e.g. 2,1,4,3")
    p.set_defaults(func=cmd_derange)

    p = sub.add_parser("oracle", help="planner vs BFS conformance over a grid")
    p.add_argument("--grid", required=True, help='e.g. "1..6x2..4"')
    p.add_argument("--pairs", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _add_bound(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RoomGraphError, ValueError) as e:
        sys.stderr.write(f"roomgraph {args.command}: error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
