"""Command-line entry point.

Exit status: 0 on success, 1 on invalid input, 2 on an oracle mismatch.
"""

from __future__ import annotations

import argparse
import gc
import json
import os
import random
import sys
import time
from typing import Optional, Sequence

from .plane_graph import GraphError, PlaneGraph, parse_plane_graph
from .spirality_intervals import fmt

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2


class InputError(Exception):
    """Bad command-line input (file, flag or graph)."""


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load(args) -> PlaneGraph:
    g = parse_plane_graph(_read(args.input))
    if args.ref is not None:
        g = g.with_reference(g.edge_index(_edge_id(g, args.ref)))
    return g


def _edge_id(g: PlaneGraph, raw: str):
    """Edge names may be ints or strings in the JSON; accept either spelling."""
    for name in g.edge_names:
        if str(name) == raw:
            return name
    raise InputError(f"unknown reference edge {raw!r}")


def _rng(seed: Optional[int]) -> Optional[random.Random]:
    return None if seed is None else random.Random(seed)


def _seed_line(seed: Optional[int]) -> str:
    return f"seed: {'none' if seed is None else seed}"


def _write(out: Optional[str], data: bytes) -> None:
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    try:
        with open(out, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc.strerror}") from exc


# ------------------------------------------------------------ subcommands
def cmd_check(args) -> int:
    from .spirality_intervals import rectilinear_test

    ok, _ = rectilinear_test(_load(args))
    print(f"rectilinear: {'true' if ok else 'false'}")
    return EXIT_OK


def cmd_budget(args) -> int:
    from .pipeline import budget
    from .spq_tree import Q, ROOT

    p, ann = budget(_load(args))
    t = p.tree
    print(f"total bends: {ann.total}")
    if p.dummy:
        print("dummy edge: yes")
    print(f"{'node':>5}  {'tree':<16} {'poles':<12} {'type':<9} {'interval':<12} {'b':>3} {'B':>4}")
    stack = [(t.root, 0)]
    nm = t.g.vertex_names
    while stack:
        x, depth = stack.pop()
        kind = t.describe(x).split("(")[0]
        poles = f"{nm[t.u[x]]},{nm[t.v[x]]}"
        ptype = t.ptype[x].name if t.ptype[x] is not None else ("len=%d" % len(t.chain_edges[x])
                                                               if t.kind[x] == Q else "")
        iv = "" if t.kind[x] == ROOT else f"[{fmt(ann.lo[x])},{fmt(ann.hi[x])}]"
        print(f"{x:>5}  {'  ' * depth + kind:<16} {poles:<12} {ptype:<9} {iv:<12} {ann.b[x]:>3} {ann.B[x]:>4}")
        for c in reversed(t.children[x]):
            stack.append((c, depth + 1))
    return EXIT_OK


def cmd_minimize(args) -> int:
    from .pipeline import minimize

    res = minimize(_load(args), rng=_rng(args.seed))
    print(f"bends: {res.bends}")
    print(_seed_line(args.seed))
    sys.stdout.flush()
    _write(args.out, (json.dumps(res.rep.to_dict(), sort_keys=True, indent=1) + "\n").encode())
    return EXIT_OK


def cmd_draw(args) -> int:
    from .compaction_render import compact, emit_svg
    from .pipeline import minimize

    res = minimize(_load(args), rng=_rng(args.seed))
    d = compact(res.rep)
    if args.format == "json":
        data = (json.dumps(d.to_dict(), sort_keys=True) + "\n").encode()
    else:
        data = emit_svg(d)
    _write(args.out, data)
    if args.out not in (None, "-"):
        print(f"bends: {res.bends}")
        print(_seed_line(args.seed))
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .flow_oracle import flow_min_bends, random_instance
    from .pipeline import budget

    rng = random.Random(args.seed)
    for i in range(args.count):
        g = random_instance(0, args.max_n, rng=rng)
        want = flow_min_bends(g)
        got = budget(g)[1].total
        if got != want:
            print(f"mismatch at instance {i}: tree {got}, flow {want}", file=sys.stderr)
            print(g.to_json())
            return EXIT_MISMATCH
    print(f"instances: {args.count}, mismatches: 0")
    print(_seed_line(args.seed))
    return EXIT_OK


def cmd_bench(args) -> int:
    from .flow_oracle import GeneratorSpec, generate_sp
    from .pipeline import minimize

    try:
        sizes = [int(float(s)) for s in args.sizes.split(",") if s.strip()]
    except ValueError as exc:
        raise InputError(f"bad --sizes value: {args.sizes}") from exc
    if not sizes or min(sizes) < 2:
        raise InputError("--sizes needs values of at least 2")
    print(_seed_line(args.seed))
    print(f"{'n':>9} {'m':>9} {'bends':>8} {'seconds':>9} {'ratio':>7}")
    prev = None
    for n in sizes:
        g = generate_sp(GeneratorSpec(n=n, seed=args.seed))
        best = float("inf")
        for _ in range(args.repeat):
            gc.collect()
            gc.disable()
            try:
                t0 = time.perf_counter()
                res = minimize(g)
                best = min(best, time.perf_counter() - t0)
            finally:
                gc.enable()
        ratio = f"{best / prev:7.2f}" if prev else f"{'-':>7}"
        print(f"{g.n:>9} {g.m:>9} {res.bends:>8} {best:>9.3f} {ratio}", flush=True)
        prev = best
    return EXIT_OK


def cmd_gen(args) -> int:
    from .flow_oracle import GeneratorSpec, generate_sp

    spec = GeneratorSpec(n=args.n, seed=args.seed, p_parallel=args.p_parallel,
                         drop_reference=args.drop_reference)
    try:
        g = generate_sp(spec)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _write(args.out, (g.to_json() + "\n").encode())
    return EXIT_OK


# ------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orthobend",
                                 description="Bend-minimum orthogonal drawings of plane series-parallel 4-graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def graph_cmd(name: str, help_: str, seeded: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("input", help="graph JSON file, or - for stdin")
        p.add_argument("--ref", help="reference edge id (must lie on the external face)")
        if seeded:
            p.add_argument("--seed", type=int, help="randomize arbitrary choices with this seed")
        return p

    graph_cmd("check", "test for a drawing without bends").set_defaults(func=cmd_check)
    graph_cmd("budget", "print the per-node budget table").set_defaults(func=cmd_budget)
    p = graph_cmd("minimize", "compute a bend-minimum representation", seeded=True)
    p.add_argument("--out", help="write the representation here instead of stdout")
    p.set_defaults(func=cmd_minimize)
    p = graph_cmd("draw", "compute a bend-minimum grid drawing", seeded=True)
    p.add_argument("--format", choices=("svg", "json"), default="svg")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_draw)

    p = sub.add_parser("oracle", help="compare against min-cost flow on random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-n", type=int, default=30)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="time the pipeline on generated instances")
    p.add_argument("--sizes", default="1e3,1e4,1e5")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="print a random series-parallel graph")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p-parallel", type=float, default=0.5)
    p.add_argument("--drop-reference", action="store_true",
                   help="remove one external edge (usually breaks biconnectivity)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    for flag in ("count", "max_n", "repeat"):
        if getattr(args, flag, 1) < 1:
            print(f"error: --{flag.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        # Reader went away (e.g. piped into head); silence the flush at exit.
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
