"""Command-line front end: embed, gen-er, gen-labels, bench-scaling, bench-sweep.

Exit codes: 0 success, 1 usage error, 2 data or IO error.
"""

import argparse
import logging
import os
import sys
import time

import numpy as np

from . import bench
from .encoder import build_projection, embed_parallel, embed_serial, write_embedding
from .errors import GeeError, ValidationError
from .graph import (
    CACHE_MAGIC,
    build_csr,
    generate_erdos_renyi,
    load_edge_list,
    read_binary_cache,
    write_edge_list,
)
from .labeling import load_labels, random_labels, write_labels


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the contract is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser():
    parser = _Parser(prog="gee", description="One-hot graph encoder embedding")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("embed", parents=[], help="embed a graph", add_help=True)
    p.add_argument("--graph", required=True, help="edge-list text file or binary cache")
    p.add_argument("--labels", required=True, help="label file (auto-detected format)")
    p.add_argument("--k", required=True, type=int, help="number of classes")
    p.add_argument("--directed", action="store_true", help="treat the edge list as directed")
    p.add_argument("--weighted", action="store_true", help="read the third column as weights")
    p.add_argument("--serial", action="store_true", help="use the serial reference pass")
    p.add_argument("--workers", type=int, default=None, help="worker threads (default: all cores)")
    p.add_argument("--no-atomics", dest="atomics", action="store_false",
                   help="unsafe updates, measurement only")
    p.add_argument("--out", required=True, help="output embedding path")
    p.add_argument("--format", choices=("csv", "binary"), default="csv")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("gen-er", help="generate a uniform random graph")
    p.add_argument("--nodes", required=True, type=int)
    p.add_argument("--edges", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_er)

    p = sub.add_parser("gen-labels", help="generate random semi-supervised labels")
    p.add_argument("--nodes", required=True, type=int)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--fraction", required=True, type=float)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_labels)

    p = sub.add_parser("bench-scaling", help="strong-scaling benchmark")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--graph", help="edge-list text file or binary cache")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--nodes", type=int, default=1_000_000, help="ER nodes when generating")
    p.add_argument("--edges", type=int, default=30_000_000, help="ER edges when generating")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--k", type=int, default=50)
    p.add_argument("--fraction", type=float, default=0.1)
    p.add_argument("--workers", default="1,2,4", help="comma-separated worker counts")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--no-atomics", dest="atomics", action="store_false")
    p.add_argument("--out", required=True, help="report directory")
    p.set_defaults(func=_cmd_bench_scaling)

    p = sub.add_parser("bench-sweep", help="runtime vs edge count on ER graphs")
    p.add_argument("--sizes", default="1000000,2000000,4000000,8000000",
                   help="comma-separated edge counts, increasing")
    p.add_argument("--n-per-s", type=float, default=0.05, help="nodes per edge (n = s * ratio)")
    p.add_argument("--k", type=int, default=50)
    p.add_argument("--fraction", type=float, default=0.1)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--out", required=True, help="report directory")
    p.set_defaults(func=_cmd_bench_sweep)

    return parser


def _load_graph_arg(path, weighted, directed):
    """Load --graph as a binary cache (sniffed by magic) or a text edge list."""
    with open(path, "rb") as fh:
        head = fh.read(len(CACHE_MAGIC))
    if head == CACHE_MAGIC:
        return None, read_binary_cache(path)
    el = load_edge_list(path, weighted=weighted, directed=directed)
    return el, None


def _cmd_embed(args):
    el, g = _load_graph_arg(args.graph, args.weighted, args.directed)
    y = load_labels(args.labels, el.n if el is not None else g.n, args.k)
    if args.serial:
        if el is None:
            raise ValidationError("--serial needs a text edge list, not a binary cache")
        workers = 1
        t0 = time.perf_counter()
        z = embed_serial(el, y)
        elapsed = time.perf_counter() - t0
        s = el.s
    else:
        if g is None:
            g = build_csr(el)
        workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
        proj = build_projection(y)
        t0 = time.perf_counter()
        z = embed_parallel(g, y, workers=workers, atomics=args.atomics, projection=proj)
        elapsed = time.perf_counter() - t0
        s = el.s if el is not None else g.s
    write_embedding(z, args.out, fmt=args.format)
    print(f"n={z.shape[0]} s={s} k={args.k} workers={workers} time_s={elapsed:.6f}")
    return 0


def _cmd_gen_er(args):
    el = generate_erdos_renyi(args.nodes, args.edges, args.seed)
    write_edge_list(el, args.out)
    print(f"n={el.n} s={el.s} -> {args.out}")
    return 0


def _cmd_gen_labels(args):
    y = random_labels(args.nodes, args.k, args.fraction, args.seed)
    write_labels(y, args.out)
    labeled = int(np.count_nonzero(y.labels))
    print(f"n={y.n} k={y.k} labeled={labeled} -> {args.out}")
    return 0


def _parse_int_list(text, flag):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"{flag} must be a comma-separated list of integers") from None
    if not values:
        raise ValidationError(f"{flag} must be nonempty")
    return values


def _cmd_bench_scaling(args):
    if args.graph:
        el, g = _load_graph_arg(args.graph, args.weighted, args.directed)
        if g is None:
            g = build_csr(el)
        name = args.graph
    else:
        el = generate_erdos_renyi(args.nodes, args.edges, args.seed)
        g = build_csr(el)
        name = f"er-{args.edges}"
    y = random_labels(g.n, args.k, args.fraction, args.seed + 1)
    worker_counts = _parse_int_list(args.workers, "--workers")
    results = bench.run_strong_scaling(
        g, y, worker_counts, reps=args.reps, atomics=args.atomics, name=name
    )
    bench.emit_report(results, args.out)
    for r in results:
        print(f"workers={r.workers} median_s={r.median_s:.4f}")
    if any(r.workers == 1 for r in results):
        for w, sp in sorted(bench.speedups(results).items()):
            print(f"speedup({w})={sp:.2f}")
    print(f"report -> {args.out}")
    return 0


def _cmd_bench_sweep(args):
    sizes = _parse_int_list(args.sizes, "--sizes")
    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    results = bench.run_edge_sweep(
        sizes, args.n_per_s, args.k, workers, args.seed, reps=args.reps, fraction=args.fraction
    )
    bench.emit_report(results, args.out)
    for r in results:
        print(f"s={r.s} median_s={r.median_s:.4f}")
    slope, icept, r2 = bench.linear_fit([r.s for r in results], [r.median_s for r in results])
    print(f"linear fit: slope={slope:.3e} s/arc intercept={icept:.4f}s r2={r2:.4f}")
    print(f"report -> {args.out}")
    return 0


def run_cli(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (GeeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
