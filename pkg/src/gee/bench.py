"""Benchmark harness: strong scaling, edge sweeps, CSV and plot output.

Timers wrap only the embed call.  Graph generation, CSR construction and
projection build happen outside the timed region, and every configuration
gets one untimed warm-up run so compiled kernels, caches and output pages
are hot before the first timed repetition.
"""

import csv
import logging
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .encoder import build_projection, embed_parallel
from .errors import ValidationError
from .graph import build_csr, generate_erdos_renyi
from .labeling import random_labels

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["name", "n", "s", "k", "workers", "atomics", "median_s", "reps"]


@dataclass
class BenchResult:
    """Timing record for one (graph, workers, atomics) configuration."""

    name: str
    n: int
    s: int
    k: int
    workers: int
    atomics: bool
    times: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.times) < 3:
            raise ValidationError("a reported number needs at least 3 repetitions")
        if any(t <= 0 for t in self.times):
            raise ValidationError("per-rep times must be positive")

    @property
    def reps(self) -> int:
        return len(self.times)

    @property
    def median_s(self) -> float:
        return float(np.median(self.times))


def _timed_rounds(runs, reps):
    """Time each configured run ``reps`` times, interleaved round-robin.

    Interleaving spreads slow drifts of the host (frequency, noisy
    neighbours) evenly over all configurations instead of biasing whichever
    one ran last; runs never overlap.
    """
    for run in runs:
        run()  # warm-up: compile, fault pages, heat caches
    times = [[] for _ in runs]
    for _ in range(reps):
        for i, run in enumerate(runs):
            t0 = time.perf_counter()
            run()
            times[i].append(time.perf_counter() - t0)
    return times


def run_strong_scaling(g, y, worker_counts, reps=5, atomics=True, name="graph"):
    """Time the parallel pass at each worker count on a fixed graph.

    Returns one BenchResult per worker count; speedup(w) is
    median(1 worker) / median(w workers), see ``speedups``.
    """
    if reps < 3:
        raise ValidationError("reps must be at least 3")
    t0 = time.perf_counter()
    proj = build_projection(y)
    logger.info("projection build: %.4fs (not part of timed region)", time.perf_counter() - t0)
    out = np.zeros((g.n, y.k))
    runs = [
        (lambda w=w: embed_parallel(g, y, workers=w, atomics=atomics, projection=proj, out=out))
        for w in worker_counts
    ]
    times = _timed_rounds(runs, reps)
    results = []
    for w, t in zip(worker_counts, times):
        results.append(
            BenchResult(name=name, n=g.n, s=g.s, k=y.k, workers=w, atomics=atomics, times=t)
        )
        logger.info("%s workers=%d median=%.4fs", name, w, results[-1].median_s)
    return results


def speedups(results):
    """Map workers -> speedup relative to the 1-worker median."""
    base = [r for r in results if r.workers == 1]
    if not base:
        raise ValidationError("speedups need a 1-worker measurement")
    t1 = base[0].median_s
    return {r.workers: t1 / r.median_s for r in results}


def run_edge_sweep(sizes, n_per_s, k, workers, seed, reps=5, fraction=0.1):
    """Time the parallel pass on ER graphs of growing edge count.

    Each size s gets a fresh G(n, s) with n = round(s * n_per_s) and random
    labels on ``fraction`` of the nodes.  The results support a linear
    time-vs-s fit (``linear_fit``).
    """
    if len(sizes) == 0:
        raise ValidationError("sizes must be nonempty")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValidationError("sizes must be increasing")
    if reps < 3:
        raise ValidationError("reps must be at least 3")
    runs = []
    meta = []
    for i, s in enumerate(sizes):
        n = max(1, int(round(s * n_per_s)))
        el = generate_erdos_renyi(n, s, seed + i)
        g = build_csr(el)
        y = random_labels(n, k, fraction, seed + 1000 + i)
        proj = build_projection(y)
        out = np.zeros((n, k))
        runs.append(
            lambda g=g, y=y, proj=proj, out=out: embed_parallel(
                g, y, workers=workers, projection=proj, out=out
            )
        )
        meta.append((n, g.s))
    times = _timed_rounds(runs, reps)
    results = []
    for s, (n, arcs), t in zip(sizes, meta, times):
        results.append(
            BenchResult(name=f"er-{s}", n=n, s=arcs, k=k, workers=workers, atomics=True, times=t)
        )
        logger.info("er s=%d median=%.4fs", s, results[-1].median_s)
    return results


def linear_fit(sizes, times):
    """Least-squares line through (sizes, times); returns (slope, icept, r2)."""
    x = np.asarray(sizes, dtype=np.float64)
    t = np.asarray(times, dtype=np.float64)
    slope, icept = np.polyfit(x, t, 1)
    pred = slope * x + icept
    ss_res = float(np.sum((t - pred) ** 2))
    ss_tot = float(np.sum((t - t.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(slope), float(icept), r2


def emit_report(results, out_dir):
    """Write results.csv plus speedup and time-vs-edges plots into out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "results.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in results:
            writer.writerow(
                [r.name, r.n, r.s, r.k, r.workers, str(r.atomics).lower(), f"{r.median_s:.9g}", r.reps]
            )
    if not results:
        return

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    by_name = {}
    for r in results:
        by_name.setdefault(r.name, []).append(r)

    scaling = {name: rs for name, rs in by_name.items()
               if len({r.workers for r in rs}) > 1 and any(r.workers == 1 for r in rs)}
    if scaling:
        fig, ax = plt.subplots(figsize=(6, 4))
        for name, rs in scaling.items():
            sp = speedups(rs)
            ws = sorted(sp)
            ax.plot(ws, [sp[w] for w in ws], marker="o", label=name)
        ax.set_xlabel("workers")
        ax.set_ylabel("speedup vs 1 worker")
        ax.legend()
        fig.tight_layout()
        fig.savefig(os.path.join(out_dir, "speedup_vs_workers.png"))
        plt.close(fig)

    by_cfg = {}
    for r in results:
        by_cfg.setdefault((r.workers, r.atomics), []).append(r)
    sweeps = {cfg: rs for cfg, rs in by_cfg.items() if len({r.s for r in rs}) > 1}
    if sweeps:
        fig, ax = plt.subplots(figsize=(6, 4))
        for (w, _), rs in sweeps.items():
            rs = sorted(rs, key=lambda r: r.s)
            ax.plot([r.s for r in rs], [r.median_s for r in rs], marker="o", label=f"{w} workers")
        ax.set_xlabel("arcs")
        ax.set_ylabel("median time (s)")
        ax.legend()
        fig.tight_layout()
        fig.savefig(os.path.join(out_dir, "time_vs_edges.png"))
        plt.close(fig)
