import os

import numpy as np
import pytest

from gee import (
    BenchResult,
    LabelVector,
    ValidationError,
    build_csr,
    emit_report,
    generate_erdos_renyi,
    linear_fit,
    random_labels,
    run_edge_sweep,
    run_strong_scaling,
    speedups,
)


def tiny_graph():
    el = generate_erdos_renyi(300, 3000, seed=5)
    return build_csr(el), random_labels(300, 5, 0.2, seed=6)


class TestBenchResult:
    def test_requires_three_reps(self):
        with pytest.raises(ValidationError):
            BenchResult(name="g", n=1, s=1, k=1, workers=1, atomics=True, times=[0.1, 0.2])

    def test_rejects_nonpositive_times(self):
        with pytest.raises(ValidationError):
            BenchResult(name="g", n=1, s=1, k=1, workers=1, atomics=True, times=[0.1, 0.0, 0.2])

    def test_median(self):
        r = BenchResult(name="g", n=1, s=1, k=1, workers=1, atomics=True, times=[0.3, 0.1, 0.2])
        assert r.median_s == 0.2
        assert r.reps == 3


class TestStrongScaling:
    def test_single_worker_speedup_is_one(self):
        g, y = tiny_graph()
        results = run_strong_scaling(g, y, [1], reps=3)
        assert speedups(results) == {1: 1.0}

    def test_rejects_two_reps(self):
        g, y = tiny_graph()
        with pytest.raises(ValidationError):
            run_strong_scaling(g, y, [1], reps=2)

    def test_results_fields(self):
        g, y = tiny_graph()
        results = run_strong_scaling(g, y, [1, 2], reps=3, name="tiny")
        assert [r.workers for r in results] == [1, 2]
        assert all(r.reps == 3 and r.name == "tiny" and r.s == g.s for r in results)

    def test_speedups_need_one_worker_base(self):
        g, y = tiny_graph()
        results = run_strong_scaling(g, y, [2], reps=3)
        with pytest.raises(ValidationError):
            speedups(results)


class TestEdgeSweep:
    def test_single_point(self):
        results = run_edge_sweep([4000], n_per_s=0.05, k=5, workers=2, seed=3, reps=3)
        assert len(results) == 1
        assert results[0].s == 4000

    def test_empty_sizes(self):
        with pytest.raises(ValidationError):
            run_edge_sweep([], n_per_s=0.05, k=5, workers=1, seed=3)

    def test_nonincreasing_sizes(self):
        with pytest.raises(ValidationError):
            run_edge_sweep([2000, 1000], n_per_s=0.05, k=5, workers=1, seed=3)


class TestLinearFit:
    def test_perfect_line(self):
        slope, icept, r2 = linear_fit([1, 2, 3, 4], [2.5, 4.5, 6.5, 8.5])
        assert abs(slope - 2.0) < 1e-12
        assert abs(icept - 0.5) < 1e-12
        assert r2 == pytest.approx(1.0)


class TestEmitReport:
    def make_results(self):
        return [
            BenchResult(name="g", n=10, s=100, k=5, workers=w, atomics=True,
                        times=[0.3 / w, 0.2 / w, 0.25 / w])
            for w in (1, 2, 4)
        ]

    def test_csv_schema(self, tmp_path):
        emit_report(self.make_results(), tmp_path)
        lines = (tmp_path / "results.csv").read_text().splitlines()
        assert lines[0] == "name,n,s,k,workers,atomics,median_s,reps"
        assert len(lines) == 4
        assert lines[1].startswith("g,10,100,5,1,true,")

    def test_empty_results(self, tmp_path):
        emit_report([], tmp_path)
        lines = (tmp_path / "results.csv").read_text().splitlines()
        assert lines == ["name,n,s,k,workers,atomics,median_s,reps"]
        assert not os.path.exists(tmp_path / "speedup_vs_workers.png")
        assert not os.path.exists(tmp_path / "time_vs_edges.png")

    def test_scaling_plot_written(self, tmp_path):
        emit_report(self.make_results(), tmp_path)
        plot = tmp_path / "speedup_vs_workers.png"
        assert plot.exists() and plot.stat().st_size > 0

    def test_sweep_plot_written(self, tmp_path):
        results = [
            BenchResult(name=f"er-{s}", n=s // 20, s=s, k=5, workers=2, atomics=True,
                        times=[s * 1e-6, s * 1.1e-6, s * 0.9e-6])
            for s in (1000, 2000, 4000)
        ]
        emit_report(results, tmp_path)
        plot = tmp_path / "time_vs_edges.png"
        assert plot.exists() and plot.stat().st_size > 0
