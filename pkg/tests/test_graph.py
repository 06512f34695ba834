import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gee import (
    CsrGraph,
    EdgeList,
    FormatError,
    ParseError,
    ValidationError,
    build_csr,
    generate_erdos_renyi,
    load_edge_list,
    read_binary_cache,
    write_binary_cache,
    write_edge_list,
)


def write(tmp_path, name, lines):
    p = tmp_path / name
    p.write_text("\n".join(lines) + ("\n" if lines else ""))
    return p


class TestLoadEdgeList:
    def test_comments_and_unit_weights(self, tmp_path):
        p = write(tmp_path, "g.txt", ["# c", "0 1", "1 2"])
        el = load_edge_list(p, weighted=False)
        assert el.n == 3
        assert el.src.tolist() == [0, 1]
        assert el.dst.tolist() == [1, 2]
        assert el.w.tolist() == [1.0, 1.0]

    def test_weighted(self, tmp_path):
        p = write(tmp_path, "g.txt", ["0 1 2.5"])
        el = load_edge_list(p, weighted=True)
        assert el.n == 2
        assert el.w.tolist() == [2.5]

    def test_malformed_id_names_line(self, tmp_path):
        p = write(tmp_path, "g.txt", ["0 x"])
        with pytest.raises(ParseError, match="line 1"):
            load_edge_list(p)

    def test_negative_id(self, tmp_path):
        p = write(tmp_path, "g.txt", ["0 1", "-1 2"])
        with pytest.raises(ParseError, match="line 2"):
            load_edge_list(p)

    def test_nonfinite_weight(self, tmp_path):
        p = write(tmp_path, "g.txt", ["0 1 inf"])
        with pytest.raises(ParseError, match="finite"):
            load_edge_list(p, weighted=True)

    def test_missing_weight_field(self, tmp_path):
        p = write(tmp_path, "g.txt", ["0 1"])
        with pytest.raises(ParseError, match="weight"):
            load_edge_list(p, weighted=True)

    def test_too_many_fields(self, tmp_path):
        p = write(tmp_path, "g.txt", ["0 1 2 3"])
        with pytest.raises(ParseError, match="fields"):
            load_edge_list(p)

    def test_empty_file(self, tmp_path):
        p = write(tmp_path, "g.txt", [])
        el = load_edge_list(p)
        assert el.n == 0 and el.s == 0

    def test_blank_lines_and_tabs(self, tmp_path):
        p = write(tmp_path, "g.txt", ["", "3\t4", "  "])
        el = load_edge_list(p)
        assert el.n == 5 and el.s == 1

    def test_ids_kept_verbatim(self, tmp_path):
        p = write(tmp_path, "g.txt", ["7 9"])
        el = load_edge_list(p)
        assert el.n == 10  # gap nodes become isolated

    def test_text_round_trip(self, tmp_path, rng):
        for unit in (True, False):
            src = rng.integers(0, 50, size=40, dtype=np.int64)
            dst = rng.integers(0, 50, size=40, dtype=np.int64)
            w = np.ones(40) if unit else 2.0 * (1.0 - rng.random(40))
            el = EdgeList(n=50, src=src, dst=dst, w=w)
            p = tmp_path / f"rt-{unit}.txt"
            write_edge_list(el, p)
            back = load_edge_list(p, weighted=not unit)
            assert back.src.tolist() == el.src.tolist()
            assert back.dst.tolist() == el.dst.tolist()
            assert back.w.tolist() == el.w.tolist()


class TestBuildCsr:
    def test_directed_chain(self):
        el = EdgeList(n=3, src=[0, 1], dst=[1, 2], w=[1.0, 1.0], directed=True)
        g = build_csr(el)
        assert g.offsets.tolist() == [0, 1, 2, 2]
        assert g.targets.tolist() == [1, 2]

    def test_undirected_chain_mirrors(self):
        el = EdgeList(n=3, src=[0, 1], dst=[1, 2], w=[1.0, 1.0], directed=False)
        g = build_csr(el)
        assert g.offsets.tolist() == [0, 1, 3, 4]
        assert g.targets.tolist() == [1, 0, 2, 1]
        assert g.s == 2 * el.s

    def test_empty(self):
        g = build_csr(EdgeList(n=0, src=[], dst=[], w=[], directed=True))
        assert g.offsets.tolist() == [0]
        assert g.targets.tolist() == []

    def test_unit_weight_flag(self):
        el = EdgeList(n=2, src=[0], dst=[1], w=[2.0])
        assert not build_csr(el).unit_weights
        el = EdgeList(n=2, src=[0], dst=[1], w=[1.0])
        assert build_csr(el).unit_weights

    @settings(max_examples=60, deadline=None)
    @given(
        n=st.integers(1, 30),
        directed=st.booleans(),
        edges=st.lists(st.tuples(st.integers(0, 29), st.integers(0, 29), st.floats(0.1, 2.0)), max_size=60),
    )
    def test_arc_multiset_matches_edges(self, n, directed, edges):
        edges = [(u % n, v % n, w) for u, v, w in edges]
        el = EdgeList(
            n=n,
            src=[e[0] for e in edges],
            dst=[e[1] for e in edges],
            w=[e[2] for e in edges],
            directed=directed,
        )
        g = build_csr(el)
        arcs = []
        for u in range(n):
            for e in range(g.offsets[u], g.offsets[u + 1]):
                arcs.append((u, int(g.targets[e]), float(g.weights[e])))
        expected = [(u, v, w) for u, v, w in edges]
        if not directed:
            expected += [(v, u, w) for u, v, w in edges]
        assert sorted(arcs) == sorted(expected)
        assert g.offsets[0] == 0 and g.offsets[-1] == g.s
        assert np.all(np.diff(g.offsets) >= 0)


class TestErdosRenyi:
    def test_zero_edges(self):
        el = generate_erdos_renyi(10, 0, seed=7)
        assert el.s == 0 and el.n == 10

    def test_single_node_self_loops(self):
        el = generate_erdos_renyi(1, 5, seed=1)
        assert el.src.tolist() == [0] * 5
        assert el.dst.tolist() == [0] * 5
        assert el.w.tolist() == [1.0] * 5

    def test_reproducible(self):
        a = generate_erdos_renyi(100, 500, seed=3)
        b = generate_erdos_renyi(100, 500, seed=3)
        assert np.array_equal(a.src, b.src) and np.array_equal(a.dst, b.dst)
        c = generate_erdos_renyi(100, 500, seed=4)
        assert not (np.array_equal(a.src, c.src) and np.array_equal(a.dst, c.dst))

    def test_uniform_endpoint_mean(self):
        # mean of 2s uniform draws from [0, n): within 3 standard errors
        n, s = 1000, 100000
        el = generate_erdos_renyi(n, s, seed=42)
        mean = np.concatenate([el.src, el.dst]).mean()
        se = np.sqrt((n * n - 1) / 12.0 / (2 * s))
        assert abs(mean - (n - 1) / 2.0) < 3 * se

    def test_bad_args(self):
        with pytest.raises(ValidationError):
            generate_erdos_renyi(0, 5, seed=1)
        with pytest.raises(ValidationError):
            generate_erdos_renyi(5, -1, seed=1)


class TestBinaryCache:
    def roundtrip(self, g, tmp_path, name="g.gee"):
        p = tmp_path / name
        write_binary_cache(g, p)
        back = read_binary_cache(p)
        assert back.n == g.n and back.directed == g.directed
        assert np.array_equal(back.offsets, g.offsets)
        assert np.array_equal(back.targets, g.targets)
        assert np.array_equal(back.weights, g.weights)

    def test_round_trip_small(self, tmp_path):
        el = EdgeList(n=3, src=[0, 1], dst=[1, 2], w=[1.0, 0.25], directed=True)
        self.roundtrip(build_csr(el), tmp_path)

    def test_round_trip_empty(self, tmp_path):
        self.roundtrip(build_csr(EdgeList(n=0, src=[], dst=[], w=[])), tmp_path)

    def test_round_trip_random(self, tmp_path, rng):
        for i in range(5):
            n = int(rng.integers(1, 300))
            s = int(rng.integers(0, 2000))
            el = EdgeList(
                n=n,
                src=rng.integers(0, n, s, dtype=np.int64),
                dst=rng.integers(0, n, s, dtype=np.int64),
                w=rng.random(s) + 0.5,
                directed=bool(i % 2),
            )
            self.roundtrip(build_csr(el), tmp_path, f"g{i}.gee")

    def test_wrong_magic(self, tmp_path):
        p = tmp_path / "bad.gee"
        p.write_bytes(b"NOTGEE00" + b"\x00" * 64)
        with pytest.raises(FormatError, match="magic"):
            read_binary_cache(p)

    def test_truncated(self, tmp_path):
        p = tmp_path / "g.gee"
        write_binary_cache(build_csr(EdgeList(n=3, src=[0, 1], dst=[1, 2], w=[1.0, 1.0])), p)
        data = p.read_bytes()
        p.write_bytes(data[:-4])
        with pytest.raises(FormatError, match="bytes"):
            read_binary_cache(p)

    def test_bad_version(self, tmp_path):
        p = tmp_path / "g.gee"
        write_binary_cache(build_csr(EdgeList(n=1, src=[], dst=[], w=[])), p)
        data = bytearray(p.read_bytes())
        data[8] = 99
        p.write_bytes(bytes(data))
        with pytest.raises(FormatError, match="version"):
            read_binary_cache(p)


class TestInvariants:
    def test_endpoint_out_of_range(self):
        with pytest.raises(ValidationError):
            EdgeList(n=2, src=[0], dst=[2], w=[1.0])

    def test_nonfinite_weight(self):
        with pytest.raises(ValidationError):
            EdgeList(n=2, src=[0], dst=[1], w=[np.nan])

    def test_csr_offset_checks(self):
        with pytest.raises(ValidationError):
            CsrGraph(n=2, offsets=[0, 2, 1], targets=[0, 1, 0], weights=[1.0, 1.0, 1.0])
