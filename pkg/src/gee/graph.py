"""Graph containers, text ingestion, binary caching, and synthetic generation."""

import struct
from dataclasses import dataclass, field

import numpy as np

from ._kernels import csr_fill
from .errors import FormatError, ParseError, ValidationError

CACHE_MAGIC = b"GEECSR1\x00"
CACHE_VERSION = 1

# CSR targets are int32; plenty for desk-scale and SNAP-scale graphs.
_MAX_CSR_NODES = np.iinfo(np.int32).max


@dataclass(eq=False)
class EdgeList:
    """Flat edge list: s triples (src, dst, weight) over nodes 0..n-1.

    Unweighted inputs carry unit weights.  ``directed=False`` means each
    listed edge stands for both directions; the list itself stores each
    edge once.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    w: np.ndarray
    directed: bool = True

    def __post_init__(self):
        self.src = np.ascontiguousarray(self.src, dtype=np.int64)
        self.dst = np.ascontiguousarray(self.dst, dtype=np.int64)
        self.w = np.ascontiguousarray(self.w, dtype=np.float64)
        if not (self.src.shape == self.dst.shape == self.w.shape):
            raise ValidationError("src, dst and w must have equal length")
        if self.n < 0:
            raise ValidationError("node count must be nonnegative")
        if self.s:
            lo = min(self.src.min(), self.dst.min())
            hi = max(self.src.max(), self.dst.max())
            if lo < 0 or hi >= self.n:
                raise ValidationError(f"edge endpoint out of range [0, {self.n})")
            if not np.isfinite(self.w).all():
                raise ValidationError("edge weights must be finite")

    @property
    def s(self) -> int:
        return self.src.shape[0]


@dataclass(eq=False)
class CsrGraph:
    """Compressed sparse row adjacency with per-arc weights.

    An undirected edge list is stored symmetrically: both (u, v) and (v, u)
    appear as arcs with equal weight.
    """

    n: int
    offsets: np.ndarray
    targets: np.ndarray
    weights: np.ndarray
    directed: bool = True
    unit_weights: bool = field(init=False)

    def __post_init__(self):
        self.offsets = np.ascontiguousarray(self.offsets, dtype=np.int64)
        self.targets = np.ascontiguousarray(self.targets, dtype=np.int32)
        self.weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if self.offsets.shape[0] != self.n + 1:
            raise ValidationError("offsets must have length n + 1")
        if self.offsets[0] != 0 or self.offsets[-1] != self.s:
            raise ValidationError("offsets must start at 0 and end at the arc count")
        if np.any(np.diff(self.offsets) < 0):
            raise ValidationError("offsets must be nondecreasing")
        if self.targets.shape != self.weights.shape:
            raise ValidationError("targets and weights must have equal length")
        if self.s:
            if self.targets.min() < 0 or self.targets.max() >= self.n:
                raise ValidationError(f"arc target out of range [0, {self.n})")
            if not np.isfinite(self.weights).all():
                raise ValidationError("arc weights must be finite")
        self.unit_weights = bool(np.all(self.weights == 1.0))

    @property
    def s(self) -> int:
        """Number of stored arcs (2x the edge count for undirected input)."""
        return self.targets.shape[0]


def load_edge_list(path, weighted=False, directed=True) -> EdgeList:
    """Parse a whitespace-separated text edge list.

    Each line is ``u v`` or ``u v w``; lines starting with '#' are comments
    and blank lines are skipped.  Node ids are kept verbatim and
    ``n = 1 + max id``; an empty file yields the empty graph.

    Raises ParseError naming the line number on malformed input.
    """
    src, dst, wgt = [], [], []
    max_id = -1
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.startswith("#"):
                continue
            fields = line.split()
            if not fields:
                continue
            if len(fields) not in (2, 3):
                raise ParseError(f"{path}: line {lineno}: expected 2 or 3 fields, got {len(fields)}")
            try:
                u = int(fields[0])
                v = int(fields[1])
            except ValueError:
                raise ParseError(f"{path}: line {lineno}: node ids must be integers") from None
            if u < 0 or v < 0:
                raise ParseError(f"{path}: line {lineno}: negative node id")
            if weighted:
                if len(fields) < 3:
                    raise ParseError(f"{path}: line {lineno}: missing weight field")
                try:
                    w = float(fields[2])
                except ValueError:
                    raise ParseError(f"{path}: line {lineno}: weight is not a number") from None
                if not np.isfinite(w):
                    raise ParseError(f"{path}: line {lineno}: weight is not finite")
            else:
                w = 1.0
            src.append(u)
            dst.append(v)
            wgt.append(w)
            if u > max_id:
                max_id = u
            if v > max_id:
                max_id = v
    return EdgeList(
        n=max_id + 1,
        src=np.array(src, dtype=np.int64),
        dst=np.array(dst, dtype=np.int64),
        w=np.array(wgt, dtype=np.float64),
        directed=directed,
    )


def write_edge_list(el: EdgeList, path) -> None:
    """Write the text edge-list format; weights are omitted when all are 1."""
    with open(path, "w", encoding="utf-8") as fh:
        if bool(np.all(el.w == 1.0)):
            for u, v in zip(el.src.tolist(), el.dst.tolist()):
                fh.write(f"{u} {v}\n")
        else:
            for u, v, w in zip(el.src.tolist(), el.dst.tolist(), el.w.tolist()):
                fh.write(f"{u} {v} {w!r}\n")


def build_csr(el: EdgeList) -> CsrGraph:
    """Counting-sort an edge list into CSR form.

    Directed input maps each edge to one arc; undirected input inserts the
    mirror arc immediately after the original, so a node's arc range keeps
    the input edge order.
    """
    if el.n > _MAX_CSR_NODES:
        raise ValidationError(f"node count {el.n} exceeds CSR limit {_MAX_CSR_NODES}")
    if el.directed:
        src, dst, w = el.src, el.dst, el.w
    else:
        src = np.empty(2 * el.s, dtype=np.int64)
        dst = np.empty(2 * el.s, dtype=np.int64)
        w = np.empty(2 * el.s, dtype=np.float64)
        src[0::2], src[1::2] = el.src, el.dst
        dst[0::2], dst[1::2] = el.dst, el.src
        w[0::2] = w[1::2] = el.w
    counts = np.bincount(src, minlength=el.n) if src.size else np.zeros(el.n, dtype=np.int64)
    offsets = np.zeros(el.n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    targets = np.empty(src.shape[0], dtype=np.int32)
    weights = np.empty(src.shape[0], dtype=np.float64)
    if src.size:
        csr_fill(src, dst, w, offsets, targets, weights)
    return CsrGraph(n=el.n, offsets=offsets, targets=targets, weights=weights, directed=el.directed)


def generate_erdos_renyi(n, s, seed) -> EdgeList:
    """G(n, s): exactly s directed unit-weight edges with uniform endpoints.

    Endpoints are drawn independently with replacement, so self-loops and
    duplicate edges can occur; the embedding is well defined on both.
    Identical (n, s, seed) always produces the identical edge sequence.
    """
    if n < 1:
        raise ValidationError("n must be at least 1")
    if s < 0:
        raise ValidationError("s must be nonnegative")
    rng = np.random.default_rng(seed)
    src = rng.integers(0, n, size=s, dtype=np.int64)
    dst = rng.integers(0, n, size=s, dtype=np.int64)
    return EdgeList(n=n, src=src, dst=dst, w=np.ones(s, dtype=np.float64), directed=True)


def write_binary_cache(g: CsrGraph, path) -> None:
    """Write the little-endian binary CSR cache (magic GEECSR1)."""
    header = struct.pack("<8sBBQQ", CACHE_MAGIC, CACHE_VERSION, int(g.directed), g.n, g.s)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(g.offsets.astype("<i8", copy=False).tobytes())
        fh.write(g.targets.astype("<i4", copy=False).tobytes())
        fh.write(g.weights.astype("<f8", copy=False).tobytes())


def read_binary_cache(path) -> CsrGraph:
    """Read a binary CSR cache; inverse of write_binary_cache."""
    with open(path, "rb") as fh:
        data = fh.read()
    head_size = struct.calcsize("<8sBBQQ")
    if len(data) < head_size:
        raise FormatError(f"{path}: truncated header")
    magic, version, directed, n, s = struct.unpack_from("<8sBBQQ", data)
    if magic != CACHE_MAGIC:
        raise FormatError(f"{path}: not a graph cache (bad magic)")
    if version != CACHE_VERSION:
        raise FormatError(f"{path}: unsupported cache version {version}")
    expected = head_size + 8 * (n + 1) + 4 * s + 8 * s
    if len(data) != expected:
        raise FormatError(f"{path}: expected {expected} bytes, found {len(data)}")
    off = head_size
    offsets = np.frombuffer(data, dtype="<i8", count=n + 1, offset=off).astype(np.int64)
    off += 8 * (n + 1)
    targets = np.frombuffer(data, dtype="<i4", count=s, offset=off).astype(np.int32)
    off += 4 * s
    weights = np.frombuffer(data, dtype="<f8", count=s, offset=off).astype(np.float64)
    return CsrGraph(n=n, offsets=offsets, targets=targets, weights=weights, directed=bool(directed))
