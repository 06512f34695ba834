"""One-hot encoder embedding: projection build, serial pass, parallel edge map.

The embedding Z is an n x K float64 array.  Per edge (u, v, w) the source
row gains the class contribution of the destination and vice versa:

    Z[u, Y[v]-1] += wrow[v] * w
    Z[v, Y[u]-1] += wrow[u] * w

where wrow[i] = 1 / count(Y == Y[i]) for labeled nodes and an update whose
endpoint is unlabeled (Y == 0) is a no-op.  ``embed_serial`` applies this in
edge-list order and is the correctness oracle; ``embed_parallel`` maps the
same updates over the arcs of a CsrGraph with plain threads and lock-free
atomic accumulation.
"""

import enum
import logging
import os
import struct
import threading

import numpy as np

from ._kernels import PREFETCH_DIST, arc_pass_worker, serial_pass, zero_worker
from .errors import FormatError, ValidationError
from .graph import CsrGraph, EdgeList
from .labeling import LabelVector

logger = logging.getLogger(__name__)

EMB_MAGIC = b"GEEEMB1\x00"

_ZERO_CHUNK = 1 << 21  # buffer elements grabbed per cursor bump while zeroing
_NODE_CHUNK_CAP = 8192  # max nodes grabbed per cursor bump in the edge pass


class EdgeAccounting(enum.Enum):
    """Per-arc update rule that makes the arc pass match the edge-list pass.

    Directed storage keeps one arc per listed edge, so each arc must apply
    both the source-side and destination-side updates.  Undirected input is
    stored symmetrically; there the mirror arc supplies the other update, so
    each arc applies only the source-side one (anything else would double
    every contribution).
    """

    BOTH_ENDPOINTS = "both"
    SOURCE_ONLY = "source"


def edge_accounting(g: CsrGraph, directed=None) -> EdgeAccounting:
    """Pick the update rule for a stored graph (see EdgeAccounting)."""
    if directed is None:
        directed = g.directed
    return EdgeAccounting.BOTH_ENDPOINTS if directed else EdgeAccounting.SOURCE_ONLY


class ProjectionMatrix:
    """The n x K projection W, stored as one scalar per node.

    Row i of the conceptual matrix has a single nonzero at column Y[i]
    (value 1 / count(Y == Y[i])) when node i is labeled, and is zero
    otherwise; the pair (label, row_value) captures it exactly.
    """

    def __init__(self, n, k, row_value, label):
        self.n = n
        self.k = k
        self.row_value = row_value  # float64[n]
        self.label = label  # int32[n], 0 = unknown

    def to_dense(self) -> np.ndarray:
        """Materialize W as a dense n x K array (small graphs / tests)."""
        w = np.zeros((self.n, self.k))
        idx = np.nonzero(self.label)[0]
        w[idx, self.label[idx] - 1] = self.row_value[idx]
        return w


def build_projection(y: LabelVector) -> ProjectionMatrix:
    """Construct W from the labels: W[i, Y[i]-1] = 1 / count(Y == Y[i]).

    Classes with no members simply produce no nonzeros (their column is
    never read by the edge pass); this is logged since it usually means the
    labeling missed a class.
    """
    counts = np.bincount(y.labels, minlength=y.k + 1)
    labeled = int(y.n - counts[0])
    if labeled == 0:
        logger.warning("no labeled nodes: the embedding will be identically zero")
    else:
        empty = np.nonzero(counts[1:] == 0)[0] + 1
        if empty.size:
            logger.warning("%d of %d classes have no members", empty.size, y.k)
    inv = np.zeros(y.k + 1)
    nz = counts[1:] > 0
    inv[1:][nz] = 1.0 / counts[1:][nz]
    return ProjectionMatrix(
        n=y.n,
        k=y.k,
        row_value=inv[y.labels],
        label=y.labels.astype(np.int32),
    )


def embed_serial(el: EdgeList, y: LabelVector, projection=None) -> np.ndarray:
    """Reference embedding: one in-order pass over the listed edges.

    Every listed edge applies both updates, for directed and undirected
    lists alike (an undirected list stores each edge once).  Two runs on
    identical input are bitwise identical; this is the oracle the parallel
    path is validated against.
    """
    if el.n != y.n:
        raise ValidationError(f"graph has {el.n} nodes but labels have {y.n}")
    proj = projection if projection is not None else build_projection(y)
    z = np.zeros((el.n, y.k))
    if el.s:
        serial_pass(el.src, el.dst, el.w, y.labels, proj.row_value, z)
    return z


def embed_parallel(
    g: CsrGraph,
    y: LabelVector,
    *,
    workers=None,
    atomics=True,
    accounting=None,
    projection=None,
    out=None,
) -> np.ndarray:
    """Parallel edge map over all arcs with the whole vertex set active.

    Nodes are handed to workers in dynamically grabbed chunks; each node's
    arc range is walked sequentially by one worker while distinct nodes
    proceed concurrently.  With ``atomics=True`` (the default) every
    increment is an atomic compare-exchange and the result matches
    ``embed_serial`` up to float accumulation order.  ``atomics=False``
    performs plain read-modify-writes that can lose updates; it exists only
    for measuring what the atomics cost.

    ``out`` may supply a preallocated (n, k) float64 buffer to reuse between
    calls (it is zeroed first); benchmarks use this so page faults from a
    fresh allocation do not pollute timings.
    """
    if g.n != y.n:
        raise ValidationError(f"graph has {g.n} nodes but labels have {y.n}")
    if workers is None:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ValidationError("workers must be at least 1")
    if accounting is None:
        accounting = edge_accounting(g)
    proj = projection if projection is not None else build_projection(y)
    if out is None:
        out = np.zeros((g.n, y.k))
    elif (
        out.shape != (g.n, y.k)
        or out.dtype != np.float64
        or not out.flags.c_contiguous
    ):
        raise ValidationError(f"out must be a C-contiguous float64 array of shape ({g.n}, {y.k})")
    if out.size == 0:
        return out

    zbits = out.reshape(-1).view(np.int64)
    _run_wave(
        workers,
        zero_worker,
        (zbits, np.zeros(1, np.int64), max(1, min(_ZERO_CHUNK, zbits.shape[0] // workers or 1))),
    )
    if g.s:
        chunk = max(1, min(_NODE_CHUNK_CAP, g.n // (workers * 8) or 1))
        _run_wave(
            workers,
            arc_pass_worker,
            (
                g.offsets,
                g.targets,
                g.weights,
                g.unit_weights,
                proj.label,
                proj.row_value,
                zbits,
                np.int64(y.k),
                accounting is EdgeAccounting.BOTH_ENDPOINTS,
                bool(atomics),
                np.zeros(1, np.int64),
                np.int64(chunk),
                np.int64(PREFETCH_DIST),
            ),
        )
    return out


def _run_wave(workers, fn, args):
    """Run one wave of worker threads to completion (none outlive the call)."""
    if workers == 1:
        fn(*args)
        return
    threads = [threading.Thread(target=fn, args=args) for _ in range(workers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()


def write_embedding(z: np.ndarray, path, fmt="csv") -> None:
    """Write Z as csv (round-trip-exact decimals) or the binary format."""
    z = np.ascontiguousarray(z, dtype=np.float64)
    if z.ndim != 2:
        raise ValidationError("embedding must be a 2-d array")
    if fmt == "csv":
        np.savetxt(path, z, fmt="%.17g", delimiter=",")
    elif fmt == "binary":
        with open(path, "wb") as fh:
            fh.write(struct.pack("<8sQQ", EMB_MAGIC, z.shape[0], z.shape[1]))
            fh.write(z.astype("<f8", copy=False).tobytes())
    else:
        raise ValidationError(f"unknown embedding format {fmt!r}")


def read_embedding(path) -> np.ndarray:
    """Read a binary embedding file back into an (n, k) float64 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    head_size = struct.calcsize("<8sQQ")
    if len(data) < head_size:
        raise FormatError(f"{path}: truncated header")
    magic, n, k = struct.unpack_from("<8sQQ", data)
    if magic != EMB_MAGIC:
        raise FormatError(f"{path}: not an embedding file (bad magic)")
    if len(data) != head_size + 8 * n * k:
        raise FormatError(f"{path}: expected {head_size + 8 * n * k} bytes, found {len(data)}")
    values = np.frombuffer(data, dtype="<f8", count=n * k, offset=head_size)
    return values.astype(np.float64).reshape(n, k)
