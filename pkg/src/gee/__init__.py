"""One-hot graph encoder embedding over shared-memory graphs.

A serial reference pass (the oracle) and a lock-free parallel edge-map pass
over CSR storage, plus ingestion, synthetic generation, and a benchmark
harness.
"""

from .bench import BenchResult, emit_report, linear_fit, run_edge_sweep, run_strong_scaling, speedups
from .encoder import (
    EdgeAccounting,
    ProjectionMatrix,
    build_projection,
    edge_accounting,
    embed_parallel,
    embed_serial,
    read_embedding,
    write_embedding,
)
from .errors import FormatError, GeeError, ParseError, ValidationError
from .graph import (
    CsrGraph,
    EdgeList,
    build_csr,
    generate_erdos_renyi,
    load_edge_list,
    read_binary_cache,
    write_binary_cache,
    write_edge_list,
)
from .labeling import LabelVector, class_counts, load_labels, random_labels, write_labels

__version__ = "0.1.0"

__all__ = [
    "BenchResult",
    "CsrGraph",
    "EdgeAccounting",
    "EdgeList",
    "FormatError",
    "GeeError",
    "LabelVector",
    "ParseError",
    "ProjectionMatrix",
    "ValidationError",
    "build_csr",
    "build_projection",
    "class_counts",
    "edge_accounting",
    "embed_parallel",
    "embed_serial",
    "emit_report",
    "generate_erdos_renyi",
    "linear_fit",
    "load_edge_list",
    "load_labels",
    "random_labels",
    "read_binary_cache",
    "read_embedding",
    "run_edge_sweep",
    "run_strong_scaling",
    "speedups",
    "write_binary_cache",
    "write_edge_list",
    "write_embedding",
    "write_labels",
]
