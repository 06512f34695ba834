"""Semi-supervised label vectors: file IO and random labeling."""

from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError


@dataclass(eq=False)
class LabelVector:
    """Per-node class labels in {0, ..., k}; 0 means class unknown."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        self.labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if self.k < 1:
            raise ValidationError("class count k must be positive")
        if self.labels.size:
            bad = np.nonzero((self.labels < 0) | (self.labels > self.k))[0]
            if bad.size:
                raise ValidationError(
                    f"label {self.labels[bad[0]]} at node {bad[0]} outside [0, {self.k}]"
                )

    @property
    def n(self) -> int:
        return self.labels.shape[0]


def load_labels(path, n, k) -> LabelVector:
    """Load labels from text, auto-detecting the per-file format.

    One field per line: line i labels node i (the file must have exactly n
    data lines).  Two fields per line: ``node label`` pairs, with unlisted
    nodes defaulting to 0.  '#' comments and blank lines are skipped.
    """
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.startswith("#"):
                continue
            fields = line.split()
            if not fields:
                continue
            if len(fields) not in (1, 2):
                raise ParseError(f"{path}: line {lineno}: expected 1 or 2 fields")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise ParseError(f"{path}: line {lineno}: mixed label formats")
            try:
                rows.append([int(f) for f in fields])
            except ValueError:
                raise ParseError(f"{path}: line {lineno}: fields must be integers") from None
    labels = np.zeros(n, dtype=np.int64)
    if width == 1:
        if len(rows) != n:
            raise ValidationError(f"{path}: {len(rows)} labels for {n} nodes")
        for node, (label,) in enumerate(rows):
            _check_label(node, label, k)
            labels[node] = label
    elif width == 2:
        for node, label in rows:
            if node < 0 or node >= n:
                raise ValidationError(f"{path}: node {node} outside [0, {n})")
            _check_label(node, label, k)
            labels[node] = label
    return LabelVector(labels=labels, k=k)


def _check_label(node, label, k):
    if label < 0 or label > k:
        raise ValidationError(f"label {label} at node {node} outside [0, {k}]")


def write_labels(y: LabelVector, path) -> None:
    """Write the one-label-per-line format (line i labels node i)."""
    with open(path, "w", encoding="utf-8") as fh:
        for label in y.labels.tolist():
            fh.write(f"{label}\n")


def random_labels(n, k, fraction, seed) -> LabelVector:
    """Label exactly round(fraction * n) distinct nodes uniformly at random.

    Chosen nodes get labels drawn uniformly from {1, ..., k}; all other
    nodes stay 0 (unknown).  Deterministic given the seed.
    """
    if n < 1:
        raise ValidationError("n must be at least 1")
    if k < 1:
        raise ValidationError("k must be at least 1")
    if not 0.0 <= fraction <= 1.0:
        raise ValidationError("fraction must lie in [0, 1]")
    m = int(round(fraction * n))
    rng = np.random.default_rng(seed)
    labels = np.zeros(n, dtype=np.int64)
    chosen = rng.choice(n, size=m, replace=False)
    labels[chosen] = rng.integers(1, k + 1, size=m, dtype=np.int64)
    return LabelVector(labels=labels, k=k)


def class_counts(y: LabelVector) -> np.ndarray:
    """Members per class: entry c-1 counts nodes labeled c; 0 is excluded."""
    return np.bincount(y.labels, minlength=y.k + 1)[1:]
