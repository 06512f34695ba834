import numpy as np
import pytest

from gee import EdgeList, LabelVector, random_labels


def numpy_reference(el: EdgeList, y: LabelVector) -> np.ndarray:
    """Vectorized scatter-add reference, independent of the jitted kernels."""
    counts = np.bincount(y.labels, minlength=y.k + 1)
    inv = np.zeros(y.k + 1)
    nz = counts[1:] > 0
    inv[1:][nz] = 1.0 / counts[1:][nz]
    wrow = inv[y.labels]
    z = np.zeros((el.n, y.k))
    ysrc, ydst = y.labels[el.src], y.labels[el.dst]
    m = ydst > 0
    np.add.at(z, (el.src[m], ydst[m] - 1), wrow[el.dst[m]] * el.w[m])
    m = ysrc > 0
    np.add.at(z, (el.dst[m], ysrc[m] - 1), wrow[el.src[m]] * el.w[m])
    return z


def random_graph(rng, n=None, s=None, directed=True, unit_weights=False):
    """A random multigraph with weights in (0, 2] unless unit_weights."""
    n = n if n is not None else int(rng.integers(2, 200))
    s = s if s is not None else int(rng.integers(0, 1000))
    src = rng.integers(0, n, size=s, dtype=np.int64)
    dst = rng.integers(0, n, size=s, dtype=np.int64)
    w = np.ones(s) if unit_weights else 2.0 * (1.0 - rng.random(s))
    return EdgeList(n=n, src=src, dst=dst, w=w, directed=directed)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def make_labels(rng, n, k, fraction=0.3):
    return random_labels(n, k, fraction, int(rng.integers(0, 2**31)))
