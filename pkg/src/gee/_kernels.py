"""Compiled kernels: the edge passes, counting-sort fill, and atomic primitives.

Everything here is numba-jitted with ``nogil=True`` so that plain Python
threads run the workers truly concurrently.  The only shared mutable state is
the embedding buffer, updated through a lock-free compare-exchange retry loop
on the 64-bit pattern of each entry, and the work-queue cursor, advanced with
an atomic fetch-add.
"""

import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.core import cgutils
from numba.extending import intrinsic

# Lookahead (in arcs) for the software prefetch of the upcoming target's
# label and embedding line.  8 is enough to hide most of the miss latency
# without thrashing the L1 fill buffers.
PREFETCH_DIST = 8


@intrinsic
def _ptr_i64(typingctx, addr):
    """Reinterpret an integer address as a pointer to int64."""
    sig = types.CPointer(types.int64)(types.intp)

    def codegen(context, builder, signature, args):
        return builder.inttoptr(args[0], context.get_value_type(signature.return_type))

    return sig, codegen


@intrinsic
def _cmpxchg_i64(typingctx, ptr, expected, desired):
    """Atomic compare-exchange on 64 bits; returns (observed, succeeded)."""
    if not isinstance(ptr, types.CPointer):
        return None
    sig = types.Tuple([types.int64, types.boolean])(ptr, types.int64, types.int64)

    def codegen(context, builder, signature, args):
        p, exp, des = args
        # monotonic: the increment must be all-or-nothing, but no ordering
        # between distinct entries is promised; thread join publishes the
        # final values.
        res = builder.cmpxchg(p, exp, des, ordering="monotonic")
        old, ok = cgutils.unpack_tuple(builder, res)
        return context.make_tuple(builder, signature.return_type, (old, ok))

    return sig, codegen


@intrinsic
def _fetch_add_i64(typingctx, ptr, val):
    """Atomic fetch-and-add on an int64; returns the previous value."""
    if not isinstance(ptr, types.CPointer):
        return None
    sig = types.int64(ptr, types.int64)

    def codegen(context, builder, signature, args):
        return builder.atomic_rmw("add", args[0], args[1], ordering="monotonic")

    return sig, codegen


def _make_prefetch(rw):
    # llvm.prefetch requires immediate rw/locality operands (immarg), so the
    # read and write variants are baked out as separate intrinsics.
    @intrinsic
    def prefetch(typingctx, addr):
        sig = types.void(types.intp)

        def codegen(context, builder, signature, args):
            i8p = ir.IntType(8).as_pointer()
            i32 = ir.IntType(32)
            fn = cgutils.get_or_insert_function(
                builder.module,
                ir.FunctionType(ir.VoidType(), [i8p, i32, i32, i32]),
                "llvm.prefetch.p0",
            )
            builder.call(fn, [builder.inttoptr(args[0], i8p), i32(rw), i32(3), i32(1)])
            return context.get_dummy_value()

        return sig, codegen

    return prefetch


_prefetch_read = _make_prefetch(0)
_prefetch_write = _make_prefetch(1)


@njit(inline="always")
def _atomic_add_f64(bits, idx, delta):
    """Lock-free ``bits[idx] += delta`` where bits aliases a float64 buffer.

    Compare-exchange retry loop on the bit pattern: the increment is never
    lost under concurrent writers, matching an edge-map engine's writeAdd.
    """
    p = _ptr_i64(bits.ctypes.data + idx * 8)
    old = bits[idx]
    while True:
        new = np.int64(old).view(np.float64) + delta
        old2, ok = _cmpxchg_i64(p, old, np.float64(new).view(np.int64))
        if ok:
            return
        old = old2


@njit(nogil=True, cache=True)
def atomic_add_hammer(bits, idx, reps, delta):
    """Test hook: hammer one entry with atomic increments."""
    for _ in range(reps):
        _atomic_add_f64(bits, idx, delta)


@njit(nogil=True, cache=True)
def plain_add_hammer(bits, idx, reps, delta):
    """Test hook: hammer one entry with unsynchronized read-modify-writes."""
    for _ in range(reps):
        cur = np.int64(bits[idx]).view(np.float64)
        bits[idx] = np.float64(cur + delta).view(np.int64)


@njit(nogil=True, cache=True)
def zero_worker(bits, cursor, chunk):
    """Zero a shared buffer in grabbed chunks (parallel first touch)."""
    total = bits.shape[0]
    cp = _ptr_i64(cursor.ctypes.data)
    while True:
        start = _fetch_add_i64(cp, chunk)
        if start >= total:
            return
        stop = min(start + chunk, total)
        for i in range(start, stop):
            bits[i] = 0


@njit(nogil=True, cache=True)
def arc_pass_worker(
    offsets,
    targets,
    weights,
    unit_weights,
    labels,
    wrow,
    zbits,
    k,
    both_updates,
    use_atomics,
    cursor,
    chunk,
    dist,
):
    """One worker of the parallel edge map.

    Grabs chunks of nodes off the shared cursor (dynamic load balancing) and
    walks each grabbed node's arc range sequentially.  Per arc (u, v, w):

      * source side:      Z[u, Y[v]-1] += wrow[v] * w   (skipped if Y[v] == 0)
      * destination side: Z[v, Y[u]-1] += wrow[u] * w   (skipped if Y[u] == 0,
                          and only applied when ``both_updates`` is set; for
                          symmetric storage the mirror arc supplies it)

    ``zbits`` is the int64 view of the row-major float64 embedding.  With
    ``use_atomics`` every increment goes through the compare-exchange loop;
    otherwise it is a plain read-modify-write that may lose updates.
    """
    n = offsets.shape[0] - 1
    cp = _ptr_i64(cursor.ctypes.data)
    lbase = labels.ctypes.data
    zbase = zbits.ctypes.data
    while True:
        start = _fetch_add_i64(cp, chunk)
        if start >= n:
            return
        stop = min(start + chunk, n)
        for u in range(start, stop):
            yu = np.int64(labels[u])
            wu = wrow[u]
            lo = offsets[u]
            hi = offsets[u + 1]
            zu = u * k
            for e in range(lo, hi):
                if e + dist < hi:
                    vnext = np.int64(targets[e + dist])
                    _prefetch_read(lbase + vnext * 4)
                    if both_updates and yu != 0:
                        _prefetch_write(zbase + (vnext * k + (yu - 1)) * 8)
                v = np.int64(targets[e])
                yv = np.int64(labels[v])
                w = 1.0 if unit_weights else weights[e]
                if yv != 0:
                    idx = zu + (yv - 1)
                    delta = wrow[v] * w
                    if use_atomics:
                        _atomic_add_f64(zbits, idx, delta)
                    else:
                        cur = np.int64(zbits[idx]).view(np.float64)
                        zbits[idx] = np.float64(cur + delta).view(np.int64)
                if both_updates and yu != 0:
                    idx = v * k + (yu - 1)
                    delta = wu * w
                    if use_atomics:
                        _atomic_add_f64(zbits, idx, delta)
                    else:
                        cur = np.int64(zbits[idx]).view(np.float64)
                        zbits[idx] = np.float64(cur + delta).view(np.int64)


@njit(cache=True)
def serial_pass(src, dst, w, labels, wrow, z):
    """Reference pass: both updates per listed edge, in input order.

    Bitwise reproducible for a fixed edge order; this is the oracle the
    parallel path is checked against.
    """
    for i in range(src.shape[0]):
        u = src[i]
        v = dst[i]
        wi = w[i]
        yv = labels[v]
        if yv != 0:
            z[u, yv - 1] += wrow[v] * wi
        yu = labels[u]
        if yu != 0:
            z[v, yu - 1] += wrow[u] * wi


@njit(cache=True)
def csr_fill(src, dst, w, offsets, targets, weights):
    """Counting-sort scatter of arcs into their CSR ranges, input order kept."""
    cursor = offsets[:-1].copy()
    for i in range(src.shape[0]):
        u = src[i]
        p = cursor[u]
        targets[p] = dst[i]
        weights[p] = w[i]
        cursor[u] = p + 1
