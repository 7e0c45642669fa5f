# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular kernels; same contract as ``_kernels_py``.

Residues are stored as int64 and multiplied through a 128-bit intermediate,
so every modulus below 2^62 is exact.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

BACKEND = "cython"

ctypedef cnp.int64_t i64


cdef inline uint64_t mm(uint64_t a, uint64_t b, uint64_t p) nogil:
    if p < (<uint64_t>1 << 32):
        return (a * b) % p
    return <uint64_t>((<u128>a * b) % p)


cdef inline uint64_t addm(uint64_t a, uint64_t b, uint64_t p) nogil:
    a += b
    return a - p if a >= p else a


cdef inline uint64_t subm(uint64_t a, uint64_t b, uint64_t p) nogil:
    return a - b if a >= b else a + p - b


cdef uint64_t powm(uint64_t a, uint64_t e, uint64_t p) nogil:
    cdef uint64_t r = 1
    while e:
        if e & 1:
            r = mm(r, a, p)
        a = mm(a, a, p)
        e >>= 1
    return r


def mulmod(a, b, p):
    cdef const i64[::1] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef const i64[::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t n = av.shape[0], i
    cdef uint64_t pp = p
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] ov = out
    with nogil:
        for i in range(n):
            ov[i] = mm(av[i], bv[i], pp)
    return out


def poly_mul(a, b, p):
    cdef const i64[::1] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef const i64[::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t na = av.shape[0], nb = bv.shape[0], k, i, lo, hi
    cdef uint64_t pp = p
    cdef u128 acc
    if na == 0 or nb == 0:
        return np.zeros(0, dtype=np.int64)
    out = np.empty(na + nb - 1, dtype=np.int64)
    cdef i64[::1] ov = out
    cdef bint small = pp < (<uint64_t>1 << 32)
    with nogil:
        for k in range(na + nb - 1):
            lo = k - nb + 1 if k >= nb else 0
            hi = k if k < na - 1 else na - 1
            acc = 0
            if small:
                for i in range(lo, hi + 1):
                    acc += <uint64_t>av[i] * <uint64_t>bv[k - i]
                ov[k] = <i64>(acc % pp)
            else:
                for i in range(lo, hi + 1):
                    acc = addm(<uint64_t>acc, mm(av[i], bv[k - i], pp), pp)
                ov[k] = <i64>acc
    return out


def poly_divmod(a, b, p):
    cdef Py_ssize_t na = len(a), nb = len(b), k, i
    if na < nb:
        r0 = np.zeros(nb - 1, dtype=np.int64)
        r0[:na] = a
        return np.zeros(0, dtype=np.int64), r0
    r = np.array(a, dtype=np.int64)
    cdef i64[::1] rv = r
    cdef const i64[::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    q = np.zeros(na - nb + 1, dtype=np.int64)
    cdef i64[::1] qv = q
    cdef uint64_t pp = p
    cdef uint64_t inv = pow(int(b[-1]), -1, p)
    cdef uint64_t c
    with nogil:
        for k in range(na - nb, -1, -1):
            c = mm(rv[k + nb - 1], inv, pp)
            qv[k] = c
            if c:
                for i in range(nb):
                    rv[k + i] = subm(rv[k + i], mm(c, bv[i], pp), pp)
    return q, r[:nb - 1].copy()


def series_div(num, den, Py_ssize_t n, p):
    cdef const i64[::1] nv = np.ascontiguousarray(num, dtype=np.int64)
    cdef const i64[::1] dv = np.ascontiguousarray(den, dtype=np.int64)
    cdef Py_ssize_t d = dv.shape[0] - 1, nn = nv.shape[0], j, i, k
    cdef uint64_t pp = p
    cdef uint64_t inv = pow(int(den[0]), -1, p)
    cdef uint64_t acc
    out = np.zeros(n, dtype=np.int64)
    cdef i64[::1] cv = out
    with nogil:
        for j in range(n):
            acc = nv[j] if j < nn else 0
            k = j if j < d else d
            for i in range(1, k + 1):
                acc = subm(acc, mm(dv[i], cv[j - i], pp), pp)
            cv[j] = mm(acc, inv, pp)
    return out


def dft(x, beta, p):
    cdef const i64[::1] xv = np.ascontiguousarray(x, dtype=np.int64)
    cdef Py_ssize_t n = xv.shape[0], i, j
    cdef uint64_t pp = p, bb = beta % p, w, wj, acc
    out = np.zeros(n, dtype=np.int64)
    cdef i64[::1] ov = out
    with nogil:
        wj = 1
        for j in range(n):
            acc = 0
            w = 1
            for i in range(n):
                acc = addm(acc, mm(xv[i], w, pp), pp)
                w = mm(w, wj, pp)
            ov[j] = acc
            wj = mm(wj, bb, pp)
    return out


def cyclic_conv(a, b, p):
    cdef const i64[::1] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef const i64[::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t n = av.shape[0], j, l, idx
    cdef uint64_t pp = p, acc
    out = np.zeros(n, dtype=np.int64)
    cdef i64[::1] ov = out
    with nogil:
        for j in range(n):
            acc = 0
            for l in range(n):
                if bv[l]:
                    idx = j - l
                    if idx < 0:
                        idx += n
                    acc = addm(acc, mm(av[idx], bv[l], pp), pp)
            ov[j] = acc
    return out


def butterfly_pass(x, Py_ssize_t n1, Py_ssize_t n2, root, twiddle, p):
    """Length-2 or 3 transform along axis 1 of x (rows, n1, n2), then twiddles.

    ``twiddle`` is an (n1, n2) table or None. Its first row must be all ones
    and is not read.
    """
    cdef const i64[:, :, ::1] xv = np.ascontiguousarray(x, dtype=np.int64)
    cdef Py_ssize_t rows = xv.shape[0], r, i
    cdef uint64_t pp = p, w = root % p, w2 = mm(w, w, pp)
    cdef uint64_t a0, a1, a2, y0, y1, y2
    out = np.empty((rows, n1, n2), dtype=np.int64)
    cdef i64[:, :, ::1] ov = out
    cdef bint tw = twiddle is not None
    cdef const i64[:, ::1] tv = np.ascontiguousarray(twiddle if tw else np.ones((n1, n2)), dtype=np.int64)
    with nogil:
        for r in range(rows):
            for i in range(n2):
                if n1 == 2:
                    a0 = xv[r, 0, i]
                    a1 = xv[r, 1, i]
                    y0 = addm(a0, a1, pp)
                    y1 = subm(a0, a1, pp)
                    if tw:
                        y1 = mm(y1, tv[1, i], pp)
                    ov[r, 0, i] = y0
                    ov[r, 1, i] = y1
                else:
                    a0 = xv[r, 0, i]
                    a1 = xv[r, 1, i]
                    a2 = xv[r, 2, i]
                    y0 = addm(addm(a0, a1, pp), a2, pp)
                    y1 = addm(addm(a0, mm(a1, w, pp), pp), mm(a2, w2, pp), pp)
                    y2 = addm(addm(a0, mm(a1, w2, pp), pp), mm(a2, w, pp), pp)
                    if tw:
                        y1 = mm(y1, tv[1, i], pp)
                        y2 = mm(y2, tv[2, i], pp)
                    ov[r, 0, i] = y0
                    ov[r, 1, i] = y1
                    ov[r, 2, i] = y2
    return out
