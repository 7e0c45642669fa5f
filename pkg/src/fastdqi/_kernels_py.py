"""Pure-Python (numpy) implementations of the modular kernels.

Every function takes and returns 1-D ``int64`` arrays of canonical residues.
For moduli below 2^31 products fit in int64 and the work is vectorized
directly; larger moduli go through object arrays of Python ints.
"""

import numpy as np

BACKEND = "python"

_SMALL = 1 << 31


def _work(x, p):
    x = np.asarray(x, dtype=np.int64)
    return x if p < _SMALL else x.astype(object)


def _out(x):
    return np.asarray(x, dtype=np.int64)


def mulmod(a, b, p):
    return _out(_work(a, p) * _work(b, p) % p)


def poly_mul(a, b, p):
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        return np.zeros(0, dtype=np.int64)
    if na < nb:
        a, b, na, nb = b, a, nb, na
    a, b = _work(a, p), _work(b, p)
    c = _work(np.zeros(na + nb - 1, dtype=np.int64), p)
    for i in range(nb):
        if b[i]:
            c[i:i + na] = (c[i:i + na] + b[i] * a) % p
    return _out(c)


def poly_divmod(a, b, p):
    """Quotient and remainder; ``b[-1]`` must be nonzero.

    The remainder has length ``len(b) - 1`` (not trimmed).
    """
    na, nb = len(a), len(b)
    if na < nb:
        r = np.zeros(nb - 1, dtype=np.int64)
        r[:na] = a
        return np.zeros(0, dtype=np.int64), r
    r = _work(a, p).copy()
    bw = _work(b, p)
    inv = pow(int(b[-1]), -1, p)
    q = _work(np.zeros(na - nb + 1, dtype=np.int64), p)
    for k in range(na - nb, -1, -1):
        c = int(r[k + nb - 1]) * inv % p
        q[k] = c
        if c:
            r[k:k + nb] = (r[k:k + nb] - c * bw) % p
    return _out(q), _out(r[:nb - 1])


def series_div(num, den, n, p):
    """First ``n`` power-series coefficients of num/den, with den[0] != 0."""
    d = len(den) - 1
    inv = pow(int(den[0]), -1, p)
    numw = _work(num, p)
    denw = _work(den, p)
    c = _work(np.zeros(n, dtype=np.int64), p)
    for j in range(n):
        acc = int(numw[j]) if j < len(numw) else 0
        k = min(j, d)
        if k:
            acc -= int((denw[1:k + 1] * c[j - 1::-1][:k] % p).sum())
        c[j] = acc * inv % p
    return _out(c)


def dft(x, beta, p):
    """Direct O(n^2) transform X_j = sum_i beta^(ij) x_i."""
    n = len(x)
    xw = _work(x, p)
    step = _work(np.zeros(n, dtype=np.int64), p)
    cur = 1
    for i in range(n):
        step[i] = cur
        cur = cur * beta % p
    row = _work(np.ones(n, dtype=np.int64), p)
    out = np.zeros(n, dtype=np.int64)
    for j in range(n):
        out[j] = int((xw * row % p).sum()) % p
        row = row * step % p
    return out


def cyclic_conv(a, b, p):
    n = len(a)
    aw, bw = _work(a, p), _work(b, p)
    out = _work(np.zeros(n, dtype=np.int64), p)
    for l in range(n):
        if bw[l]:
            out = (out + np.roll(aw, l) * bw[l]) % p
    return _out(out)


def butterfly_pass(x, n1, n2, root, twiddle, p):
    """Length-2 or 3 transform along axis 1 of x (rows, n1, n2), then twiddles.

    The first twiddle row must be all ones; the compiled kernel skips it.
    """
    x = _work(x, p)
    if n1 == 2:
        a0, a1 = x[:, 0], x[:, 1]
        y = [(a0 + a1) % p, (a0 - a1) % p]
    else:
        a0, a1, a2 = x[:, 0], x[:, 1], x[:, 2]
        w, w2 = root % p, root * root % p
        y = [
            ((a0 + a1) % p + a2) % p,
            ((a0 + a1 * w % p) % p + a2 * w2 % p) % p,
            ((a0 + a1 * w2 % p) % p + a2 * w % p) % p,
        ]
    out = np.stack(y, axis=1)
    if twiddle is not None:
        out = out * _work(twiddle, p) % p
    return _out(out)
