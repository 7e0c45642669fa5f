"""Number-theoretic transforms of any order over F_p.

An order is split into its prime factors, smallest first, and handled by
Cooley-Tukey passes. Leaves of length 2 and 3 are direct butterflies; larger
prime leaves go through Rader's reduction to a cyclic convolution whose length
is the next power of two at least 2q-3. That convolution is done exactly with
a complex FFT on residues split into narrow limbs.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import kernels
from .errors import LengthMismatch, OrderNotPrime
from .field import PrimeField, factorize, make_field, multiplicative_order

SCHOOLBOOK_MAX = 64
_SMALL = 1 << 31
# keep every FFT output well inside the 53-bit mantissa
_FFT_ENVELOPE_BITS = 42


def mulmod(a, b, p):
    """Elementwise a*b mod p with numpy broadcasting."""
    if p < _SMALL:
        return a * b % p
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    return kernels.mulmod(a.ravel(), b.ravel(), p).reshape(a.shape)


def _sum_mod(x, axis, p):
    if p < _SMALL:
        return x.sum(axis=axis) % p
    return np.asarray(x.astype(object).sum(axis=axis) % p, dtype=np.int64)


def powers(base: int, n: int, p: int):
    """[base^0, ..., base^(n-1)] mod p, by repeated doubling."""
    out = np.ones(max(n, 1), dtype=np.int64)
    k, step = 1, base % p
    while k < n:
        m = min(k, n - k)
        out[k:k + m] = mulmod(out[:m], step, p)
        step = step * step % p
        k *= 2
    return out[:n]


def _limb_layout(n: int, p: int) -> tuple[int, int]:
    bits = max(1, (p - 1).bit_length())
    limbs = 1
    while True:
        width = -(-bits // limbs)
        if limbs * n * (1 << (2 * width)) <= (1 << _FFT_ENVELOPE_BITS):
            return limbs, width
        limbs += 1


class ExactConvolver:
    """Cyclic convolution by a fixed sequence, exact over F_p.

    Both operands are split into ``limbs`` pieces of ``width`` bits. Every limb
    product fits the float64 envelope, so rounding recovers the integers.
    """

    def __init__(self, b, p: int):
        b = np.asarray(b, dtype=np.int64)
        self.n = len(b)
        self.p = p
        self.limbs, self.width = _limb_layout(self.n, p)
        self._b_hat = [np.fft.rfft(x) for x in self._split(b)]
        self._shift = [pow(2, self.width * s, p) for s in range(2 * self.limbs - 1)]
        self.max_rounding_error = 0.0

    def _split(self, a):
        mask = (1 << self.width) - 1
        return [((a >> (self.width * i)) & mask).astype(np.float64) for i in range(self.limbs)]

    def apply(self, a):
        """Convolve every row of ``a`` (shape (..., n)) with the fixed sequence."""
        a = np.asarray(a, dtype=np.int64)
        if a.shape[-1] != self.n:
            raise LengthMismatch(f"expected length {self.n}, got {a.shape[-1]}")
        a_hat = [np.fft.rfft(x, axis=-1) for x in self._split(a)]
        out = np.zeros(a.shape, dtype=np.int64)
        p = self.p
        for s in range(2 * self.limbs - 1):
            acc = None
            for i in range(max(0, s - self.limbs + 1), min(s, self.limbs - 1) + 1):
                term = a_hat[i] * self._b_hat[s - i]
                acc = term if acc is None else acc + term
            real = np.fft.irfft(acc, n=self.n, axis=-1)
            rounded = np.rint(real)
            err = float(np.max(np.abs(real - rounded))) if real.size else 0.0
            self.max_rounding_error = max(self.max_rounding_error, err)
            if err >= 0.25:
                raise ArithmeticError(f"FFT rounding error {err} exceeds 1/4")
            part = rounded.astype(np.int64) % p
            out = (out + mulmod(part, self._shift[s], p)) % p
        return out


def cyclic_convolve(field: PrimeField, a, b, n: int):
    """out[j] = sum_l a[(j-l) mod n] * b[l] over F_p."""
    p = field.p
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if len(a) != n or len(b) != n:
        raise LengthMismatch(f"both sequences must have length {n}")
    if n <= SCHOOLBOOK_MAX:
        return kernels.cyclic_conv(a, b, p)
    return ExactConvolver(b, p).apply(a)


class _RaderLeaf:
    """Transform of prime length q > 3 as a length-2^k cyclic convolution."""

    def __init__(self, field: PrimeField, beta: int, q: int):
        p = field.p
        self.p, self.q = p, q
        zeta = make_field(q).gamma
        zpow = [pow(zeta, l, q) for l in range(q - 1)]
        self.gather = np.array(zpow, dtype=np.int64)
        # X at index zeta^(-k) lands in slot k of the convolution
        self.scatter = np.array([zpow[(-k) % (q - 1)] for k in range(q - 1)], dtype=np.int64)
        self.size = 1 << (2 * q - 4).bit_length()
        b = np.zeros(self.size, dtype=np.int64)
        b[: q - 1] = powers(beta, q, p)[self.scatter]
        self.b = b
        self._conv = ExactConvolver(b, p) if q > SCHOOLBOOK_MAX else None

    def __call__(self, x):
        """Transform each row of ``x`` (shape (rows, q))."""
        p, q, n = self.p, self.q, self.size
        rows = x.shape[0]
        a = np.zeros((rows, n), dtype=np.int64)
        a[:, : q - 1] = x[:, self.gather]
        a[:, n - (q - 2):] = x[:, self.gather[1:]]
        if self._conv is not None:
            conv = self._conv.apply(a)[:, : q - 1]
        else:
            conv = np.zeros((rows, q - 1), dtype=np.int64)
            k = np.arange(q - 1)
            for l in range(q - 1):
                conv = (conv + mulmod(a[:, (k - l) % n], self.b[l], p)) % p
        out = np.empty_like(x)
        out[:, 0] = _sum_mod(x, 1, p)
        out[:, self.scatter] = (conv + x[:, :1]) % p
        return out


def rader_prime_ntt(field: PrimeField, beta: int, x):
    """Transform of prime order through Rader's reduction.

    Orders 2 and 3 have no useful reduction and are evaluated directly.
    """
    beta %= field.p
    q = multiplicative_order(beta, field.p)
    if len(factorize(q)) != 1 or factorize(q)[0][1] != 1:
        raise OrderNotPrime(f"beta has order {q}, which is not prime")
    x = np.asarray(x, dtype=np.int64) % field.p
    if len(x) != q:
        raise LengthMismatch(f"expected length {q}, got {len(x)}")
    if q <= 3:
        return _small_leaf(x[None, :, None], pow(beta, 1, field.p), q, field.p)[0, :, 0]
    return _RaderLeaf(field, beta, q)(x[None, :])[0]


def _small_leaf(x, w, q, p, twiddle=None):
    """Direct transform of length 2 or 3 along axis 1 of ``x``, then twiddles."""
    rows, _, n2 = x.shape
    return kernels.butterfly_pass(x, q, n2, w, twiddle, p)


class _Stage:
    def __init__(self, field, beta_level, n1, n2):
        p = field.p
        self.p = p
        self.n1, self.n2 = n1, n2
        self.root = pow(beta_level, n2, p)
        if n2 > 1:
            e = np.outer(np.arange(n1), np.arange(n2)) % (n1 * n2)
            self.twiddle = powers(beta_level, n1 * n2, p)[e]
        else:
            self.twiddle = None
        self.rader = _RaderLeaf(field, self.root, n1) if n1 > 3 else None

    def apply(self, x):
        """Leaf transform along axis 1 of x (rows, n1, n2) and twiddle scaling."""
        if self.rader is None:
            return _small_leaf(x, self.root, self.n1, self.p, self.twiddle)
        rows, n1, n2 = x.shape
        flat = x.transpose(0, 2, 1).reshape(-1, n1)
        out = self.rader(flat).reshape(rows, n2, n1).transpose(0, 2, 1)
        return out if self.twiddle is None else mulmod(out, self.twiddle, self.p)


class NttPlan:
    """Precomputed Cooley-Tukey/Rader schedule for one root beta."""

    def __init__(self, field: PrimeField, beta: int):
        p = field.p
        beta %= p
        self.field = field
        self.beta = beta
        self.order = multiplicative_order(beta, p)
        self.factors = [q for q, e in factorize(self.order) for _ in range(e)]
        self.stages = []
        length, b = self.order, beta
        for q in self.factors:
            self.stages.append(_Stage(field, b, q, length // q))
            length //= q
            b = pow(b, q, p)
        self._inverse = None

    @property
    def inverse(self) -> "NttPlan":
        if self._inverse is None:
            self._inverse = get_plan(self.field, self.field.inv(self.beta))
        return self._inverse

    def stage_tree(self):
        """(leaf length, remaining length, leaf kind) per Cooley-Tukey level."""
        return [(s.n1, s.n2, "rader" if s.rader is not None else "direct") for s in self.stages]

    def execute(self, x):
        """Transform every row of a (rows, order) int64 array of residues."""
        arr = x
        for st in self.stages:
            rows = arr.shape[0]
            arr = st.apply(arr.reshape(rows, st.n1, st.n2))
            arr = arr.reshape(rows * st.n1, st.n2)
        for st in reversed(self.stages):
            rows = arr.shape[0] // st.n1
            arr = arr.reshape(rows, st.n1, st.n2).transpose(0, 2, 1).reshape(rows, st.n1 * st.n2)
        return np.ascontiguousarray(arr)


@lru_cache(maxsize=128)
def get_plan(field: PrimeField, beta: int) -> NttPlan:
    return NttPlan(field, beta % field.p)


def _prepare(plan, x):
    x = np.asarray(x, dtype=np.int64)
    if x.shape[-1] != plan.order:
        raise LengthMismatch(f"expected length {plan.order}, got {x.shape[-1]}")
    return x % plan.field.p


def ntt(plan: NttPlan, x):
    """X[j] = sum_i beta^(ij) x[i]. Accepts a single sequence or a batch of rows."""
    x = _prepare(plan, x)
    if x.ndim == 1:
        return plan.execute(x[None, :])[0]
    return plan.execute(x.reshape(-1, plan.order)).reshape(x.shape)


def intt(plan: NttPlan, X):
    x = ntt(plan.inverse, _prepare(plan, X))
    return mulmod(x, plan.field.inv(plan.order), plan.field.p)


def gamma_plan(field: PrimeField) -> NttPlan:
    """Plan for the full-length transform with root gamma (order p-1)."""
    return get_plan(field, field.gamma)
