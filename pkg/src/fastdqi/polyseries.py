"""Polynomials over F_p, truncated Laurent series and the extended Euclidean algorithm.

Polynomials keep coefficients in ascending order. A Laurent series in 1/x is
handled through a ``SeriesWindow``: the block of its coefficients from some
floor degree up to its top degree. Rounded division and the fast Euclidean
algorithm only ever look at such leading windows.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import DegreeContract, FieldMismatch, ZeroPolynomial
from .field import PrimeField
from .ntt import get_plan, intt, mulmod, ntt

MINUS_INFINITY = float("-inf")

SCHOOLBOOK_CUTOFF = 48
# the compiled schoolbook beats a transform-based product up to ~1000x1000
SCHOOLBOOK_AREA = 1 << 20 if kernels.BACKEND == "cython" else 0
HGCD_CUTOFF = 32
_NEWTON_DIRECT = 64


def _trim(c):
    if len(c) == 0 or c[-1] != 0:
        return c
    nz = np.flatnonzero(c)
    return c[: nz[-1] + 1] if len(nz) else c[:0]


class FpPoly:
    """Dense polynomial with canonical coefficients (ascending powers)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField, coeffs=()):
        c = _trim(np.array(coeffs, dtype=np.int64) % field.p if len(coeffs) else np.zeros(0, np.int64))
        c.setflags(write=False)
        self.field = field
        self.coeffs = c

    @classmethod
    def _raw(cls, field, c):
        # c is already canonical int64; only trim
        obj = cls.__new__(cls)
        c = _trim(np.asarray(c, dtype=np.int64))
        c.setflags(write=False)
        obj.field = field
        obj.coeffs = c
        return obj

    @classmethod
    def zero(cls, field):
        return cls._raw(field, np.zeros(0, np.int64))

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def monomial(cls, field, d, c=1):
        out = np.zeros(d + 1, dtype=np.int64)
        out[d] = c % field.p
        return cls._raw(field, out)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if len(self.coeffs) else MINUS_INFINITY

    def is_zero(self):
        return len(self.coeffs) == 0

    @property
    def lead(self) -> int:
        return int(self.coeffs[-1]) if len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, FpPoly):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs.tobytes()))

    def __repr__(self):
        return f"FpPoly({self.coeffs.tolist()} mod {self.field.p})"

    def _check(self, other):
        if other.field != self.field:
            raise FieldMismatch("polynomials over different fields")

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] = (out[: len(b)] + b) % self.field.p
        return FpPoly._raw(self.field, out)

    def __neg__(self):
        return FpPoly._raw(self.field, -self.coeffs % self.field.p)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return poly_mul(self, other)

    __rmul__ = __mul__

    def scale(self, c: int):
        return FpPoly._raw(self.field, mulmod(self.coeffs, c % self.field.p, self.field.p))

    def __divmod__(self, other):
        return poly_divmod(self, other)

    def shift(self, k: int):
        """Multiply by x^k; a negative k drops the lowest -k coefficients."""
        if self.is_zero():
            return self
        if k >= 0:
            return FpPoly._raw(self.field, np.concatenate([np.zeros(k, np.int64), self.coeffs]))
        return FpPoly._raw(self.field, self.coeffs[-k:])

    def truncate(self, n: int):
        """Remainder modulo x^n."""
        return FpPoly._raw(self.field, self.coeffs[:n])

    def __call__(self, z: int) -> int:
        p = self.field.p
        acc = 0
        for c in reversed(self.coeffs.tolist()):
            acc = (acc * z + c) % p
        return acc


def poly_divmod(a: FpPoly, b: FpPoly):
    a._check(b)
    if b.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    q, r = kernels.poly_divmod(a.coeffs, b.coeffs, a.field.p)
    return FpPoly._raw(a.field, q), FpPoly._raw(a.field, r)


@lru_cache(maxsize=64)
def _divisors(n: int):
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _transform_length(field: PrimeField, need: int):
    """Smallest divisor of p-1 that is at least ``need``."""
    for d in _divisors(field.p - 1):
        if d >= need:
            return d
    return None


def _padded(c, n):
    out = np.zeros(n, dtype=np.int64)
    out[: len(c)] = c
    return out


def _mul_ntt(a: FpPoly, b: FpPoly) -> FpPoly:
    """Product by zero-padded cyclic convolution over a divisor of p-1.

    When deg a + deg b exceeds p-2 the inputs are cut into blocks of degree at
    most (p-3)/2 so every block product fits in one length-(p-1) transform.
    """
    F, p = a.field, a.field.p
    need = len(a) + len(b) - 1
    n = _transform_length(F, need)
    if n is not None:
        plan = get_plan(F, F.root_of_order(n))
        prod = intt(plan, mulmod(ntt(plan, _padded(a.coeffs, n)), ntt(plan, _padded(b.coeffs, n)), p))
        return FpPoly._raw(F, prod[:need])
    size = (p - 1) // 2
    plan = get_plan(F, F.gamma)
    n = p - 1

    def blocks(c):
        cut = [c[i:i + size] for i in range(0, len(c), size)]
        return ntt(plan, np.stack([_padded(x, n) for x in cut]))

    ta, tb = blocks(a.coeffs), blocks(b.coeffs)
    out = np.zeros(need + n, dtype=np.int64)
    for u in range(len(ta) + len(tb) - 1):
        acc = np.zeros(n, dtype=np.int64)
        for i in range(max(0, u - len(tb) + 1), min(u, len(ta) - 1) + 1):
            acc = (acc + mulmod(ta[i], tb[u - i], p)) % p
        out[u * size:u * size + n] = (out[u * size:u * size + n] + intt(plan, acc)) % p
    return FpPoly._raw(F, out[:need])


def poly_mul(a: FpPoly, b: FpPoly) -> FpPoly:
    a._check(b)
    if a.is_zero() or b.is_zero():
        return FpPoly.zero(a.field)
    if (
        min(len(a), len(b)) <= SCHOOLBOOK_CUTOFF
        or len(a) * len(b) <= SCHOOLBOOK_AREA
        or (a.field.p - 1) // 2 < 4 * SCHOOLBOOK_CUTOFF
    ):
        return FpPoly._raw(a.field, kernels.poly_mul(a.coeffs, b.coeffs, a.field.p))
    return _mul_ntt(a, b)


def _mul_low(a, b, n, field):
    """(a*b) mod y^n for ascending arrays a, b."""
    return poly_mul(FpPoly._raw(field, a[:n]), FpPoly._raw(field, b[:n])).coeffs[:n]


@dataclass(frozen=True, eq=False)
class SeriesWindow:
    """Coefficients of a Laurent series in 1/x for degrees floor..top_degree.

    ``coeffs[i]`` is the coefficient of x^(floor + i). The top coefficient is
    nonzero unless the window is zero, in which case ``coeffs`` is empty.
    """

    field: PrimeField
    floor: int
    coeffs: np.ndarray = dc_field(repr=False)

    @classmethod
    def make(cls, field, floor, coeffs):
        c = _trim(np.asarray(coeffs, dtype=np.int64) % field.p)
        c.setflags(write=False)
        return cls(field, floor, c)

    @property
    def top_degree(self):
        return self.floor + len(self.coeffs) - 1 if len(self.coeffs) else MINUS_INFINITY

    def is_zero(self):
        return len(self.coeffs) == 0

    def coeff(self, degree: int) -> int:
        if degree < self.floor:
            raise ValueError(f"degree {degree} is below the window floor {self.floor}")
        i = degree - self.floor
        return int(self.coeffs[i]) if i < len(self.coeffs) else 0

    def descending(self, lowest: int | None = None):
        """Coefficients from degree ``max(top, 0)`` (or top) down to ``lowest``."""
        lowest = self.floor if lowest is None else lowest
        top = self.top_degree
        if top == MINUS_INFINITY:
            return np.zeros(0, dtype=np.int64)
        return np.array([self.coeff(d) for d in range(top, lowest - 1, -1)], dtype=np.int64)

    def __eq__(self, other):
        if not isinstance(other, SeriesWindow):
            return NotImplemented
        return (self.field == other.field and self.floor == other.floor
                and np.array_equal(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"SeriesWindow(floor={self.floor}, top={self.top_degree}, coeffs={self.coeffs.tolist()})"


def series_inverse(rev, terms: int, field: PrimeField):
    """First ``terms`` coefficients of 1/rev(y) as a power series (Newton doubling)."""
    p = field.p
    rev = np.asarray(rev, dtype=np.int64)
    if terms <= _NEWTON_DIRECT:
        one = np.array([1], dtype=np.int64)
        return kernels.series_div(one, rev[:terms], terms, p)
    n = _NEWTON_DIRECT
    u = kernels.series_div(np.array([1], dtype=np.int64), rev[:n], n, p)
    while n < terms:
        n2 = min(2 * n, terms)
        e = _mul_low(rev, u, n2, field)  # 1 + O(y^n)
        e = (-e) % p
        e[0] = (e[0] + 1) % p  # 1 - rev*u, divisible by y^n
        corr = _mul_low(u, e[n:], n2 - n, field)
        u = np.concatenate([u, corr, np.zeros(n2 - n - len(corr), np.int64)])
        n = n2
    return u


def poly_reciprocal_window(a: FpPoly, terms: int) -> SeriesWindow:
    """The ``terms`` leading coefficients of 1/a, degrees -deg(a) downward."""
    if a.is_zero():
        raise ZeroPolynomial("the zero polynomial has no reciprocal")
    if terms < 1:
        raise ValueError("terms must be positive")
    d = a.degree
    u = series_inverse(a.coeffs[::-1], terms, a.field)
    return SeriesWindow.make(a.field, -d - terms + 1, u[::-1])


def poly_rounded_div(a: FpPoly, b: FpPoly, k: int) -> SeriesWindow:
    """All terms of a/b (as a series in 1/x) of degree at least -k.

    Only the top ``deg a - deg b + k + 1`` coefficients of a and b are read.
    """
    a._check(b)
    if b.is_zero():
        raise ZeroPolynomial("rounded division by zero")
    F = a.field
    if a.is_zero():
        return SeriesWindow.make(F, -k, [])
    n = a.degree - b.degree + k + 1
    if n <= 0:
        return SeriesWindow.make(F, -k, [])
    u = series_inverse(b.coeffs[::-1][:n], n, F)
    c = _mul_low(a.coeffs[::-1], u, n, F)
    c = _padded(c, n)
    return SeriesWindow.make(F, -k, c[::-1])


def rounded_div_schoolbook(a: FpPoly, b: FpPoly, k: int) -> SeriesWindow:
    """Same contract as ``poly_rounded_div`` by term-by-term long division."""
    a._check(b)
    if b.is_zero():
        raise ZeroPolynomial("rounded division by zero")
    F = a.field
    n = a.degree - b.degree + k + 1 if not a.is_zero() else 0
    if n <= 0:
        return SeriesWindow.make(F, -k, [])
    c = kernels.series_div(a.coeffs[::-1][:n], b.coeffs[::-1][:n], n, F.p)
    return SeriesWindow.make(F, -k, c[::-1])


@dataclass(frozen=True)
class EeaOutput:
    """Result of stopping the Euclidean remainder sequence at index j.

    ``Pj * R0 + Lj * R1 == Rj`` and deg R_(j-1) >= t > deg Rj.
    """

    Pj: FpPoly
    Lj: FpPoly
    Rj: FpPoly
    j: int
    quotients: tuple = ()

    @property
    def Rj_degree(self):
        return self.Rj.degree


def _check_eea_inputs(R0: FpPoly, R1: FpPoly, t: int):
    R0._check(R1)
    if t < 0 or R0.degree != 2 * t:
        raise DegreeContract(f"deg R0 must equal 2t = {2 * t}, got {R0.degree}")
    if R1.degree >= 2 * t:
        raise DegreeContract(f"deg R1 must be below 2t = {2 * t}, got {R1.degree}")


def _check_bezout(R0, R1, out: EeaOutput):
    if out.Pj * R0 + out.Lj * R1 != out.Rj:
        raise AssertionError("Bezout identity P*R0 + L*R1 = R failed")


def eea_slow(R0: FpPoly, R1: FpPoly, t: int) -> EeaOutput:
    """Euclidean remainder sequence run step by step until deg R_j < t."""
    _check_eea_inputs(R0, R1, t)
    F = R0.field
    prev, cur = R0, R1
    P0, P1 = FpPoly.constant(F, 1), FpPoly.zero(F)
    L0, L1 = FpPoly.zero(F), FpPoly.constant(F, 1)
    quotients = []
    while cur.degree >= t:
        q, r = poly_divmod(prev, cur)
        prev, cur = cur, r
        P0, P1 = P1, P0 - q * P1
        L0, L1 = L1, L0 - q * L1
        quotients.append(q)
    out = EeaOutput(P1, L1, cur, 1 + len(quotients), tuple(quotients))
    _check_bezout(R0, R1, out)
    return out


# 2x2 polynomial matrices are tuples (m00, m01, m10, m11); they act on
# column vectors (a, b) and map a remainder pair to a later one.

def _identity(F):
    one, zero = FpPoly.constant(F, 1), FpPoly.zero(F)
    return (one, zero, zero, one)


def _apply(M, a, b):
    return M[0] * a + M[1] * b, M[2] * a + M[3] * b


def _matmul(A, B):
    """A @ B, i.e. apply B first."""
    return (
        A[0] * B[0] + A[1] * B[2],
        A[0] * B[1] + A[1] * B[3],
        A[2] * B[0] + A[3] * B[2],
        A[2] * B[1] + A[3] * B[3],
    )


def _step(M, c, d, quotients):
    q, r = poly_divmod(c, d)
    quotients.append(q)
    return (M[2], M[3], M[0] - q * M[2], M[1] - q * M[3]), d, r


def _hgcd(a: FpPoly, b: FpPoly, quotients: list):
    """Half-gcd on deg a = n > deg b.

    Returns M with (c, d) = M (a, b) the consecutive remainders satisfying
    deg c >= ceil(n/2) > deg d, and appends the quotients used.
    """
    F = a.field
    n = a.degree
    m = (n + 1) // 2
    M = _identity(F)
    if b.degree < m:
        return M
    if n < HGCD_CUTOFF:
        c, d = a, b
        while d.degree >= m:
            M, c, d = _step(M, c, d, quotients)
        return M
    M1 = _hgcd(a.shift(-m), b.shift(-m), quotients)
    c, d = _apply(M1, a, b)
    if d.degree < m:
        return M1
    M, c, d = _step(M1, c, d, quotients)
    if d.degree < m:
        return M
    k = 2 * m - c.degree
    M2 = _hgcd(c.shift(-k), d.shift(-k), quotients)
    return _matmul(M2, M)


def eea_fast(R0: FpPoly, R1: FpPoly, t: int) -> EeaOutput:
    """Same output as ``eea_slow`` through the half-gcd recursion.

    The recursion runs to the index j* with deg R_(j*-1) > t >= deg R_(j*);
    if deg R_(j*) = t one more division step finishes the job.
    """
    _check_eea_inputs(R0, R1, t)
    F = R0.field
    quotients = []
    if R1.degree <= t:
        M, c, d = _identity(F), R0, R1
    else:
        # quotients of (R0, R1) down to degree t+1 only depend on these windows
        M = _hgcd(R0.shift(-2), R1.shift(-2), quotients)
        c, d = _apply(M, R0, R1)
    if d.degree == t:
        M, c, d = _step(M, c, d, quotients)
    out = EeaOutput(M[2], M[3], d, 1 + len(quotients), tuple(quotients))
    _check_bezout(R0, R1, out)
    return out
