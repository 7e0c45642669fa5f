"""Narrow-sense Reed-Solomon syndromes and syndrome decoding.

Errors are length p-1 arrays whose entry ``i - 1`` holds y_i for i = 1..p-1.
The syndrome is the leading part of the gamma-transform of the right circular
shift (y_{p-1}, y_1, ..., y_{p-2}), which is the Vandermonde product
s_j = sum_i gamma^(ij) y_i.

Decoding goes through the syndrome series S = sum_k s_k x^(-k): the Euclidean
algorithm on x^(2t) and the truncated series yields P and L with S = -xP/L.
Expanding that quotient to p-1 terms gives every s_k, and an inverse
transform returns the error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ContractViolation, LengthMismatch, WeightContractViolated
from .field import PrimeField
from .ntt import gamma_plan, intt, mulmod, ntt
from .polyseries import (
    FpPoly,
    eea_fast,
    eea_slow,
    poly_rounded_div,
    rounded_div_schoolbook,
)


@dataclass(frozen=True)
class RsCode:
    field: PrimeField
    n: int
    t: int | None = None

    def __post_init__(self):
        p = self.field.p
        if not 1 <= self.n <= p - 2:
            raise ContractViolation(f"syndrome length n must lie in [1, p-2], got {self.n}")
        if self.t is None:
            object.__setattr__(self, "t", self.n // 2)
        if not 0 <= self.t or 2 * self.t > self.n:
            raise ContractViolation(f"radius t must satisfy 0 <= 2t <= n, got t={self.t}")

    @property
    def length(self):
        """Number of error coordinates, m = p - 1."""
        return self.field.p - 1

    @property
    def min_distance(self):
        return self.n + 1


def _shift_right(y):
    return np.roll(y, 1)


def _shift_left(y):
    return np.roll(y, -1)


def _as_error(code, y):
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (code.length,):
        raise LengthMismatch(f"error must have length p-1 = {code.length}, got {y.shape}")
    return y % code.field.p


def syndrome_from_error(code: RsCode, y):
    """The first n entries of the gamma-transform of the shifted error."""
    y = _as_error(code, y)
    return ntt(gamma_plan(code.field), _shift_right(y))[: code.n]


def syndrome_dense(code: RsCode, y):
    """B^T y by explicit Vandermonde rows; slow reference for tests and small codes."""
    y = _as_error(code, y)
    p, g = code.field.p, code.field.gamma
    out = []
    for j in range(code.n):
        gj = pow(g, j, p)
        acc, w = 0, gj
        for i in range(1, p):
            acc = (acc + w * int(y[i - 1])) % p
            w = w * gj % p
        out.append(acc)
    return np.array(out, dtype=np.int64)


def weight(y) -> int:
    return int(np.count_nonzero(y))


def syndrome_polys(code: RsCode, s):
    """R0 = x^(2t) and R1 = sum_{k<2t} s_k x^(2t-1-k)."""
    t = code.t
    F = code.field
    window = np.asarray(s, dtype=np.int64)[: 2 * t] % F.p
    return FpPoly.monomial(F, 2 * t), FpPoly(F, window[::-1])


def _check_syndrome(code, s):
    s = np.asarray(s, dtype=np.int64)
    if s.ndim != 1 or len(s) < 2 * code.t or len(s) > code.n:
        raise LengthMismatch(f"syndrome length must lie in [2t, n] = [{2 * code.t}, {code.n}]")
    return s % code.field.p


def _series_coeffs(window, count):
    """s_0..s_(count-1) from a window whose floor is -(count-1)."""
    if len(window.coeffs) > count:
        raise WeightContractViolated("syndrome series has positive degree")
    full = np.zeros(count, dtype=np.int64)
    full[: len(window.coeffs)] = window.coeffs
    return full[::-1]


def decode_fast(code: RsCode, s):
    """Recover the unique error of weight <= t with syndrome s."""
    s = _check_syndrome(code, s)
    if not s.any():
        return np.zeros(code.length, dtype=np.int64)
    R0, R1 = syndrome_polys(code, s)
    eea = eea_fast(R0, R1, code.t)
    plan = gamma_plan(code.field)
    return _decode_tail(code, s, eea, poly_rounded_div, lambda v: intt(plan, v))


def decode_naive(code: RsCode, s):
    """Reference decoder: step-by-step Euclid, long division and a direct transform."""
    s = _check_syndrome(code, s)
    if not s.any():
        return np.zeros(code.length, dtype=np.int64)
    R0, R1 = syndrome_polys(code, s)
    eea = eea_slow(R0, R1, code.t)
    F = code.field
    m = F.p - 1
    scale = F.inv(m)

    def inverse(v):
        return mulmod(kernels.dft(v, F.inv(F.gamma), F.p), scale, F.p)

    return _decode_tail(code, s, eea, rounded_div_schoolbook, inverse)


def _decode_tail(code, s, eea, divide, inverse):
    p = code.field.p
    if eea.Lj.is_zero() or eea.Lj.degree > code.t:
        raise WeightContractViolated("error locator degree exceeds the decoding radius")
    num = eea.Pj.shift(1).scale(-1)
    window = divide(num, eea.Lj, p - 2)
    y = _shift_left(inverse(_series_coeffs(window, p - 1)))
    if weight(y) > code.t or not np.array_equal(syndrome_from_error(code, y)[: len(s)], s):
        raise WeightContractViolated("decoded error does not reproduce the syndrome")
    return y


def error_locator(code: RsCode, s) -> FpPoly:
    """L_j from the Euclidean step; its roots are gamma^i for the error positions i."""
    s = _check_syndrome(code, s)
    R0, R1 = syndrome_polys(code, s)
    return eea_fast(R0, R1, code.t).Lj
