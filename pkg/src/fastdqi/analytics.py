"""Closed-form performance analysis of DQI with binomial weights.

Ratios are fractions of satisfied constraints (expectation divided by m)
unless a name says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import mpmath
import numpy as np
from scipy.linalg import solve_banded

from .dqi_sim import make_weights
from .errors import DomainError, NormViolation, RegimeViolation

_MP_DPS = 50


def asymptotic_ratio(lam: float, rho: float) -> float:
    """(sqrt(lam(1-rho)) + sqrt(rho(1-lam)))^2 if rho < 1 - lam, else 1."""
    if not (0 < lam <= 0.5 and 0 < rho < 1):
        raise DomainError(f"need 0 < lambda <= 1/2 and 0 < rho < 1, got ({lam}, {rho})")
    if rho >= 1 - lam:
        return 1.0
    return (math.sqrt(lam * (1 - rho)) + math.sqrt(rho * (1 - lam))) ** 2


def diagonal_step(rho: float) -> float:
    return (1 - 2 * rho) / math.sqrt(rho * (1 - rho))


@dataclass(frozen=True)
class TridiagSpec:
    """(ell+1)x(ell+1) matrix with diagonal k*d and off-diagonal a_k = sqrt(k(m-k+1)).

    The off-diagonal entry a_k couples rows k-1 and k.
    """

    m: int
    ell: int
    d: float

    @classmethod
    def from_rho(cls, m, ell, rho):
        return cls(m, ell, diagonal_step(rho))

    @property
    def diagonal(self):
        return np.arange(self.ell + 1) * self.d

    @property
    def off_diagonal(self):
        k = np.arange(1, self.ell + 1)
        return np.sqrt(k * (self.m - k + 1.0))

    def matrix(self):
        return (np.diag(self.diagonal) + np.diag(self.off_diagonal, 1)
                + np.diag(self.off_diagonal, -1))

    def eigenvalue_bound(self) -> float:
        """2 sqrt(m) + ell d + 2 sqrt(ell (m - ell))."""
        m, ell = self.m, self.ell
        return 2 * math.sqrt(m) + ell * self.d + 2 * math.sqrt(ell * (m - ell))


def _count_below(diag, off2, x):
    """Number of eigenvalues smaller than x (Sturm sequence via LDL^T pivots)."""
    count = 0
    q = 1.0
    for k in range(len(diag)):
        q = diag[k] - x - (off2[k - 1] / q if k else 0.0)
        if q == 0.0:
            q = -1e-300
        if q < 0:
            count += 1
    return count


def tridiag_extremal(spec: TridiagSpec, tol: float = 1e-12):
    """Largest eigenvalue by Sturm bisection and its nonnegative unit eigenvector."""
    n = spec.ell + 1
    if n == 1:
        return 0.0, np.ones(1)
    diag = spec.diagonal.tolist()
    off = spec.off_diagonal
    off2 = (off**2).tolist()
    radius = np.zeros(n)
    radius[:-1] += off
    radius[1:] += off
    lo = float(np.min(spec.diagonal - radius))
    hi = float(np.max(spec.diagonal + radius))
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if _count_below(diag, off2, mid) == n:
            hi = mid
        else:
            lo = mid
    lam = 0.5 * (lo + hi)
    # inverse iteration with a shift just above the eigenvalue
    shift = lam + 1e-10 * max(1.0, abs(lam))
    bands = np.zeros((3, n))
    bands[0, 1:] = off
    bands[1] = spec.diagonal - shift
    bands[2, :-1] = off
    w = np.ones(n) / math.sqrt(n)
    for _ in range(3):
        w = solve_banded((1, 1), bands, w)
        w /= np.linalg.norm(w)
    if w[np.argmax(np.abs(w))] < 0:
        w = -w
    w = np.abs(w)  # Perron vector; any negative entries are rounding noise
    w /= np.linalg.norm(w)
    return lam, w


def tridiag_apply(spec: TridiagSpec, w):
    w = np.asarray(w, dtype=float)
    out = spec.diagonal * w
    off = spec.off_diagonal
    out[:-1] += off * w[1:]
    out[1:] += off * w[:-1]
    return out


def residual(spec: TridiagSpec, lam, w) -> float:
    return float(np.linalg.norm(tridiag_apply(spec, w) - lam * np.asarray(w)))


def expectation_from_weights(m: int, ell: int, rho: float, w) -> float:
    """rho m + sqrt(rho(1-rho)) w^T A w."""
    w = np.asarray(w, dtype=float)
    if len(w) != ell + 1:
        raise ValueError(f"need ell+1 = {ell + 1} weights, got {len(w)}")
    if abs(float(np.sum(w**2)) - 1) > 1e-9:
        raise NormViolation("weights must have unit norm")
    spec = TridiagSpec.from_rho(m, ell, rho)
    return rho * m + math.sqrt(rho * (1 - rho)) * float(w @ tridiag_apply(spec, w))


def optimal_weights(m: int, ell: int, rho: float):
    spec = TridiagSpec.from_rho(m, ell, rho)
    lam, w = tridiag_extremal(spec)
    return w, lam, {"operator_norm_equals_top_eigenvalue": spec.d >= 0}


@dataclass(frozen=True)
class BoundReport:
    """Satisfied fractions for binomial weights and the bounds around them."""

    m: int
    ell: int
    rho: float
    c: float
    lambda_star: float
    actual: float
    lower: float
    upper: float
    asymptotic: float
    terms: dict = dc_field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.lower <= self.actual <= self.upper


def _regime(m, ell, c):
    bad = {}
    if ell < 4 * m ** (0.5 + c):
        bad["ell >= 4 m^(1/2+c)"] = f"{ell} < {4 * m ** (0.5 + c):.4f}"
    if 2 * ell > m:
        bad["ell <= m/2"] = f"{ell} > {m / 2}"
    return bad


def binomial_lower_bound(m: int, ell: int, rho: float, c: float, lambda_star: float) -> BoundReport:
    """Guaranteed fraction for binomial weights, with the eigenvalue upper bound.

    lower = S - (6 + 2/sqrt(lambda*))/m^(1/2-c) - 4 exp(-m^(2c)/2),
    with S = (sqrt(lam(1-rho)) + sqrt(rho(1-lam)))^2 and lam = ell/m;
    upper = rho + sqrt(rho(1-rho)) (2 sqrt(m) + ell d + 2 sqrt(ell(m-ell))) / m.
    """
    bad = _regime(m, ell, c)
    if m < 64:
        bad["m >= 64"] = str(m)
    if ell < lambda_star * m:
        bad["ell >= lambda* m"] = f"{ell} < {lambda_star * m}"
    if not 0 < rho < 1:
        bad["0 < rho < 1"] = str(rho)
    if bad:
        raise RegimeViolation("parameters outside the proven regime", bad)
    lam = ell / m
    eps_prime = math.exp(-(m ** (2 * c)) / 2)
    core = (math.sqrt(lam * (1 - rho)) + math.sqrt(rho * (1 - lam))) ** 2
    correction = (6 + 2 / math.sqrt(lambda_star)) / m ** (0.5 - c)
    spec = TridiagSpec.from_rho(m, ell, rho)
    upper = rho + math.sqrt(rho * (1 - rho)) * spec.eigenvalue_bound() / m
    weights = make_weights(m, ell, c)
    actual = expectation_from_weights(m, ell, rho, weights.w) / m
    return BoundReport(
        m, ell, rho, c, lambda_star,
        actual=actual,
        lower=core - correction - 4 * eps_prime,
        upper=upper,
        asymptotic=asymptotic_ratio(min(lam, 0.5), rho),
        terms={
            "core": core,
            "finite_size_correction": correction,
            "eps_prime": eps_prime,
            "upper_displayed": core + 1 / (2 * math.sqrt(m)),
            "q": weights.q,
            "epsilon": weights.epsilon,
        },
    )


def _binomial_pmf_mp(m, q):
    with mpmath.workdps(_MP_DPS):
        q = mpmath.mpf(q)
        ratio = q / (1 - q)
        out = [(1 - q) ** m]
        for k in range(m):
            out.append(out[-1] * (m - k) / (k + 1) * ratio)
        return out


@dataclass(frozen=True)
class TailReport:
    upper_tail: float
    lower_tail: float
    bound: float
    upper_tail_complement: float
    lower_tail_complement: float

    @property
    def holds(self) -> bool:
        return self.upper_tail <= self.bound and self.lower_tail <= self.bound

    @property
    def consistency(self) -> float:
        return max(abs(self.upper_tail - self.upper_tail_complement),
                   abs(self.lower_tail - self.lower_tail_complement))


def binomial_tail_check(m: int, ell: int, c: float) -> TailReport:
    """Exact Pr(K > ell) and Pr(K < ell - 2 m^(1/2+c)) for K ~ Bin(m, q)."""
    if ell < 4 * m ** (0.5 + c):
        raise RegimeViolation("tail bound needs ell >= 4 m^(1/2+c)", _regime(m, ell, c))
    q = ell / m - m ** (-0.5 + c)
    pmf = _binomial_pmf_mp(m, q)
    low_cut = ell - 2 * m ** (0.5 + c)
    below = [k for k in range(m + 1) if k < low_cut]
    with mpmath.workdps(_MP_DPS):
        total = mpmath.fsum(pmf)
        up = mpmath.fsum(pmf[ell + 1:])
        up_c = total - mpmath.fsum(pmf[: ell + 1])
        lo = mpmath.fsum(pmf[k] for k in below)
        lo_c = total - mpmath.fsum(pmf[len(below):])
        return TailReport(float(up), float(lo), math.exp(-(m ** (2 * c)) / 2), float(up_c), float(lo_c))


@dataclass(frozen=True)
class ModeReport:
    kappa: int
    max_mass: float
    bound: float
    unimodal: bool
    twin_mode: bool

    @property
    def holds(self) -> bool:
        return self.unimodal and self.max_mass <= self.bound


def binomial_mode_check(m: int, q: float) -> ModeReport:
    """Mode kappa = ceil(q(m+1)) - 1, unimodality, and the 3/sqrt(m q (1-q)) mass bound.

    Unimodality is checked for any (m, q); the mass bound is only proved for
    7 <= q(m+7) <= m, and RegimeViolation is raised outside that range.
    """
    pmf = _binomial_pmf_mp(m, q)
    kappa = math.ceil(q * (m + 1)) - 1
    with mpmath.workdps(_MP_DPS):
        slack = mpmath.mpf(10) ** (-(_MP_DPS - 10))
        rising = all(pmf[k] <= pmf[k + 1] * (1 + slack) for k in range(kappa))
        falling = all(pmf[k] * (1 + slack) >= pmf[k + 1] for k in range(kappa, m))
        twin = kappa < m and abs(pmf[kappa] - pmf[kappa + 1]) <= slack * pmf[kappa]
        top = float(max(pmf))
    report = ModeReport(kappa, float(pmf[kappa]), 3 / math.sqrt(m * q * (1 - q)),
                        rising and falling and float(pmf[kappa]) == top, bool(twin))
    if not 7 <= q * (m + 7) <= m:
        raise RegimeViolation(
            "mass bound needs 7 <= q(m+7) <= m",
            {"7 <= q(m+7) <= m": f"q(m+7) = {q * (m + 7)}", "report": report},
        )
    return report


def qram_gate_counts(M: int) -> dict:
    """Gate and ancilla counts of the two memory-access circuits for M cells."""
    if not isinstance(M, int) or M < 2:
        raise DomainError(f"need an integer M >= 2, got {M!r}")
    out = {"linear": {"fredkin": 3 * M - 2, "toffoli": 0, "cnot": 0, "ancilla": M}, "log": None}
    if M >= 4 and M & (M - 1) == 0:
        out["log"] = {"fredkin": M, "toffoli": 4 * M - 8, "cnot": 4, "ancilla": (M - 1).bit_length()}
    return out


def weight_profile(m: int = 500, ell: int = 200, c: float = 0.01):
    """Per-k rows comparing binomial weights with the flat window on (ell - ceil(sqrt ell), ell]."""
    weights = make_weights(m, ell, c)
    width = math.isqrt(ell - 1) + 1 if ell > 0 else 1  # ceil(sqrt(ell))
    rows = []
    for k in range(m + 1):
        flat = 1 / width if ell - width < k <= ell else 0.0
        rows.append({
            "k": k,
            "binomial_mass": float(weights.w_prime[k] ** 2),
            "overshoot": k > ell,
            "truncated_mass": float(weights.w[k] ** 2) if k <= ell else 0.0,
            "flat_mass": flat,
        })
    return rows
