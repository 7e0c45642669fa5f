"""Statevector simulation of the DQI pipeline at desk scale.

The pipeline is simulated from the closed form of the trimmed error state
    sum_k sum_{|y|=k} w_k / sqrt(C(m,k)) * beta_y |y>,
followed by the syndrome map y -> B^T y and an inverse Fourier transform on
every qudit. Sets are stored as a boolean membership table of shape (m, p).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.stats import binom

from .errors import (
    BudgetExceeded,
    InvalidWeights,
    NormViolation,
    ShapeMismatch,
    SyndromeCollision,
)
from .field import PrimeField

DENSE_BUDGET = 1 << 24
ENUM_BUDGET = 10**7

TOL_EXPECTATION = 1e-8
TOL_UNITARY = 1e-10
TOL_ALGEBRA = 1e-12


@dataclass(frozen=True)
class WeightSpec:
    m: int
    ell: int
    c: float | None
    q: float
    w_prime: np.ndarray = dc_field(repr=False)
    epsilon: float = 0.0
    w: np.ndarray = dc_field(repr=False, default=None)
    warnings: tuple = ()


def regime_warnings(m: int, ell: int, c: float | None) -> tuple:
    out = []
    if c is not None and ell < 4 * m ** (0.5 + c):
        out.append(f"ell={ell} below 4 m^(1/2+c) = {4 * m ** (0.5 + c):.3f}")
    if 2 * ell > m:
        out.append(f"ell={ell} above m/2 = {m / 2}")
    return tuple(out)


def weights_from_q(m: int, ell: int, q: float, c: float | None = None) -> WeightSpec:
    """Binomial(m, q) amplitudes truncated to weights 0..ell and renormalized."""
    if not 0 < q < 1:
        raise InvalidWeights(f"binomial parameter q={q} must lie in (0, 1)")
    if not 0 <= ell <= m:
        raise InvalidWeights(f"need 0 <= ell <= m, got ell={ell}, m={m}")
    k = np.arange(m + 1)
    w_prime = np.sqrt(binom.pmf(k, m, q))
    epsilon = float(binom.sf(ell, m, q))
    head = w_prime[: ell + 1]
    w = head / math.sqrt(float(np.sum(head**2)))
    return WeightSpec(m, ell, c, q, w_prime, epsilon, w, regime_warnings(m, ell, c))


def make_weights(m: int, ell: int, c: float) -> WeightSpec:
    """Weights with q = ell/m - m^(-1/2 + c).

    Leaving the proven regime 4 m^(1/2+c) <= ell <= m/2 only adds warnings;
    a q outside (0, 1) has no binomial law and raises InvalidWeights.
    """
    q = ell / m - m ** (-0.5 + c)
    return weights_from_q(m, ell, q, c)


def explicit_weights(w) -> WeightSpec:
    w = np.asarray(w, dtype=float)
    if abs(float(np.sum(w**2)) - 1) > 1e-9:
        raise NormViolation("weights must have unit norm")
    return WeightSpec(0, len(w) - 1, None, float("nan"), np.zeros(0), 0.0, w, ())


@dataclass(frozen=True, eq=False)
class MaxLinsatInstance:
    """Constraints b_i . x in S_i for i = 1..m over F_p^n.

    ``B`` has shape (m, n) with row i-1 holding b_i; ``member[i-1, z]`` says
    whether z is in S_i. ``vandermonde`` marks B as a Reed-Solomon parity
    check, whose dual distance is n + 1.
    """

    field: PrimeField
    B: np.ndarray
    member: np.ndarray
    vandermonde: bool = False

    @classmethod
    def from_sets(cls, field, B, sets, vandermonde=False):
        B = np.asarray(B, dtype=np.int64) % field.p
        member = np.zeros((B.shape[0], field.p), dtype=bool)
        for i, S in enumerate(sets):
            member[i, [int(z) % field.p for z in S]] = True
        if len(sets) != B.shape[0]:
            raise ShapeMismatch("need one set per row of B")
        B.setflags(write=False)
        member.setflags(write=False)
        return cls(field, B, member, vandermonde)

    @property
    def p(self):
        return self.field.p

    @property
    def m(self):
        return self.B.shape[0]

    @property
    def n(self):
        return self.B.shape[1]

    @property
    def set_sizes(self):
        return self.member.sum(axis=1)

    @property
    def r(self):
        sizes = self.set_sizes
        return int(sizes[0]) if np.all(sizes == sizes[0]) else None

    def sets(self):
        return [tuple(np.flatnonzero(row).tolist()) for row in self.member]

    @property
    def d_perp(self):
        return self.n + 1 if self.vandermonde else None


def default_ell(instance: MaxLinsatInstance) -> int:
    """min(floor(d/2) - 1, floor(m (1 - r/p))) with d the dual distance."""
    d = instance.d_perp
    if d is None:
        raise ValueError("the dual distance is only known for Vandermonde instances; pass ell")
    r = instance.r
    if r is None:
        raise ValueError("sets have different sizes")
    return max(0, min(d // 2 - 1, (instance.m * (instance.p - r)) // instance.p))


def g_table(instance: MaxLinsatInstance):
    """Row i holds g_i(z) = (f_i(z) - r_i/p) normalized; shape (m, p)."""
    p = instance.p
    r = instance.set_sizes[:, None].astype(float)
    inside = np.sqrt(p - r) / np.sqrt(p * r)
    outside = -np.sqrt(r) / np.sqrt(p * (p - r))
    return np.where(instance.member, inside, outside)


def g_hat_table(instance: MaxLinsatInstance):
    """Unitary transform g^_i(z) = p^(-1/2) sum_z' omega^(z z') g_i(z')."""
    return np.fft.ifft(g_table(instance), axis=1, norm="ortho")


def beta_coefficient(instance: MaxLinsatInstance, y, g_hat=None) -> complex:
    """Product of g^_i(y_i) over the nonzero coordinates of y (entry i-1 is y_i)."""
    g_hat = g_hat_table(instance) if g_hat is None else g_hat
    y = np.asarray(y, dtype=np.int64) % instance.p
    nz = np.flatnonzero(y)
    return complex(np.prod(g_hat[nz, y[nz]])) if len(nz) else 1.0 + 0j


@dataclass(frozen=True, eq=False)
class SparseErrorState:
    """Amplitudes over errors of weight <= ell.

    Entry j has nonzero positions ``positions[j, :w]`` (0-based, padded with
    -1) carrying ``values[j, :w]``.
    """

    m: int
    p: int
    positions: np.ndarray
    values: np.ndarray
    amplitudes: np.ndarray
    success_probability: float = 1.0

    def __len__(self):
        return len(self.amplitudes)

    def errors(self):
        """Dense (N, m) array of error vectors; only for small states."""
        out = np.zeros((len(self), self.m), dtype=np.int64)
        rows, cols = np.nonzero(self.positions >= 0)
        out[rows, self.positions[rows, cols]] = self.values[rows, cols]
        return out

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


def enumeration_size(m: int, p: int, ell: int) -> int:
    return sum(math.comb(m, k) * (p - 1) ** k for k in range(ell + 1))


def build_phi3(instance: MaxLinsatInstance, weights: WeightSpec, budget: int = ENUM_BUDGET):
    """Trimmed error superposition sum_k w_k/sqrt(C(m,k)) sum_{|y|=k} beta_y |y>."""
    m, p = instance.m, instance.p
    ell = weights.ell
    size = enumeration_size(m, p, ell)
    if size > budget:
        raise BudgetExceeded("error enumeration", size, budget)
    g_hat = g_hat_table(instance)
    width = max(ell, 1)
    positions = np.full((size, width), -1, dtype=np.int64)
    values = np.zeros((size, width), dtype=np.int64)
    amps = np.zeros(size, dtype=complex)
    amps[0] = weights.w[0]
    row = 1
    for k in range(1, ell + 1):
        vals = np.array(list(itertools.product(range(1, p), repeat=k)), dtype=np.int64)
        scale = weights.w[k] / math.sqrt(math.comb(m, k))
        for support in itertools.combinations(range(m), k):
            sl = slice(row, row + len(vals))
            positions[sl, :k] = support
            values[sl, :k] = vals
            amps[sl] = scale * np.prod(g_hat[np.array(support)[:, None], vals.T], axis=0)
            row += len(vals)
    success = 1.0 - weights.epsilon
    return SparseErrorState(m, p, positions, values, amps, success)


@dataclass(frozen=True, eq=False)
class DenseQuditState:
    """Amplitudes over F_p^n, index sum_j x_j p^(n-1-j)."""

    p: int
    n: int
    amplitudes: np.ndarray

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


def _check_dense_budget(p, n, budget):
    size = p**n
    if size > budget:
        raise BudgetExceeded("dense state", size, budget)
    return size


def syndromes_of(instance: MaxLinsatInstance, state: SparseErrorState):
    """B^T y for every error in the state, shape (N, n)."""
    p = instance.p
    out = np.zeros((len(state), instance.n), dtype=np.int64)
    for j in range(state.positions.shape[1]):
        pos = state.positions[:, j]
        live = pos >= 0
        out[live] = (out[live] + state.values[live, j, None] * instance.B[pos[live]]) % p
    return out


def flat_index(digits, p):
    n = digits.shape[-1]
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return digits @ weights


def syndrome_map(instance: MaxLinsatInstance, state: SparseErrorState, budget: int = DENSE_BUDGET):
    p, n = instance.p, instance.n
    size = _check_dense_budget(p, n, budget)
    idx = flat_index(syndromes_of(instance, state), p)
    uniq, counts = np.unique(idx, return_counts=True)
    if len(uniq) != len(idx):
        raise SyndromeCollision(
            f"{int(np.sum(counts > 1))} syndromes are shared by distinct low-weight errors"
        )
    amps = np.zeros(size, dtype=complex)
    amps[idx] = state.amplitudes
    return DenseQuditState(p, n, amps)


def _per_qudit(state: DenseQuditState, fn):
    p, n = state.p, state.n
    if state.amplitudes.shape != (p**n,):
        raise ShapeMismatch(f"expected {p}^{n} amplitudes, got {state.amplitudes.shape}")
    a = state.amplitudes.reshape((p,) * n) if n else state.amplitudes
    for axis in range(n):
        a = fn(a, axis=axis, norm="ortho")
    return DenseQuditState(p, n, a.reshape(-1))


def inverse_qft_per_qudit(state: DenseQuditState) -> DenseQuditState:
    """Apply F_p^{-1}: |j> -> p^(-1/2) sum_k omega^(-jk) |k> on every qudit."""
    return _per_qudit(state, np.fft.fft)


def qft_per_qudit(state: DenseQuditState) -> DenseQuditState:
    return _per_qudit(state, np.fft.ifft)


def objective(instance: MaxLinsatInstance, x) -> int:
    x = np.asarray(x, dtype=np.int64) % instance.p
    vals = instance.B @ x % instance.p
    return int(instance.member[np.arange(instance.m), vals].sum())


def all_points(p: int, n: int, start: int = 0, stop: int | None = None):
    """Rows of F_p^n in index order, for the index range [start, stop)."""
    stop = p**n if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((len(idx), n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        digits[:, j] = idx % p
        idx //= p
    return digits


def objective_table(instance: MaxLinsatInstance, budget: int = DENSE_BUDGET, chunk: int = 1 << 16):
    """f(x) for every x in F_p^n, in flat index order."""
    p, n, m = instance.p, instance.n, instance.m
    size = _check_dense_budget(p, n, budget)
    out = np.zeros(size, dtype=np.int64)
    rows = np.arange(m)
    Bt = instance.B.T
    for start in range(0, size, chunk):
        X = all_points(p, n, start, min(size, start + chunk))
        vals = X @ Bt % p
        out[start:start + len(X)] = instance.member[rows, vals].sum(axis=1)
    return out


def expected_objective_statevector(instance, state: DenseQuditState, budget: int = DENSE_BUDGET) -> float:
    f = objective_table(instance, budget)
    return float(np.dot(state.probabilities(), f))


def expectation_formula(m: int, r: int, p: int, w) -> float:
    """m r/p + (p-2r)/p sum k|w_k|^2 + 2 sqrt(r(p-r))/p sum Re(w_k* w_(k+1)) sqrt((k+1)(m-k))."""
    w = np.asarray(w)
    k = np.arange(len(w))
    first = m * r / p
    second = (p - 2 * r) / p * float(np.sum(k * np.abs(w) ** 2))
    kk = k[:-1]
    cross = np.real(np.conj(w[:-1]) * w[1:]) * np.sqrt((kk + 1) * (m - kk))
    third = 2 * math.sqrt(r * (p - r)) / p * float(np.sum(cross))
    return first + second + third


def expected_objective_formula(instance: MaxLinsatInstance, weights: WeightSpec) -> float:
    r = instance.r
    if r is None:
        raise ValueError("the closed form needs equal set sizes")
    w = weights.w
    if abs(float(np.sum(np.abs(w) ** 2)) - 1) > 1e-9:
        raise NormViolation("weights must have unit norm")
    return expectation_formula(instance.m, r, instance.p, w)


def run_pipeline(instance, weights, enum_budget=ENUM_BUDGET, dense_budget=DENSE_BUDGET):
    phi3 = build_phi3(instance, weights, enum_budget)
    final = inverse_qft_per_qudit(syndrome_map(instance, phi3, dense_budget))
    return phi3, final


def sample_solutions(instance, state: DenseQuditState, shots: int, seed: int):
    """Measure the state ``shots`` times; returns (points (shots, n), objectives)."""
    rng = np.random.default_rng(seed)
    prob = state.probabilities()
    prob = prob / prob.sum()
    idx = rng.choice(len(prob), size=shots, p=prob)
    xs = np.empty((shots, state.n), dtype=np.int64)
    rest = idx.copy()
    for j in range(state.n - 1, -1, -1):
        xs[:, j] = rest % state.p
        rest //= state.p
    vals = xs @ instance.B.T % instance.p
    f = instance.member[np.arange(instance.m), vals].sum(axis=1)
    return xs, f
