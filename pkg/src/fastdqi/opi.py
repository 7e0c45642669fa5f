"""Optimal polynomial intersection: instances, objective, reduction and baseline.

An instance fixes a degree bound n and a target set T_z for every z in F_p*.
A candidate is the coefficient vector x_0..x_(n-1) of X(z) = sum x_j z^j,
scored by the number of z with X(z) in T_z.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dqi_sim import MaxLinsatInstance
from .errors import ContractViolation, DuplicateNode, InvalidProfile, LengthMismatch
from .field import PrimeField, make_field
from .ntt import gamma_plan, mulmod, ntt, powers

# sets are sampled for this many z at a time to bound memory
_SAMPLE_ROWS = 256


def canonical_n(p: int) -> int:
    return p // 10 + 1


def canonical_r(p: int) -> int:
    return p // 2


@dataclass(frozen=True, eq=False)
class OpiInstance:
    """``sets[z - 1]`` is the sorted target set T_z."""

    field: PrimeField
    n: int
    sets: tuple

    def __post_init__(self):
        p = self.field.p
        if not 1 <= self.n < p:
            raise ContractViolation(f"need 1 <= n < p, got n={self.n}")
        if len(self.sets) != p - 1:
            raise LengthMismatch(f"need one set per z in F_p*, got {len(self.sets)}")

    @property
    def p(self):
        return self.field.p

    @property
    def m(self):
        return self.field.p - 1

    @property
    def set_sizes(self):
        return np.array([len(s) for s in self.sets])

    @property
    def canonical(self) -> bool:
        p = self.p
        return self.n == canonical_n(p) and bool(np.all(self.set_sizes == canonical_r(p)))

    @cached_property
    def member(self):
        """Boolean table, row z-1 flags the elements of T_z."""
        p = self.p
        table = np.zeros((p - 1, p), dtype=bool)
        for z, T in enumerate(self.sets):
            table[z, list(T)] = True
        table.setflags(write=False)
        return table

    def __eq__(self, other):
        if not isinstance(other, OpiInstance):
            return NotImplemented
        return (self.field == other.field and self.n == other.n
                and all(tuple(a) == tuple(b) for a, b in zip(self.sets, other.sets)))


def evaluate_all(field: PrimeField, x):
    """X(gamma^i) for i = 0..p-2 through one transform of the padded coefficients."""
    p = field.p
    x = np.asarray(x, dtype=np.int64) % p
    if len(x) > p - 1:
        raise LengthMismatch("more coefficients than evaluation points")
    padded = np.zeros(p - 1, dtype=np.int64)
    padded[: len(x)] = x
    return ntt(gamma_plan(field), padded)


def _check_poly(instance, x):
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (instance.n,):
        raise LengthMismatch(f"polynomial must have exactly n = {instance.n} coefficients")
    return x % instance.p


def f_opi(instance: OpiInstance, x) -> int:
    x = _check_poly(instance, x)
    F = instance.field
    z = powers(F.gamma, F.p - 1, F.p)  # z = gamma^i
    values = evaluate_all(F, x)
    return int(instance.member[z - 1, values].sum())


def f_opi_horner(instance: OpiInstance, x) -> int:
    """Same count by evaluating X at every z with Horner's rule."""
    x = _check_poly(instance, x).tolist()
    p = instance.p
    count = 0
    for z in range(1, p):
        acc = 0
        for c in reversed(x):
            acc = (acc * z + c) % p
        count += instance.member[z - 1, acc]
    return int(count)


def reduce_to_maxlinsat(instance: OpiInstance) -> MaxLinsatInstance:
    """m = p-1 constraints with b_i = (gamma^(ij))_j and S_i = T_(gamma^i)."""
    F = instance.field
    p, n = F.p, instance.n
    g = powers(F.gamma, p - 1, p)
    rows = np.arange(1, p)
    B = np.empty((p - 1, n), dtype=np.int64)
    for j in range(n):
        B[:, j] = g[(rows * j) % (p - 1)]
    z = g[rows % (p - 1)]  # gamma^i for i = 1..p-1
    member = np.ascontiguousarray(instance.member[z - 1])
    B.setflags(write=False)
    member.setflags(write=False)
    return MaxLinsatInstance(F, B, member, vandermonde=True)


def _parse_profile(p, profile):
    if profile == "canonical":
        return canonical_n(p), canonical_r(p)
    if isinstance(profile, dict):
        profile = ("custom", profile.get("n"), profile.get("r"))
    if isinstance(profile, (tuple, list)) and len(profile) == 3 and profile[0] == "custom":
        n, r = profile[1], profile[2]
        if isinstance(n, int) and isinstance(r, int) and 1 <= n < p and 1 <= r <= p - 1:
            return n, r
    raise InvalidProfile(f"unknown or invalid profile {profile!r}")


def random_instance(p: int, profile="canonical", seed: int = 0) -> OpiInstance:
    """Independent uniform r-subsets T_z by a partial Fisher-Yates shuffle."""
    F = make_field(p)
    n, r = _parse_profile(p, profile)
    rng = np.random.default_rng(seed)
    sets = []
    for start in range(0, p - 1, _SAMPLE_ROWS):
        rows = min(_SAMPLE_ROWS, p - 1 - start)
        perm = np.tile(np.arange(p, dtype=np.int64), (rows, 1))
        idx = np.arange(rows)
        for i in range(r):
            j = rng.integers(i, p, size=rows)
            perm[idx, i], perm[idx, j] = perm[idx, j], perm[idx, i].copy()
        sets.extend(tuple(sorted(row[:r].tolist())) for row in perm)
    return OpiInstance(F, n, tuple(sets))


def interpolate(field: PrimeField, points):
    """Coefficients (ascending, length len(points)) of the Lagrange interpolant."""
    p = field.p
    zs = [int(z) % p for z, _ in points]
    vs = [int(v) % p for _, v in points]
    if len(set(zs)) != len(zs):
        raise DuplicateNode("interpolation nodes must be distinct")
    n = len(zs)
    master = np.zeros(n + 1, dtype=np.int64)
    master[0] = 1
    for z in zs:  # multiply by (x - z)
        shifted = np.concatenate([[0], master[:-1]])
        master = (shifted - mulmod(master, z, p)) % p
    out = np.zeros(n, dtype=np.int64)
    for z, v in zip(zs, vs):
        # synthetic division of master by (x - z)
        q = np.zeros(n, dtype=np.int64)
        acc = 0
        for k in range(n, 0, -1):
            acc = (int(master[k]) + acc * z) % p
            q[k - 1] = acc
        denom = 0
        for c in reversed(q.tolist()):
            denom = (denom * z + c) % p
        scale = v * pow(denom, -1, p) % p
        out = (out + mulmod(q, scale, p)) % p
    return out


def truncation_heuristic(instance: OpiInstance, seed: int):
    """Interpolate through n random points (z, t_z) with t_z drawn from T_z."""
    rng = np.random.default_rng(seed)
    p, n = instance.p, instance.n
    zs = rng.choice(np.arange(1, p), size=n, replace=False)
    pts = []
    for z in zs.tolist():
        T = instance.sets[z - 1]
        pts.append((z, T[int(rng.integers(len(T)))] if len(T) else 0))
    x = interpolate(instance.field, pts)
    return x, f_opi(instance, x)


def heuristic_expectation(n: int, p: int, r: int) -> float:
    """n + (m - n) r / p with m = p - 1."""
    return n + (p - 1 - n) * r / p


def instance_to_json(instance: OpiInstance) -> dict:
    return {
        "p": instance.p,
        "gamma": instance.field.gamma,
        "n": instance.n,
        "sets": [sorted(int(v) for v in T) for T in instance.sets],
    }


def instance_from_json(doc: dict) -> OpiInstance:
    try:
        p, gamma, n, sets = int(doc["p"]), int(doc["gamma"]), int(doc["n"]), doc["sets"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ContractViolation(f"malformed instance document: {exc}") from exc
    F = make_field(p, gamma)
    clean = []
    for T in sets:
        T = [int(v) for v in T]
        if T != sorted(set(T)) or any(not 0 <= v < p for v in T):
            raise ContractViolation("each set must be a sorted list of distinct residues")
        clean.append(tuple(T))
    return OpiInstance(F, n, tuple(clean))


def save_instance(instance: OpiInstance, path) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_json(instance), fh)


def load_instance(path) -> OpiInstance:
    with open(path) as fh:
        return instance_from_json(json.load(fh))
