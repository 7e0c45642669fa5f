"""Claim-check battery run by ``fastdqi verify``.

Each check returns a (passed, detail) pair. Checks call library functions
through their modules so that a patched implementation is what gets tested.
"""

from __future__ import annotations

import math
import time
import traceback
from dataclasses import dataclass

import numpy as np

from . import analytics, dqi_sim, grover, kernels, ntt, opi, polyseries, rsdecode
from .field import make_field

LEVELS = ("fast", "full")


@dataclass(frozen=True)
class Claim:
    ident: str
    reference: str
    check: object


_REGISTRY: list[Claim] = []


def claim(ident, reference):
    def wrap(fn):
        _REGISTRY.append(Claim(ident, reference, fn))
        return fn

    return wrap


def claims():
    return list(_REGISTRY)


def _random_error(rng, p, weight):
    y = np.zeros(p - 1, dtype=np.int64)
    pos = rng.choice(p - 1, size=weight, replace=False)
    y[pos] = rng.integers(1, p, size=weight)
    return y


@claim("ntt-exact", "number-theoretic transform equals the direct DFT, including Rader leaves")
def _ntt_exact(level, rng):
    cases = [(59, 29), (97, 96), (167, 83), (257, 256)]
    if level == "full":
        cases += [(1019, 509), (65537, 65536)]
    worst = 0
    for p, order in cases:
        F = make_field(p)
        plan = ntt.get_plan(F, F.root_of_order(order))
        trials = 20 if order <= 512 else 2
        for _ in range(trials):
            x = rng.integers(0, p, size=order)
            fast = ntt.ntt(plan, x)
            if order <= 4096:
                ref = kernels.dft(x, plan.beta, p)
                worst += int(np.count_nonzero(fast != ref))
            worst += int(np.count_nonzero(ntt.intt(plan, fast) != x % p))
    return worst == 0, f"{worst} mismatched entries over {len(cases)} orders"


@claim("eea-agree", "fast extended Euclid matches the step-by-step recursion and its degree bounds")
def _eea_agree(level, rng):
    F = make_field(97)
    trials = 100 if level == "fast" else 500
    bad = 0
    for _ in range(trials):
        t = int(rng.integers(1, 21))
        R0 = polyseries.FpPoly.monomial(F, 2 * t)
        R1 = polyseries.FpPoly(F, rng.integers(0, 97, size=2 * t))
        if R1.is_zero():
            continue
        a = polyseries.eea_slow(R0, R1, t)
        b = polyseries.eea_fast(R0, R1, t)
        same = a.Pj == b.Pj and a.Lj == b.Lj and a.quotients == b.quotients
        bounds = b.Pj.degree <= t - 1 and b.Lj.degree <= t
        bad += not (same and bounds)
    return bad == 0, f"{bad} disagreements in {trials} instances"


@claim("rs-roundtrip", "syndrome decoding recovers every error of weight at most t")
def _rs_roundtrip(level, rng):
    cases = [(257, 40, 20)] if level == "fast" else [(257, 40, 40), (65537, 2000, 20)]
    bad = 0
    total = 0
    for p, n, trials in cases:
        code = rsdecode.RsCode(make_field(p), n)
        for _ in range(trials):
            y = _random_error(rng, p, int(rng.integers(0, code.t + 1)))
            s = rsdecode.syndrome_from_error(code, y)
            try:
                ok = np.array_equal(rsdecode.decode_fast(code, s), y)
            except Exception:
                ok = False
            bad += not ok
            total += 1
    return bad == 0, f"{bad} failures in {total} decodes"


@claim("rs-fast-naive", "fast and reference decoders return the same error")
def _rs_fast_naive(level, rng):
    trials = 30 if level == "fast" else 300
    bad = 0
    for _ in range(trials):
        p = int(rng.choice([11, 13, 17, 31, 97, 257]))
        n = int(rng.integers(2, min(p - 2, 20) + 1))
        code = rsdecode.RsCode(make_field(p), n)
        y = _random_error(rng, p, int(rng.integers(0, code.t + 1)))
        s = rsdecode.syndrome_from_error(code, y)
        try:
            ok = np.array_equal(rsdecode.decode_fast(code, s), rsdecode.decode_naive(code, s))
        except Exception:
            ok = False
        bad += not ok
    return bad == 0, f"{bad} disagreements in {trials} instances"


@claim("grover-exact", "exact Grover rounds prepare the single-constraint state with its phase")
def _grover_exact(level, rng):
    primes = [5, 7, 11, 13] if level == "fast" else [5, 7, 11, 13, 17, 19, 23]
    worst = 0.0
    for p in primes:
        for r in range(1, p):
            S = rng.choice(p, size=r, replace=False)
            diff = grover.g_state_exact_grover(p, S) - grover.g_state_direct(p, S)
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst <= 1e-10, f"worst amplitude error {worst:.2e}"


@claim("grover-balanced", "one-call approximation has overlap sqrt(1 - 1/p^2)")
def _grover_balanced(level, rng):
    worst = 0.0
    for p in (11, 101, 1009):
        S = rng.choice(p, size=(p - 1) // 2, replace=False)
        ov = float(np.vdot(grover.g_state_direct(p, S), grover.g_state_approx(p, S)).real)
        worst = max(worst, abs(ov - grover.approx_overlap(p)))
        for q in (0.1, 0.5, 1.0):
            if grover.approx_pipeline_distance(p, q) > grover.approx_pipeline_bound(p, q) + 1e-15:
                return False, f"pipeline distance above bound at p={p}, q={q}"
    return worst <= 1e-12, f"worst overlap error {worst:.2e}"


@claim("expectation-formula", "closed-form expected objective equals the simulated statevector value")
def _expectation(level, rng):
    families = 5 if level == "fast" else 20
    worst = 0.0
    for _ in range(families):
        inst = opi.reduce_to_maxlinsat(opi.random_instance(11, ("custom", 3, 5), int(rng.integers(2**31))))
        w = rng.random(2)
        w /= np.linalg.norm(w)
        weights = dqi_sim.explicit_weights(w)
        _, final = dqi_sim.run_pipeline(inst, weights)
        sv = dqi_sim.expected_objective_statevector(inst, final)
        worst = max(worst, abs(sv - dqi_sim.expected_objective_formula(inst, weights)))
    return worst <= 1e-8, f"worst difference {worst:.2e}"


@claim("asymptotic-value", "satisfied fraction at lambda = 1/20, rho = 1/2 is 1/2 + sqrt(19)/20")
def _asymptotic(level, rng):
    diff = abs(analytics.asymptotic_ratio(1 / 20, 1 / 2) - (0.5 + math.sqrt(19) / 20))
    return diff <= 1e-12, f"difference {diff:.2e}"


@claim("binomial-sandwich", "binomial weights sit between the finite-size lower bound and the eigenvalue bound")
def _sandwich(level, rng):
    sizes = [500, 2000] if level == "fast" else [500, 2000, 8000]
    gaps = {}
    for rho in (0.3, 0.5):
        prev = None
        for m in sizes:
            rep = analytics.binomial_lower_bound(m, m // 4, rho, 0.01, 0.25)
            if not rep.holds:
                return False, f"sandwich broken at m={m}, rho={rho}"
            gap = abs(rep.asymptotic - rep.actual)
            if prev is not None and gap >= prev:
                return False, f"gap did not shrink at m={m}, rho={rho}"
            prev = gap
            gaps[(m, rho)] = gap
    return True, "gaps " + ", ".join(f"m={m} rho={r}: {g:.4f}" for (m, r), g in gaps.items())


@claim("binomial-tails", "exact binomial tails stay below exp(-m^(2c)/2)")
def _tails(level, rng):
    rep = analytics.binomial_tail_check(500, 200, 0.01)
    return rep.holds and rep.consistency <= 1e-14, (
        f"upper {rep.upper_tail:.3e}, lower {rep.lower_tail:.3e}, bound {rep.bound:.3f}")


@claim("binomial-mode", "binomial pmf is unimodal with mode mass at most 3/sqrt(m q (1-q))")
def _mode(level, rng):
    grid = [(m, q) for m in (20, 100, 500) for q in (0.1, 0.3, 0.5, 0.7)]
    for m, q in grid:
        if not 7 <= q * (m + 7) <= m:
            continue
        if not analytics.binomial_mode_check(m, q).holds:
            return False, f"failed at m={m}, q={q}"
    return True, f"{len(grid)} grid points"


@claim("eigen-bound", "top eigenvalue of the tridiagonal operator obeys the closed-form bound")
def _eigen(level, rng):
    sizes = (50, 100) if level == "fast" else (50, 100, 200)
    for m in sizes:
        for ell in range(0, m // 2 + 1, 5):
            for rho in np.arange(0.1, 0.95, 0.1):
                if ell / m + rho > 1:
                    continue
                spec = analytics.TridiagSpec.from_rho(m, ell, float(rho))
                lam, _ = analytics.tridiag_extremal(spec)
                if lam > spec.eigenvalue_bound() + 1e-9:
                    return False, f"bound exceeded at m={m}, ell={ell}, rho={rho:.1f}"
    return True, "bound holds on the grid"


@claim("heuristic-mean", "truncation heuristic averages n + (m - n) r / p")
def _heuristic(level, rng):
    trials = 300 if level == "fast" else 2000
    inst = opi.random_instance(101, "canonical", int(rng.integers(2**31)))
    vals = np.array([opi.truncation_heuristic(inst, s)[1] for s in range(trials)], dtype=float)
    target = opi.heuristic_expectation(inst.n, 101, opi.canonical_r(101))
    se = vals.std(ddof=1) / math.sqrt(trials)
    z = abs(vals.mean() - target) / se
    return z <= 4, f"mean {vals.mean():.3f} vs {target:.3f} ({z:.2f} SE)"


@claim("gate-counts", "memory-access circuit gate counts at M = 8")
def _gates(level, rng):
    c = analytics.qram_gate_counts(8)
    ok = c["linear"]["fredkin"] == 22 and (c["log"]["fredkin"], c["log"]["toffoli"], c["log"]["cnot"]) == (8, 24, 4)
    return ok, str(c)


def run(level: str = "fast", seed: int = 0) -> dict:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    results = []
    for i, c in enumerate(_REGISTRY):
        rng = np.random.default_rng([seed, i])
        start = time.perf_counter()
        try:
            passed, detail = c.check(level, rng)
        except Exception as exc:  # a crash is a failure, not an abort
            passed, detail = False, f"{type(exc).__name__}: {exc}\n{traceback.format_exc(limit=3)}"
        results.append({
            "id": c.ident,
            "reference": c.reference,
            "passed": bool(passed),
            "detail": detail,
            "seconds": round(time.perf_counter() - start, 3),
        })
    return {
        "level": level,
        "seed": seed,
        "backend": kernels.BACKEND,
        "passed": all(r["passed"] for r in results),
        "claims": results,
    }
