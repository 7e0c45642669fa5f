"""Acceptance criteria. Each test prints one ACCEPTANCE line, then asserts."""

import itertools
import math
import time

import numpy as np
import pytest

from conftest import naive_dft
from fastdqi import analytics, cli, dqi_sim, grover, opi
from fastdqi.field import make_field
from fastdqi.ntt import get_plan, ntt
from fastdqi.polyseries import FpPoly, eea_fast, eea_slow
from fastdqi.rsdecode import RsCode, decode_fast, decode_naive, syndrome_from_error


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'} {title}: {detail}")
        assert ok, detail

    return emit


def random_error(rng, p, w):
    y = np.zeros(p - 1, dtype=np.int64)
    pos = rng.choice(p - 1, size=w, replace=False)
    y[pos] = rng.integers(1, p, size=w)
    return y


def test_01_expectation_identity(report, rng):
    start = time.perf_counter()
    worst = 0.0
    for family in range(20):
        inst = opi.reduce_to_maxlinsat(opi.random_instance(11, ("custom", 3, 5), 1000 + family))
        assert (inst.m, inst.n, inst.r, dqi_sim.default_ell(inst)) == (10, 3, 5, 1)
        w = rng.normal(size=2)
        weights = dqi_sim.explicit_weights(w / np.linalg.norm(w))
        _, final = dqi_sim.run_pipeline(inst, weights)
        diff = abs(dqi_sim.expected_objective_formula(inst, weights)
                   - dqi_sim.expected_objective_statevector(inst, final))
        worst = max(worst, diff)
    elapsed = time.perf_counter() - start
    report(1, "closed-form expectation vs statevector", worst <= 1e-8 and elapsed < 10,
           f"max |diff| = {worst:.2e} over 20 families in {elapsed:.2f} s")


def test_02_asymptotic_ratio(report):
    value = analytics.asymptotic_ratio(1 / 20, 1 / 2)
    diff = abs(value - (0.5 + math.sqrt(19) / 20))
    report(2, "asymptotic ratio at (1/20, 1/2)", diff <= 1e-12, f"{value:.12f}, error {diff:.1e}")


def test_03_exact_grover(report):
    start = time.perf_counter()
    worst = 0.0
    cases = 0
    for p in (5, 7, 11, 13):
        for r in range(1, p):
            for S in itertools.islice(itertools.combinations(range(p), r), 50):
                overlap = np.vdot(grover.g_state_direct(p, S), grover.g_state_exact_grover(p, S))
                worst = max(worst, abs(overlap - 1))
                cases += 1
    elapsed = time.perf_counter() - start
    report(3, "exact Grover state preparation", worst <= 1e-10 and elapsed < 5,
           f"max |<G|G'> - 1| = {worst:.1e} over {cases} sets in {elapsed:.2f} s")


def test_04_balanced_approximation(report):
    worst = 0.0
    bound_ok = True
    for p in (11, 101, 1009):
        S = range((p - 1) // 2)
        ov = np.vdot(grover.g_state_direct(p, S), grover.g_state_approx(p, S)).real
        worst = max(worst, abs(ov - math.sqrt(1 - 1 / p**2)))
        for q in (0.01, 0.1, 0.5, 0.9):
            bound = math.sqrt(2 * q * p * (1 - math.sqrt(1 - 1 / p**2)))
            bound_ok &= grover.approx_pipeline_distance(p, q) <= bound * (1 + 1e-12)
    report(4, "balanced one-call approximation", worst <= 1e-12 and bound_ok,
           f"overlap error {worst:.1e}, distance bound holds: {bound_ok}")


def test_05_rs_decoding(report, rng):
    code = RsCode(make_field(11), 4)
    exhaustive_fail = 0
    count = 0
    for w in range(3):
        for pos in itertools.combinations(range(10), w):
            for vals in itertools.product(range(1, 11), repeat=w):
                y = np.zeros(10, dtype=np.int64)
                y[list(pos)] = vals
                exhaustive_fail += not np.array_equal(decode_fast(code, syndrome_from_error(code, y)), y)
                count += 1
    big = RsCode(make_field(65537), 2000, 1000)
    big_fail = 0
    for _ in range(50):
        y = random_error(rng, 65537, 1000)
        big_fail += not np.array_equal(decode_fast(big, syndrome_from_error(big, y)), y)
    agree_fail = 0
    for _ in range(300):
        p = int(rng.choice([11, 13, 31, 97, 193, 257]))
        small = RsCode(make_field(p), int(rng.integers(2, min(p - 2, 60) + 1)))
        y = random_error(rng, p, int(rng.integers(0, small.t + 1)))
        s = syndrome_from_error(small, y)
        agree_fail += not np.array_equal(decode_fast(small, s), decode_naive(small, s))
    ok = exhaustive_fail == big_fail == agree_fail == 0
    report(5, "Reed-Solomon syndrome decoding", ok,
           f"exhaustive {count} errors: {exhaustive_fail} failures; p=65537 t=1000: {big_fail}/50; "
           f"fast vs naive: {agree_fail}/300 disagreements")


def test_06_near_linear_decoding(report):
    primes = cli.DEFAULT_BENCH_PRIMES
    rows, fit = cli.decode_bench(primes, "sixteenth", trials=3, seed=0, naive_max_p=12289)
    failures = sum(r["fast_failures"] + (r["naive_failures"] or 0) for r in rows)
    span = primes[-1] / primes[0]
    ok = (failures == 0 and span >= 256 and fit["fast_exponent"] < 1.5
          and fit["ratio_at_largest_common_p"] > 10)
    report(6, "near-linear fast decoder", ok,
           f"p {primes[0]}..{primes[-1]} ({span:.0f}x): fast exponent {fit['fast_exponent']:.2f}, "
           f"naive exponent {fit['naive_exponent']:.2f}, naive/fast at p=12289 "
           f"{fit['ratio_at_largest_common_p']:.1f}x, failures {failures}")


def test_07_ntt_exact(report, rng):
    configs = [(59, 29), (59, 58), (97, 96), (167, 83), (257, 256), (193, 64)]
    mismatches = 0
    for p, order in configs:
        F = make_field(p)
        plan = get_plan(F, F.root_of_order(order))
        xs = rng.integers(0, p, size=(200, order))
        got = ntt(plan, xs)
        for x, g in zip(xs, got):
            mismatches += g.tolist() != naive_dft(x, plan.beta, p)
    rader = get_plan(make_field(59), make_field(59).root_of_order(29)).stage_tree()[-1][2]
    report(7, "NTT bit-exact against the direct DFT", mismatches == 0 and rader == "rader",
           f"{len(configs)} configurations x 200 inputs, {mismatches} mismatches, p=59 order 29 leaf: {rader}")


def test_08_fast_eea(report, rng):
    F = make_field(97)
    bad = bound_bad = 0
    for _ in range(500):
        t = int(rng.integers(1, 21))
        R0 = FpPoly.monomial(F, 2 * t)
        R1 = FpPoly(F, rng.integers(0, 97, size=2 * t))
        a, b = eea_slow(R0, R1, t), eea_fast(R0, R1, t)
        bad += not (a.quotients == b.quotients and a.Pj == b.Pj and a.Lj == b.Lj)
        bound_bad += not (b.Pj.degree <= t - 1 and b.Lj.degree <= t)
    report(8, "fast extended Euclid", bad == bound_bad == 0,
           f"500 instances: {bad} disagreements, {bound_bad} degree-bound violations")


def test_09_binomial_sandwich(report):
    lines = []
    ok = True
    for rho in (0.3, 0.5):
        gaps = []
        for m in (500, 2000):
            for ell in sorted({math.ceil(4 * m**0.51), m // 4, m // 2}):
                rep = analytics.binomial_lower_bound(m, ell, rho, 0.01, ell / m)
                ok &= rep.lower <= rep.actual <= rep.upper
            rep = analytics.binomial_lower_bound(m, m // 4, rho, 0.01, 0.25)
            gaps.append(rep.asymptotic - rep.actual)
            lines.append(f"m={m} rho={rho}: {rep.lower:.3f} <= {rep.actual:.4f} <= {rep.upper:.4f}")
        ok &= gaps[1] < gaps[0]
    report(9, "binomial-weight sandwich", ok, "; ".join(lines))


def test_10_binomial_bounds(report):
    tails = analytics.binomial_tail_check(500, 200, 0.01)
    mode_ok = True
    points = 0
    for m in (50, 100, 500, 2000):
        for q in np.linspace(0.01, 0.99, 50):
            if 7 <= q * (m + 7) <= m:
                mode_ok &= analytics.binomial_mode_check(m, float(q)).holds
                points += 1
    report(10, "binomial tail and mode bounds", tails.holds and mode_ok,
           f"tails {tails.upper_tail:.3e}/{tails.lower_tail:.3e} <= {tails.bound:.3f}; "
           f"mode bound on {points} grid points: {mode_ok}")


def test_11_truncation_heuristic(report):
    inst = opi.random_instance(101, "canonical", 11)
    vals = np.array([opi.truncation_heuristic(inst, seed)[1] for seed in range(2000)], dtype=float)
    target = opi.heuristic_expectation(inst.n, 101, 50)
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    z = abs(vals.mean() - target) / se
    report(11, "truncation heuristic mean", z <= 3,
           f"mean {vals.mean():.3f} vs {target:.3f} ({z:.2f} SE); fraction {vals.mean() / 100:.4f}, "
           f"asymptotic 0.55")


def test_12_gate_counts(report):
    c = analytics.qram_gate_counts(8)
    ok = c["linear"]["fredkin"] == 22 and (c["log"]["fredkin"], c["log"]["toffoli"], c["log"]["cnot"]) == (8, 24, 4)
    report(12, "memory-access gate counts at M=8", ok, f"linear {c['linear']}, log {c['log']}")
