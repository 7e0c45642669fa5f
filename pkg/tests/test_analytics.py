import math

import mpmath
import numpy as np
import pytest

from fastdqi.analytics import (
    TridiagSpec,
    asymptotic_ratio,
    binomial_lower_bound,
    binomial_mode_check,
    binomial_tail_check,
    diagonal_step,
    expectation_from_weights,
    optimal_weights,
    qram_gate_counts,
    residual,
    tridiag_extremal,
    weight_profile,
)
from fastdqi.dqi_sim import expectation_formula, make_weights
from fastdqi.errors import DomainError, NormViolation, RegimeViolation


def test_asymptotic_value():
    assert asymptotic_ratio(1 / 20, 1 / 2) == pytest.approx(0.5 + math.sqrt(19) / 20, abs=1e-12)
    assert round(asymptotic_ratio(1 / 20, 1 / 2), 4) == 0.7179


def test_asymptotic_branches():
    for lam in (0.05, 0.2, 0.5):
        rho = 1 - lam
        assert asymptotic_ratio(lam, rho) == 1.0
        assert asymptotic_ratio(lam, rho - 1e-9) == pytest.approx(1.0, abs=1e-6)
        assert asymptotic_ratio(lam, min(0.99, rho + 0.01)) == 1.0
    for lam, rho in [(0.1, 0.3), (0.25, 0.4)]:
        assert asymptotic_ratio(lam, rho) == pytest.approx(asymptotic_ratio(rho, lam))
    for bad in [(0, 0.5), (0.6, 0.5), (0.2, 0), (0.2, 1)]:
        with pytest.raises(DomainError):
            asymptotic_ratio(*bad)


def test_tridiag_small_cases():
    lam, w = tridiag_extremal(TridiagSpec(10, 0, 0.3))
    assert lam == 0 and w.tolist() == [1.0]
    for d in (-0.7, 0.0, 1.3):
        spec = TridiagSpec(10, 1, d)
        a1 = math.sqrt(10)
        lam, w = tridiag_extremal(spec)
        assert lam == pytest.approx((d + math.sqrt(d * d + 4 * a1 * a1)) / 2, abs=1e-10)


def test_tridiag_matches_dense_eigensolver(rng):
    for _ in range(20):
        m = int(rng.integers(4, 300))
        ell = int(rng.integers(0, m // 2 + 1))
        spec = TridiagSpec.from_rho(m, ell, float(rng.uniform(0.05, 0.95)))
        lam, w = tridiag_extremal(spec)
        assert lam == pytest.approx(np.linalg.eigvalsh(spec.matrix()).max(), abs=1e-8 * max(1, abs(lam)))
        assert residual(spec, lam, w) <= 1e-10 * max(1.0, abs(lam))
        assert np.all(w >= 0) and np.linalg.norm(w) == pytest.approx(1, abs=1e-12)


def test_tridiag_bound_example():
    spec = TridiagSpec.from_rho(100, 20, 0.5)
    lam, _ = tridiag_extremal(spec)
    assert lam <= 2 * math.sqrt(100) + 20 * spec.d + 2 * math.sqrt(20 * 80)


def test_eigen_bound_grid():
    for m in (50, 100, 200):
        for ell in range(0, m // 2 + 1):
            for rho in np.arange(0.1, 0.95, 0.1):
                if ell / m + rho > 1 + 1e-12:
                    continue
                spec = TridiagSpec.from_rho(m, ell, float(rho))
                lam, _ = tridiag_extremal(spec)
                assert lam <= spec.eigenvalue_bound() + 1e-9


def test_quadratic_form_equals_summation_formula(rng):
    for _ in range(50):
        m = int(rng.integers(3, 80))
        ell = int(rng.integers(0, m // 2 + 1))
        p = int(rng.choice([11, 31, 101, 257]))
        r = int(rng.integers(1, p))
        w = rng.normal(size=ell + 1)
        w /= np.linalg.norm(w)
        assert expectation_from_weights(m, ell, r / p, w) == pytest.approx(expectation_formula(m, r, p, w), abs=1e-10)


def test_expectation_examples():
    assert expectation_from_weights(40, 5, 0.3, np.eye(6)[0]) == pytest.approx(0.3 * 40)
    with pytest.raises(NormViolation):
        expectation_from_weights(40, 2, 0.3, [1, 1, 1])


def test_optimal_beats_binomial():
    for m, ell, rho in [(500, 200, 0.3), (500, 200, 0.5), (2000, 500, 0.7), (500, 150, 0.1)]:
        w_opt, lam, meta = optimal_weights(m, ell, rho)
        binom = make_weights(m, ell, 0.01).w
        assert expectation_from_weights(m, ell, rho, w_opt) >= expectation_from_weights(m, ell, rho, binom)
        assert meta["operator_norm_equals_top_eigenvalue"] == (diagonal_step(rho) >= 0)


def test_lower_bound_report():
    rep = binomial_lower_bound(2000, 500, 0.5, 0.01, 0.25)
    assert rep.lower <= rep.actual <= rep.upper
    assert rep.terms["eps_prime"] == math.exp(-(2000**0.02) / 2)
    lam = 0.25
    core = (math.sqrt(lam * 0.5) + math.sqrt(0.5 * (1 - lam))) ** 2
    correction = (6 + 2 / math.sqrt(0.25)) / 2000 ** (0.5 - 0.01)
    assert rep.lower == pytest.approx(core - correction - 4 * math.exp(-(2000**0.02) / 2))


def test_lower_bound_converges():
    prev = None
    for m in (500, 2000, 8000, 32000):
        rep = binomial_lower_bound(m, m // 4, 0.5, 0.01, 0.25)
        gap = rep.asymptotic - rep.lower
        assert prev is None or gap < prev
        prev = gap


def test_lower_bound_regime():
    with pytest.raises(RegimeViolation) as info:
        binomial_lower_bound(500, 30, 0.5, 0.01, 0.05)
    assert "ell >= 4 m^(1/2+c)" in info.value.conditions
    with pytest.raises(RegimeViolation):
        binomial_lower_bound(500, 300, 0.5, 0.01, 0.25)
    with pytest.raises(RegimeViolation):
        binomial_lower_bound(2000, 500, 0.5, 0.01, 0.3)


def exact_tails(m, ell, c):
    q = mpmath.mpf(ell) / m - mpmath.mpf(m) ** (-0.5 + c)
    with mpmath.workdps(60):
        pmf = [mpmath.binomial(m, k) * q**k * (1 - q) ** (m - k) for k in range(m + 1)]
        cut = ell - 2 * mpmath.mpf(m) ** (0.5 + c)
        return float(mpmath.fsum(pmf[ell + 1:])), float(mpmath.fsum(pmf[k] for k in range(m + 1) if k < cut))


def test_tail_check_fig_params():
    rep = binomial_tail_check(500, 200, 0.01)
    up, lo = exact_tails(500, 200, 0.01)
    assert rep.upper_tail == pytest.approx(up, rel=1e-12)
    assert rep.lower_tail == pytest.approx(lo, rel=1e-12)
    assert rep.holds and rep.bound == math.exp(-(500**0.02) / 2)
    assert rep.consistency <= 1e-14


def test_tail_at_ell_equals_m():
    m = 64
    ell = m
    rep = binomial_tail_check(m, ell, 0.0)
    assert rep.upper_tail == 0.0


def test_tail_regime():
    with pytest.raises(RegimeViolation):
        binomial_tail_check(500, 50, 0.01)


def test_mode_examples():
    rep = binomial_mode_check(10, 0.5)
    # C(10, 5) is the unique largest coefficient, so the mode is 5 = ceil(5.5) - 1
    assert rep.kappa == 5 and not rep.twin_mode and rep.unimodal
    assert rep.max_mass == pytest.approx(252 / 1024)
    twin = binomial_mode_check(9, 0.5)
    assert twin.kappa == 4 and twin.twin_mode
    assert twin.max_mass == pytest.approx(126 / 512)


def test_mode_fig_params():
    q = make_weights(500, 200, 0.01).q
    rep = binomial_mode_check(500, q)
    assert rep.kappa == math.ceil(q * 501) - 1 and rep.holds


def test_mode_bound_grid():
    for m in (20, 50, 100, 500, 1000):
        for q in np.linspace(0.02, 0.98, 25):
            if not 7 <= q * (m + 7) <= m:
                with pytest.raises(RegimeViolation):
                    binomial_mode_check(m, float(q))
                continue
            rep = binomial_mode_check(m, float(q))
            pmf = [math.comb(m, k) * q**k * (1 - q) ** (m - k) for k in range(m + 1)]
            assert rep.max_mass == pytest.approx(max(pmf), rel=1e-10)
            assert rep.holds and rep.max_mass < rep.bound


def test_mode_outside_precondition_still_checks_unimodality():
    with pytest.raises(RegimeViolation) as info:
        binomial_mode_check(10, 0.05)
    assert info.value.conditions["report"].unimodal


def test_gate_counts():
    c = qram_gate_counts(8)
    assert c["linear"]["fredkin"] == 22 and c["linear"]["ancilla"] == 8
    assert (c["log"]["fredkin"], c["log"]["toffoli"], c["log"]["cnot"], c["log"]["ancilla"]) == (8, 24, 4, 3)
    assert qram_gate_counts(2)["linear"]["fredkin"] == 4 and qram_gate_counts(2)["log"] is None
    assert qram_gate_counts(6)["log"] is None
    with pytest.raises(DomainError):
        qram_gate_counts(1)


def test_weight_profile():
    rows = weight_profile(500, 200, 0.01)
    assert len(rows) == 501
    assert sum(r["binomial_mass"] for r in rows) == pytest.approx(1, abs=1e-12)
    assert sum(r["truncated_mass"] for r in rows) == pytest.approx(1, abs=1e-12)
    flat = [r["k"] for r in rows if r["flat_mass"] > 0]
    assert flat == list(range(200 - 15 + 1, 201)) and sum(r["flat_mass"] for r in rows) == pytest.approx(1)
    assert all(r["overshoot"] == (r["k"] > 200) for r in rows)
