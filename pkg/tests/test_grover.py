import math

import mpmath
import numpy as np
import pytest

from fastdqi.errors import DegenerateSet, LengthMismatch, NotBalanced
from fastdqi.field import make_field
from fastdqi.grover import (
    apply_diffusion,
    apply_oracle_rotation,
    approx_overlap,
    approx_pipeline_bound,
    approx_pipeline_distance,
    compute_angles,
    g_state_approx,
    g_state_direct,
    g_state_exact_grover,
    uniform_state,
)


def random_state(rng, p):
    v = rng.normal(size=p) + 1j * rng.normal(size=p)
    return v / np.linalg.norm(v)


def test_balanced_angles():
    for p in (11, 31, 101):
        a = compute_angles((p - 1) // 2, p)
        assert a.tau == 1
        assert math.sin(a.beta) == pytest.approx(1 / p, abs=1e-14)
        assert a.psi == pytest.approx(math.acos(1 / math.sqrt(p**2 - 1)), abs=1e-12)
        assert a.phi == pytest.approx(math.acos(-1 / (p**2 - 1)), abs=1e-12)


def test_half_and_small_rho():
    a = compute_angles(5, 10)
    assert a.theta == pytest.approx(math.pi / 4) and a.tau == 1 and a.beta == 0.0
    assert compute_angles(1, 100).tau == 7 == math.floor(math.pi / (4 * math.asin(0.1)))


def test_angle_ranges():
    for p in (5, 7, 11, 13, 101):
        for r in range(1, p):
            a = compute_angles(r, p)
            assert a.rho <= 0.5
            assert 0 < a.theta <= math.pi / 4
            assert 0 <= a.beta < 2 * a.theta + 1e-15
            assert math.pi / 2 - 1e-12 <= a.phi < math.pi
            assert 0 < a.psi <= math.pi / 2 + 1e-12
            assert a.mirrored == (2 * r > p)


def test_degenerate_sets():
    with pytest.raises(DegenerateSet):
        compute_angles(0, 7)
    with pytest.raises(DegenerateSet):
        compute_angles(7, 7)
    with pytest.raises(DegenerateSet):
        g_state_direct(7, [])
    with pytest.raises(DegenerateSet):
        g_state_exact_grover(7, range(7))


def test_diffusion(rng):
    p = 17
    u = uniform_state(p)
    assert np.allclose(apply_diffusion(u, 0.7), u, atol=1e-14)
    v = random_state(rng, p)
    v -= np.vdot(u, v) * u
    assert np.allclose(apply_diffusion(v, 0.7), np.exp(0.7j) * v, atol=1e-14)
    for _ in range(10):
        x = random_state(rng, p)
        assert np.linalg.norm(apply_diffusion(x, 1.234)) == pytest.approx(1, abs=1e-12)
    with pytest.raises(LengthMismatch):
        apply_diffusion(np.ones((2, 2)), 1.0)


def test_diffusion_pi_is_grover_reflection(rng):
    p = 31
    u = uniform_state(p)
    reflect = 2 * np.outer(u, u.conj()) - np.eye(p)
    for _ in range(10):
        x = random_state(rng, p)
        assert np.allclose(apply_diffusion(x, math.pi), reflect @ x, atol=1e-12)


def test_oracle_rotation(rng):
    p = 13
    S = [1, 4, 5]
    x = random_state(rng, p)
    assert np.allclose(apply_oracle_rotation(x, S, 0.0), x)
    flipped = apply_oracle_rotation(x, S, math.pi)
    mask = np.isin(np.arange(p), S)
    assert np.allclose(flipped[mask], -x[mask]) and np.allclose(flipped[~mask], x[~mask])
    assert np.linalg.norm(apply_oracle_rotation(x, S, 0.3)) == pytest.approx(1, abs=1e-12)
    with pytest.raises(DegenerateSet):
        apply_oracle_rotation(x, range(p), 0.3)
    with pytest.raises(LengthMismatch):
        apply_oracle_rotation(x, S, 0.3, p=11)


def test_direct_state_values(rng):
    g = g_state_direct(make_field(5), {0, 1})
    assert g[:2] == pytest.approx([math.sqrt(3 / 10)] * 2)
    assert g[2:] == pytest.approx([-math.sqrt(2 / 15)] * 3)
    assert np.linalg.norm(g) == pytest.approx(1, abs=1e-14)
    for p in (7, 31):
        S = rng.choice(p, size=int(rng.integers(1, p)), replace=False)
        g = g_state_direct(p, S)
        assert abs(g.sum()) < 1e-12 and np.linalg.norm(g) == pytest.approx(1)
    assert np.linalg.norm(g_state_direct(7, range(1, 7))) == pytest.approx(1)


def test_exact_grover_p7_every_subset():
    import itertools

    p = 7
    for r in range(1, p):
        for S in itertools.combinations(range(p), r):
            got = g_state_exact_grover(p, S)
            ref = g_state_direct(p, S)
            assert abs(np.vdot(ref, got) - 1) < 1e-10  # signed overlap, global phase included


def test_exact_grover_balanced_single_round():
    trace = []
    g_state_exact_grover(11, range(5), trace=trace)
    assert len(trace) == 2  # one full round plus the partial one


def test_two_dimensional_subspace(rng):
    for p, r in [(13, 2), (31, 3), (31, 20)]:
        S = rng.choice(p, size=r, replace=False)
        mask = np.isin(np.arange(p), S)
        if 2 * r > p:
            mask = ~mask
        basis = np.stack([uniform_state(p).real, g_state_direct(p, np.flatnonzero(mask))])
        trace = []
        g_state_exact_grover(p, S, trace=trace)
        for state in trace:
            resid = state - basis.T @ (basis.conj() @ state)
            assert np.linalg.norm(resid) < 1e-10


def test_grover_round_rotates_by_two_theta(rng):
    p, r = 31, 3
    S = rng.choice(p, size=r, replace=False)
    theta = compute_angles(r, p).theta
    u, G = uniform_state(p), g_state_direct(p, S)
    mask = np.isin(np.arange(p), S)
    state = u
    for t in range(1, 4):
        state = np.where(mask, -1.0, 1.0) * apply_diffusion(state, math.pi)
        # |zeta_t> = cos(2 t theta)|0^> - sin(2 t theta)|G>, up to the sign convention of one round
        c, s = np.vdot(u, state).real, np.vdot(G, state).real
        assert abs(c) == pytest.approx(abs(math.cos(2 * t * theta)), abs=1e-12)
        assert abs(s) == pytest.approx(abs(math.sin(2 * t * theta)), abs=1e-12)


def test_approx_state():
    for p in (11, 31, 101):
        S = range((p - 1) // 2)
        approx = g_state_approx(p, S)
        assert np.linalg.norm(approx) == pytest.approx(1)
        assert np.vdot(g_state_direct(p, S), approx).real == pytest.approx(math.sqrt(1 - 1 / p**2), abs=1e-12)
    assert np.vdot(g_state_direct(3, [0]), g_state_approx(3, [0])).real == pytest.approx(math.sqrt(8 / 9))
    assert approx_overlap(3) == pytest.approx(math.sqrt(8 / 9))
    with pytest.raises(NotBalanced):
        g_state_approx(11, range(4))


def test_pipeline_distance():
    assert approx_pipeline_distance(101, 0.0) == 0.0
    p, q = 101, 1 / 20
    with mpmath.workdps(60):
        x = 1 / mpmath.mpf(p) ** 2
        ov = (1 - mpmath.mpf(q) + mpmath.mpf(q) * mpmath.sqrt(1 - x)) ** (p - 1)
        ref = float(mpmath.sqrt(2 - 2 * ov))
    assert approx_pipeline_distance(p, q) == pytest.approx(ref, rel=1e-12)
    assert approx_pipeline_distance(p, q) <= approx_pipeline_bound(p, q)
    scaled = [approx_pipeline_distance(p, 0.5) * math.sqrt(p) for p in (101, 1009, 10007)]
    assert max(scaled) < 1 and max(scaled) / min(scaled) < 1.1
    with pytest.raises(ValueError):
        approx_pipeline_distance(11, 1.5)
