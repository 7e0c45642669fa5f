import numpy as np
import pytest

from conftest import naive_dft
from fastdqi.errors import LengthMismatch, OrderNotPrime
from fastdqi.field import is_prime, make_field
from fastdqi.ntt import (
    ExactConvolver,
    cyclic_convolve,
    gamma_plan,
    get_plan,
    intt,
    ntt,
    rader_prime_ntt,
)


def plan_for(p, order):
    F = make_field(p)
    return get_plan(F, F.root_of_order(order))


def test_delta_gives_all_ones():
    plan = gamma_plan(make_field(97))
    x = np.zeros(96, dtype=np.int64)
    x[0] = 1
    assert np.all(ntt(plan, x) == 1)
    assert np.array_equal(intt(plan, np.ones(96, dtype=np.int64)), x)


def test_constant_gives_delta():
    plan = plan_for(59, 29)
    out = ntt(plan, np.full(29, 7))
    assert out[0] == 7 * 29 % 59 and not out[1:].any()


def test_zero_roundtrip():
    plan = gamma_plan(make_field(97))
    assert not intt(plan, np.zeros(96, dtype=np.int64)).any()


def test_length_mismatch():
    plan = gamma_plan(make_field(11))
    with pytest.raises(LengthMismatch):
        ntt(plan, np.zeros(9))
    with pytest.raises(LengthMismatch):
        intt(plan, np.zeros(11))


@pytest.mark.parametrize("p,order", [(59, 29), (59, 58), (97, 96), (167, 83), (193, 192), (257, 256), (1019, 509)])
def test_matches_naive_dft(rng, p, order):
    plan = plan_for(p, order)
    trials = 200 if order <= 100 else 20
    xs = rng.integers(0, p, size=(trials, order))
    got = ntt(plan, xs)
    for x, g in zip(xs, got):
        assert g.tolist() == naive_dft(x, plan.beta, p)


def test_exact_for_every_small_prime(rng):
    for p in range(3, 400):
        if not is_prime(p):
            continue
        plan = gamma_plan(make_field(p))
        x = rng.integers(0, p, size=p - 1)
        assert ntt(plan, x).tolist() == naive_dft(x, plan.beta, p), p


def test_roundtrip_p97(rng):
    plan = gamma_plan(make_field(97))
    xs = rng.integers(0, 97, size=(100, 96))
    assert np.array_equal(intt(plan, ntt(plan, xs)), xs)


def test_linearity(rng):
    p = 65537
    plan = gamma_plan(make_field(p))
    a, b = rng.integers(0, p, size=(2, p - 1))
    c = 12345
    lhs = ntt(plan, (a + c * b) % p)
    rhs = (ntt(plan, a) + c * ntt(plan, b)) % p
    assert np.array_equal(lhs, rhs)


def test_huge_modulus_roundtrip(rng):
    p = 4611686018427387847
    F = make_field(p)
    order = max(d for d in range(2, 200) if (p - 1) % d == 0)
    plan = get_plan(F, F.root_of_order(order))
    x = rng.integers(0, 2**62, size=order) % p
    assert ntt(plan, x).tolist() == naive_dft(x, plan.beta, p)
    assert np.array_equal(intt(plan, ntt(plan, x)), x)


def test_stage_tree_structure():
    plan = gamma_plan(make_field(59))  # 58 = 2 * 29
    tree = plan.stage_tree()
    assert [leaf for leaf, _, _ in tree] == [2, 29]
    assert tree[-1][2] == "rader"
    assert np.prod([leaf for leaf, _, _ in tree]) == 58
    assert all(is_prime(leaf) for leaf, _, _ in tree)


def test_cooley_tukey_composition(rng):
    # a composite order built from a 2 x 3 x 5 split equals the direct transform
    plan = plan_for(31, 30)
    x = rng.integers(0, 31, size=30)
    assert ntt(plan, x).tolist() == naive_dft(x, plan.beta, 31)


def test_rader_leaf_direct(rng):
    F = make_field(59)
    beta = F.root_of_order(29)
    x = rng.integers(0, 59, size=29)
    assert rader_prime_ntt(F, beta, x).tolist() == naive_dft(x, beta, 59)
    assert rader_prime_ntt(F, F.root_of_order(2), [3, 5]).tolist() == [8, 59 - 2]
    out = rader_prime_ntt(F, beta, np.full(29, 4))
    assert out[0] == 4 * 29 % 59 and not out[1:].any()
    with pytest.raises(OrderNotPrime):
        rader_prime_ntt(F, F.gamma, np.zeros(58))


def test_rader_fft_path(rng):
    # order 83 > 64 routes the leaf through the limb-split floating convolution
    p = 167
    plan = plan_for(p, 83)
    x = rng.integers(0, p, size=83)
    assert ntt(plan, x).tolist() == naive_dft(x, plan.beta, p)


def schoolbook_cyclic(a, b, p):
    n = len(a)
    return [sum(int(a[(j - k) % n]) * int(b[k]) for k in range(n)) % p for j in range(n)]


def test_cyclic_convolve_examples(rng):
    F5 = make_field(5)
    a, b = [1, 2, 3, 4], [1, 1, 0, 0]
    assert cyclic_convolve(F5, a, b, 4).tolist() == schoolbook_cyclic(a, b, 5)
    F = make_field(97)
    b = rng.integers(0, 97, size=30)
    delta = np.zeros(30, dtype=np.int64)
    delta[0] = 1
    assert np.array_equal(cyclic_convolve(F, delta, b, 30), b)
    a = rng.integers(0, 97, size=30)
    assert np.array_equal(cyclic_convolve(F, a, b, 30), cyclic_convolve(F, b, a, 30))
    with pytest.raises(LengthMismatch):
        cyclic_convolve(F, a[:5], b, 30)


@pytest.mark.parametrize("p", [65537, 2_147_483_647, 2_305_843_009_213_693_951])
def test_exact_convolver(rng, p):
    n = 256
    a = rng.integers(0, 2**62, size=n) % p
    b = rng.integers(0, 2**62, size=n) % p
    conv = ExactConvolver(b, p)
    got = conv.apply(a[None, :])[0]
    assert got.tolist() == schoolbook_cyclic(a, b, p)
    assert conv.max_rounding_error < 0.25
