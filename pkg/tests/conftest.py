import numpy as np
import pytest

from fastdqi import kernels
from fastdqi.field import make_field


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    return kernels.available_backends()[request.param]


def naive_dft(x, beta, p):
    """Plain double loop over Python ints."""
    n = len(x)
    out = []
    for j in range(n):
        w = pow(beta, j, p)
        acc, cur = 0, 1
        for i in range(n):
            acc = (acc + cur * int(x[i])) % p
            cur = cur * w % p
        out.append(acc)
    return out


def field(p):
    return make_field(p)
