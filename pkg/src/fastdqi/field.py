"""Prime field arithmetic and primitive elements."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DivisionByZero, FieldMismatch, NotPrime

MAX_MODULUS = 1 << 62

# Deterministic for every n < 3.3e24, which covers the 2^62 cap.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization, primes in increasing order."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    if n >= MAX_MODULUS:
        raise ValueError("factorize is capped at n < 2^62")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def prime_factors(n: int) -> list[int]:
    return [q for q, _ in factorize(n)]


def multiplicative_order(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise DivisionByZero("0 has no multiplicative order")
    n = p - 1
    for q, e in factorize(p - 1):
        for _ in range(e):
            if pow(a, n // q, p) == 1:
                n //= q
            else:
                break
    return n


def _is_generator(g: int, p: int, qs) -> bool:
    return all(pow(g, (p - 1) // q, p) != 1 for q in qs)


@dataclass(frozen=True)
class PrimeField:
    p: int
    gamma: int

    def __post_init__(self):
        if not (3 <= self.p < MAX_MODULUS) or not is_prime(self.p):
            raise NotPrime(f"{self.p} is not a prime in [3, 2^62)")
        if not (0 < self.gamma < self.p) or not _is_generator(
            self.gamma, self.p, prime_factors(self.p - 1)
        ):
            raise ValueError(f"{self.gamma} is not a primitive element mod {self.p}")

    def __call__(self, value: int) -> "Fp":
        return Fp(value % self.p, self)

    # plain-int arithmetic, used by the numeric modules
    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DivisionByZero(f"0 has no inverse mod {self.p}")
        return pow(a, -1, self.p)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def order(self, a: int) -> int:
        return multiplicative_order(a, self.p)

    def root_of_order(self, n: int) -> int:
        """gamma^((p-1)/n), an element of order exactly n."""
        if n < 1 or (self.p - 1) % n:
            raise ValueError(f"{n} does not divide p-1 = {self.p - 1}")
        return pow(self.gamma, (self.p - 1) // n, self.p)


@dataclass(frozen=True)
class Fp:
    """A canonical residue tied to its field."""

    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ValueError("Fp value must be canonical")

    def _other(self, o) -> int:
        if isinstance(o, Fp):
            if o.field != self.field:
                raise FieldMismatch("operands live in different fields")
            return o.value
        if isinstance(o, int):
            return o % self.field.p
        return NotImplemented

    def _wrap(self, v: int) -> "Fp":
        return Fp(v % self.field.p, self.field)

    def __add__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else self._wrap(self.value + v)

    __radd__ = __add__

    def __sub__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else self._wrap(self.value - v)

    def __rsub__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else self._wrap(v - self.value)

    def __mul__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else self._wrap(self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def inv(self) -> "Fp":
        return Fp(self.field.inv(self.value), self.field)

    def __truediv__(self, o):
        v = self._other(o)
        if v is NotImplemented:
            return NotImplemented
        return self._wrap(self.value * self.field.inv(v))

    def __pow__(self, e: int):
        return Fp(self.field.pow(self.value, e), self.field)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"Fp({self.value} mod {self.field.p})"


@lru_cache(maxsize=256)
def _smallest_primitive(p: int) -> int:
    qs = prime_factors(p - 1)
    for g in range(2, p):
        if _is_generator(g, p, qs):
            return g
    raise AssertionError("unreachable: every prime field has a generator")


def make_field(p: int, gamma: int | None = None) -> PrimeField:
    """Field F_p with the smallest primitive element unless ``gamma`` is given."""
    p = int(p)
    if not (3 <= p < MAX_MODULUS) or not is_prime(p):
        raise NotPrime(f"{p} is not a prime in [3, 2^62)")
    return PrimeField(p, _smallest_primitive(p) if gamma is None else int(gamma))
