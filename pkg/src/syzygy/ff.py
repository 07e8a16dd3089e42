"""Prime field arithmetic Z/p for word-sized primes.

Field elements are plain Python ints kept in canonical form ``0 <= a < p``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CompositeModulus, DivisionByZero, ModulusTooLarge

DEFAULT_PRIME = 2147483647
MAX_MODULUS = 1 << 62

# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
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


@dataclass(frozen=True)
class FieldCtx:
    """Immutable context for arithmetic modulo a prime ``p``."""

    p: int

    def __post_init__(self):
        if self.p >= MAX_MODULUS:
            raise ModulusTooLarge(f"modulus {self.p} must be below 2^62")
        if not is_prime(self.p):
            raise CompositeModulus(f"modulus {self.p} is not prime")

    def elem(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        s = a + b
        return s - self.p if s >= self.p else s

    def sub(self, a: int, b: int) -> int:
        s = a - b
        return s + self.p if s < 0 else s

    def neg(self, a: int) -> int:
        return self.p - a if a else 0

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, -1, self.p)

    def arith(self, op: str, a: int, b: int | None = None) -> int:
        """Dispatch one of ``add, sub, mul, neg, inv`` by name."""
        if op in ("neg", "inv"):
            return getattr(self, op)(a)
        if op not in ("add", "sub", "mul"):
            raise ValueError(f"unknown field operation {op!r}")
        return getattr(self, op)(a, b)

    def signed(self, a: int) -> int:
        """Symmetric lift of a residue into (-p/2, p/2]."""
        return a - self.p if a > self.p // 2 else a


def make_field(p: int | None = None) -> FieldCtx:
    return FieldCtx(DEFAULT_PRIME if p is None else int(p))
