"""Prime-field arithmetic, points and the seeded counter-based generator.

Field elements are plain Python ints kept canonical in ``[0, p)``; a
:class:`PrimeField` carries the modulus and the operations.  Points are
tuples of such ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

from .errors import InvalidInput, NotPrime, RadiusExceedsField, ZeroInverse

Point = Tuple[int, ...]

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MAX_MODULUS = 1 << 61

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3e24.
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


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime ``2 <= p < 2**61``.

    ``p = 2`` is accepted here (several tiny enumerations use F_2); modules
    that need odd characteristic check it themselves.
    """

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2 or self.p >= MAX_MODULUS:
            raise InvalidInput(f"modulus must be an int in [2, 2^61), got {self.p!r}")
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")

    def __call__(self, value: int) -> int:
        return value % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def pow(self, a: int, e: int) -> int:
        return pow(a, e, self.p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroInverse(f"0 has no inverse mod {self.p}")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.p

    def elements(self) -> range:
        return range(self.p)

    def point(self, coords: Sequence[int]) -> Point:
        return tuple(c % self.p for c in coords)


def inv(a: int, p: int) -> int:
    """Inverse of ``a`` modulo the prime ``p``."""
    return PrimeField(p).inv(a)


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class Rng:
    """SplitMix64 in counter form.

    Draw number ``k`` (0-based) is ``mix(seed + (k + 1) * GAMMA)``, so the
    stream is a pure function of ``(seed, counter)``.  Not for cryptography.
    """

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int = 0, counter: int = 0):
        self.seed = seed & MASK64
        self.counter = counter & MASK64

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, counter={self.counter})"

    def next_u64(self) -> int:
        self.counter = (self.counter + 1) & MASK64
        return _mix64((self.seed + self.counter * GAMMA) & MASK64)

    def below(self, k: int) -> int:
        """Value in ``[0, k)`` using exactly one draw (multiply-shift)."""
        if k <= 0:
            raise InvalidInput("below() needs a positive bound")
        return (self.next_u64() * k) >> 64

    def choice(self, values: Sequence):
        return values[self.below(len(values))]

    def child(self, index: int) -> "Rng":
        """Independent stream for trial ``index``: seed XOR mix(index)."""
        return Rng(self.seed ^ _mix64((index * GAMMA + GAMMA) & MASK64))

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def sample_grid_point(R: int, n: int, rng: Rng, field: PrimeField | int) -> Point:
    """Uniform point of ``{1, ..., R}^n`` inside F_p^n; consumes n draws.

    Zero is excluded from the grid on purpose: coordinate hyperplanes then
    never annihilate a sample.
    """
    p = field.p if isinstance(field, PrimeField) else field
    if R < 1:
        raise InvalidInput("grid radius must be >= 1")
    if R >= p:
        raise RadiusExceedsField(f"radius {R} must be < p = {p}")
    return tuple(1 + rng.below(R) for _ in range(n))


def sample_from_values(values: Sequence[int], n: int, rng: Rng) -> Point:
    """Uniform point of ``values^n`` (explicit value-list grid)."""
    if not values:
        raise InvalidInput("empty value list")
    return tuple(values[rng.below(len(values))] for _ in range(n))
