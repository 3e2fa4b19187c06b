"""Prime field arithmetic and the integer number theory used by the extension fields."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from sympy import factorint, isprime

MAX_Q = 1 << 16


class FieldMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PrimeField:
    """The field F_q of integers modulo a prime ``q``.

    Parameters
    ----------
    q : int
        Prime modulus, ``2 <= q <= 2**16``.
    """

    q: int

    def __post_init__(self) -> None:
        if not 2 <= self.q <= MAX_Q:
            raise ValueError(f"q={self.q} outside supported range [2, {MAX_Q}]")
        if not isprime(self.q):
            raise ValueError(f"q={self.q} is not prime")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.q, self)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(v, self) for v in range(self.q)]

    def inv(self, value: int) -> int:
        """Inverse of a raw residue."""
        value %= self.q
        if value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(value, -1, self.q)


@lru_cache(maxsize=None)
def prime_field(q: int) -> PrimeField:
    return PrimeField(q)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"{self.value} is not a canonical residue mod {self.field.q}")

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field.q != self.field.q:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return add(self, other)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement((self.value - other.value) % self.field.q, self.field)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value % self.field.q, self.field)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return mul(self, other)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return mul(self, inv(other))

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return inv(self) ** -e
        return FieldElement(pow(self.value, e, self.field.q), self.field)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.q})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement((a.value + b.value) % a.field.q, a.field)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement(a.value * b.value % a.field.q, a.field)


def inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.field.inv(a.value), a.field)


def factorize(n: int) -> Counter:
    """Prime factorisation of ``n`` as a multiset ``{prime: multiplicity}``.

    ``factorize(1)`` is the empty multiset.
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    if n == 1:
        return Counter()
    return Counter(factorint(n))


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def multiplicative_order(q: int, modulus: int) -> int:
    """Smallest ``t >= 1`` with ``q**t == 1 (mod modulus)``."""
    if modulus == 1:
        return 1
    t, x = 1, q % modulus
    while x != 1:
        x = x * q % modulus
        t += 1
        if t > modulus:
            raise ValueError(f"{q} is not a unit modulo {modulus}")
    return t
