"""The extension field F_{q^m} realised inside F_q^{m x m}.

A monic primitive polynomial ``f`` of degree ``m`` gives a companion matrix
``P`` whose powers ``P^0, ..., P^{q^m - 2}`` together with the zero matrix form
a field isomorphic to F_{q^m}.  Field elements are handled in the polynomial
basis, i.e. as length-``m`` coefficient tuples ``(c_0, ..., c_{m-1})`` standing
for ``sum c_i x^i mod f``; :meth:`ExtFieldRep.theta` sends such a tuple to
``sum c_i P^i``.

Polynomials are coefficient lists in ascending order: ``[1, 1, 0, 1]`` is
``x^3 + x + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd
from typing import Sequence

import numpy as np

from .errors import NotEnoughCosets
from .gf import PrimeField, prime_divisors, prime_field
from .linalg import GfMatrix

Element = tuple  # length-m coefficient tuple over F_q


# -- polynomial helpers over F_q (ascending coefficient lists) ---------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], f: Sequence[int], q: int) -> list[int]:
    a = [x % q for x in a]
    _trim(a)
    df = len(f) - 1
    lead_inv = pow(f[-1], -1, q)
    while len(a) - 1 >= df and a:
        c = a[-1] * lead_inv % q
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % q
        _trim(a)
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    if not a or not b:
        return []
    out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    return _trim([int(v) % q for v in out])


def poly_mulmod(a, b, f, q) -> list[int]:
    return poly_mod(poly_mul(a, b, q), f, q)


def poly_powmod(base: Sequence[int], e: int, f: Sequence[int], q: int) -> list[int]:
    result: list[int] = [1]
    base = poly_mod(base, f, q)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, q)
        base = poly_mulmod(base, base, f, q)
        e >>= 1
    return poly_mod(result, f, q)


def poly_sub(a, b, q) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % q for i in range(n)])


def poly_gcd(a, b, q) -> list[int]:
    a, b = _trim([x % q for x in a]), _trim([x % q for x in b])
    while b:
        a, b = b, poly_mod(a, b, q)
    if a:
        inv = pow(a[-1], -1, q)
        a = [x * inv % q for x in a]
    return a


def is_irreducible(f: Sequence[int], q: int) -> bool:
    """Rabin's test for a monic ``f`` of degree ``m >= 1``."""
    m = len(f) - 1
    if m == 1:
        return True
    x = [0, 1]
    if poly_powmod(x, q**m, f, q) != poly_mod(x, f, q):
        return False
    for p in prime_divisors(m):
        h = poly_sub(poly_powmod(x, q ** (m // p), f, q), x, q)
        if poly_gcd(f, h, q) != [1]:
            return False
    return True


def is_primitive(f: Sequence[int], q: int) -> bool:
    """True when monic ``f`` is irreducible and ``x`` has order ``q^m - 1`` modulo ``f``."""
    m = len(f) - 1
    if m < 1 or f[-1] % q != 1 or f[0] % q == 0:
        return False
    if not is_irreducible(f, q):
        return False
    order = q**m - 1
    x = [0, 1]
    if poly_powmod(x, order, f, q) != [1]:
        return False
    return all(poly_powmod(x, order // p, f, q) != [1] for p in prime_divisors(order))


def find_primitive_poly(field: PrimeField | int, m: int) -> list[int]:
    """Smallest monic primitive polynomial of degree ``m`` over ``F_q``.

    Candidates are scanned in increasing order of ``sum c_i q^i`` over the
    non-leading coefficients, which is lexicographic order with the
    high-degree coefficients compared first.  The result is deterministic.
    """
    q = field if isinstance(field, int) else field.q
    if m < 1:
        raise ValueError(f"degree must be >= 1, got {m}")
    for idx in range(q**m):
        coeffs = []
        v = idx
        for _ in range(m):
            coeffs.append(v % q)
            v //= q
        f = coeffs + [1]
        if is_primitive(f, q):
            return f
    raise AssertionError(f"no primitive polynomial of degree {m} over GF({q})")  # pragma: no cover


def companion(poly: Sequence[int], field: PrimeField | int) -> GfMatrix:
    """Companion matrix: ones on the subdiagonal, last column ``-p_0, ..., -p_{m-1}``."""
    fld = prime_field(field) if isinstance(field, int) else field
    q = fld.q
    poly = [c % q for c in poly]
    if len(poly) < 2 or poly[-1] != 1:
        raise ValueError(f"companion matrix needs a monic polynomial of degree >= 1, got {list(poly)}")
    m = len(poly) - 1
    a = np.zeros((m, m), dtype=np.int64)
    a[np.arange(1, m), np.arange(m - 1)] = 1
    a[:, m - 1] = [-c % q for c in poly[:-1]]
    return GfMatrix(a, fld)


class ExtFieldRep:
    """F_{q^m} as polynomials in the companion matrix ``P`` of a primitive polynomial.

    Parameters
    ----------
    field : PrimeField or int
        Base field.
    m : int
        Extension degree.
    poly : sequence of int, optional
        Monic primitive polynomial; defaults to :func:`find_primitive_poly`.
    max_power : int, optional
        Powers ``P^0 .. P^max_power`` are computed at construction.  Other
        powers are computed on demand and not stored, so the object never
        mutates after ``__init__``.
    """

    def __init__(self, field: PrimeField | int, m: int, poly: Sequence[int] | None = None,
                 max_power: int | None = None) -> None:
        self.base = prime_field(field) if isinstance(field, int) else field
        q = self.base.q
        self.m = m
        self.order = q**m - 1
        self.poly = tuple(find_primitive_poly(self.base, m) if poly is None else [c % q for c in poly])
        if len(self.poly) != m + 1:
            raise ValueError(f"polynomial degree {len(self.poly) - 1} does not match m={m}")
        if poly is not None and not is_primitive(self.poly, q):
            raise ValueError(f"{list(self.poly)} is not primitive over GF({q})")
        self.P = companion(self.poly, self.base)
        top = max(m - 1, 0 if max_power is None else min(max_power, self.order - 1))
        cache = [GfMatrix.identity(m, self.base)]
        for _ in range(top):
            cache.append(cache[-1] @ self.P)
        self._powers = tuple(cache)
        self._basis = np.stack([p.array for p in cache[:m]])  # (m, m, m)

    def __repr__(self) -> str:
        return f"ExtFieldRep(q={self.base.q}, m={self.m}, poly={list(self.poly)})"

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def size(self) -> int:
        return self.order + 1

    # -- matrix side -------------------------------------------------------
    def power(self, e: int) -> GfMatrix:
        """``P^e`` for any integer ``e`` (negative exponents use ``P^{q^m - 1} = I``)."""
        e %= self.order
        if e < len(self._powers):
            return self._powers[e]
        return self.theta(self.alpha_power(e))

    def theta(self, coeffs: Sequence[int]) -> GfMatrix:
        """Matrix of the element ``sum coeffs[i] x^i``: ``sum coeffs[i] P^i``."""
        if len(coeffs) != self.m:
            raise ValueError(f"expected {self.m} coefficients, got {len(coeffs)}")
        c = np.asarray(coeffs, dtype=np.int64) % self.q
        return GfMatrix(np.tensordot(c, self._basis, axes=1), self.base)

    def theta_big(self, a: Sequence[Sequence[Sequence[int]]]) -> GfMatrix:
        """Block matrix whose block ``(i, j)`` is ``theta(a[i][j])``."""
        rows = [list(r) for r in a]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("theta_big needs a non-empty rectangular array")
        return GfMatrix.block([[self.theta(x) for x in r] for r in rows])

    # -- element side ------------------------------------------------------
    def zero(self) -> Element:
        return (0,) * self.m

    def one(self) -> Element:
        return (1,) + (0,) * (self.m - 1)

    def _pad(self, a: list[int]) -> Element:
        return tuple(a) + (0,) * (self.m - len(a))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % self.q for x, y in zip(a, b))

    def sub(self, a: Element, b: Element) -> Element:
        return tuple((x - y) % self.q for x, y in zip(a, b))

    def mul(self, a: Element, b: Element) -> Element:
        return self._pad(poly_mulmod(list(a), list(b), self.poly, self.q))

    def pow(self, a: Element, e: int) -> Element:
        if e < 0:
            return self.pow(self.inv(a), -e)
        return self._pad(poly_powmod(list(a), e, self.poly, self.q))

    def inv(self, a: Element) -> Element:
        if not any(a):
            raise ZeroDivisionError("zero has no inverse in the extension field")
        return self.pow(a, self.order - 1)

    def alpha_power(self, e: int) -> Element:
        """Coefficients of ``x^e``, the ``e``-th power of the primitive element."""
        return self._pad(poly_powmod([0, 1], e % self.order, self.poly, self.q))

    def matmul(self, a, b) -> list[list[Element]]:
        """Product of two matrices over F_{q^m} given as nested lists of elements."""
        inner = len(b)
        out = []
        for row in a:
            out_row = []
            for j in range(len(b[0])):
                acc = self.zero()
                for t in range(inner):
                    acc = self.add(acc, self.mul(row[t], b[t][j]))
                out_row.append(acc)
            out.append(out_row)
        return out


# -- cyclotomic cosets ---------------------------------------------------------

@dataclass(frozen=True)
class CosetTable:
    q: int
    modulus: int
    cosets: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...] = dc_field(default=())

    def coset_of(self, s: int) -> tuple[int, ...]:
        s %= self.modulus
        for c in self.cosets:
            if s in c:
                return c
        raise KeyError(s)  # pragma: no cover

    def same_coset(self, a: int, b: int) -> bool:
        return (b % self.modulus) in self.coset_of(a)


def coset_partition(q: int, modulus: int) -> CosetTable:
    """Partition of ``Z_modulus`` into ``q``-cyclotomic cosets ``{s, sq, sq^2, ...}``.

    Cosets are listed by increasing smallest element; each coset keeps the
    generation order ``s, sq, sq^2, ...`` starting from its smallest element.
    """
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    if gcd(q, modulus) != 1:
        raise ValueError(f"gcd(q={q}, modulus={modulus}) != 1")
    seen = bytearray(modulus)
    cosets = []
    for s in range(modulus):
        if seen[s]:
            continue
        c = []
        x = s
        while not seen[x]:
            seen[x] = 1
            c.append(x)
            x = x * q % modulus
        cosets.append(tuple(c))
    return CosetTable(q, modulus, tuple(cosets), tuple(c[0] for c in cosets))


def select_representatives(table: CosetTable, n: int) -> list[int]:
    """``n`` integers from pairwise distinct cosets, smallest cosets first."""
    if n > len(table.cosets):
        raise NotEnoughCosets(
            f"need {n} distinct {table.q}-cyclotomic cosets modulo {table.modulus}, "
            f"only {len(table.cosets)} exist"
        )
    return list(table.representatives[:n])
