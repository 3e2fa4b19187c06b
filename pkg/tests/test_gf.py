import pytest
from hypothesis import given, settings, strategies as st

from regen.gf import (
    FieldMismatch, MAX_Q, PrimeField, factorize, inv, multiplicative_order, prime_divisors, prime_field,
)

PRIMES = [2, 3, 5, 7, 11, 13, 251, 257, 65521]


def elements(q):
    return st.integers(0, q - 1).map(prime_field(q))


@st.composite
def triple(draw):
    q = draw(st.sampled_from(PRIMES))
    e = elements(q)
    return draw(e), draw(e), draw(e)


@given(triple())
def test_ring_axioms(t):
    a, b, c = t
    F = a.field
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + F(0) == a and a * F(1) == a
    assert a + (-a) == F(0)
    assert a - b == a + (-b)


@given(triple())
def test_division_inverts_multiplication(t):
    a, b, _ = t
    if int(b) == 0:
        with pytest.raises(ZeroDivisionError):
            a / b
    else:
        assert (a / b) * b == a
        assert inv(b) * b == b.field(1)


@settings(max_examples=50)
@given(st.sampled_from(PRIMES[:6]), st.integers(1, 10**6))
def test_fermat(q, v):
    F = prime_field(q)
    x = F(v)
    if int(x):
        assert x ** (q - 1) == F(1)
    assert x**q == x


def test_small_field_tables():
    F = prime_field(5)
    assert [int(F(2) * y) for y in F.elements()] == [0, 2, 4, 1, 3]
    assert [F.inv(v) for v in range(1, 5)] == [1, 3, 2, 4]
    assert int(F(-1)) == 4


def test_rejects_non_prime_and_oversized_q():
    for q in (1, 4, 9, 256, 65536):
        with pytest.raises(ValueError):
            PrimeField(q)
    with pytest.raises(ValueError):
        PrimeField(65537)  # prime but above the supported range
    assert MAX_Q == 1 << 16


def test_mixed_fields_refused():
    with pytest.raises(FieldMismatch):
        prime_field(3)(1) + prime_field(5)(1)


def test_factorize_and_order():
    assert factorize(1) == {}
    assert factorize(2**6 - 1) == {3: 2, 7: 1}
    assert prime_divisors(255) == [3, 5, 17]
    assert multiplicative_order(2, 63) == 6
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(3, 8) == 2
