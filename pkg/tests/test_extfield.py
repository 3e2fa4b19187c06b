import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from regen.errors import NotEnoughCosets, SingularMatrix
from regen.extfield import (
    ExtFieldRep, companion, coset_partition, find_primitive_poly, is_irreducible, is_primitive,
    select_representatives,
)
from regen.gf import multiplicative_order
from regen.linalg import GfMatrix, invert, rank

x = sympy.symbols("x")


def sympy_poly(coeffs, q):
    return sympy.Poly(list(reversed(coeffs)), x, modulus=q)


@pytest.mark.parametrize("q,m,expected", [
    (2, 2, [1, 1, 1]),
    (2, 3, [1, 1, 0, 1]),
    (2, 4, [1, 1, 0, 0, 1]),
    (2, 6, [1, 1, 0, 0, 0, 0, 1]),
    (3, 2, [2, 1, 1]),
])
def test_find_primitive_poly(q, m, expected):
    assert find_primitive_poly(q, m) == expected


@pytest.mark.parametrize("q,m", [(2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_agrees_with_sympy(q, m):
    for tail in itertools.product(range(q), repeat=m):
        f = list(tail) + [1]
        assert is_irreducible(f, q) == sympy_poly(f, q).is_irreducible


def test_irreducible_but_not_primitive():
    # x^4 + x^3 + x^2 + x + 1 divides x^5 - 1
    f = [1, 1, 1, 1, 1]
    assert is_irreducible(f, 2) and not is_primitive(f, 2)


def test_companion_layout():
    P = companion([1, 1, 0, 1], 2)
    assert P.tolist() == [[0, 0, 1], [1, 0, 1], [0, 1, 0]]
    with pytest.raises(ValueError):
        companion([1, 1, 0, 2], 3)


@pytest.mark.parametrize("q,m", [(2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (5, 2)])
def test_companion_order_is_exact(q, m):
    rep = ExtFieldRep(q, m)
    I = GfMatrix.identity(m, q)
    order = q**m - 1
    assert rep.power(order) == I
    for p in sympy.primefactors(order):
        assert rep.power(order // p) != I
    assert len({rep.power(e).array.tobytes() for e in range(order)}) == order


def _random_ext_matrix(rng, rep, rows, cols):
    return [[tuple(int(v) for v in rng.integers(0, rep.q, rep.m)) for _ in range(cols)] for _ in range(rows)]


def _ext_det_nonzero(rep, a):
    # Gaussian elimination over F_{q^m} on element tuples
    a = [list(r) for r in a]
    n = len(a)
    for c in range(n):
        p = next((r for r in range(c, n) if any(a[r][c])), None)
        if p is None:
            return False
        a[c], a[p] = a[p], a[c]
        piv = rep.inv(a[c][c])
        for r in range(c + 1, n):
            f = rep.mul(a[r][c], piv)
            a[r] = [rep.sub(a[r][j], rep.mul(f, a[c][j])) for j in range(n)]
    return True


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_theta_multiplicative(m):
    rep = ExtFieldRep(2, m)
    rng = np.random.default_rng(m)
    for _ in range(100):
        r, s, t = (int(v) for v in rng.integers(1, 4, 3))
        A, B = _random_ext_matrix(rng, rep, r, s), _random_ext_matrix(rng, rep, s, t)
        assert rep.theta_big(rep.matmul(A, B)) == rep.theta_big(A) @ rep.theta_big(B)


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_theta_invertibility(m):
    rep = ExtFieldRep(2, m)
    rng = np.random.default_rng(100 + m)
    singular = 0
    for _ in range(100):
        s = int(rng.integers(1, 4))
        A = _random_ext_matrix(rng, rep, s, s)
        if rng.random() < 0.3 and s > 1:
            A[-1] = list(A[0])  # force a singular instance
        T = rep.theta_big(A)
        if _ext_det_nonzero(rep, A):
            assert rank(T) == s * m
            invert(T)
        else:
            singular += 1
            assert rank(T) < s * m
            with pytest.raises(SingularMatrix):
                invert(T)
    assert singular > 0


@settings(max_examples=50)
@given(st.sampled_from([(2, 3), (2, 4), (3, 2), (5, 2)]), st.data())
def test_element_arithmetic_matches_matrices(qm, data):
    q, m = qm
    rep = ExtFieldRep(q, m)
    el = st.tuples(*[st.integers(0, q - 1)] * m)
    a, b = data.draw(el), data.draw(el)
    assert rep.theta(rep.mul(a, b)) == rep.theta(a) @ rep.theta(b)
    assert rep.theta(rep.add(a, b)) == rep.theta(a) + rep.theta(b)
    if any(a):
        assert rep.mul(a, rep.inv(a)) == rep.one()


def test_alpha_power_matches_power():
    rep = ExtFieldRep(2, 4)
    for e in range(-3, 20):
        assert rep.theta(rep.alpha_power(e)) == rep.power(e)


def test_cosets_mod_7():
    t = coset_partition(2, 7)
    assert t.cosets == ((0,), (1, 2, 4), (3, 6, 5))
    assert t.representatives == (0, 1, 3)
    assert t.same_coset(3, 5) and not t.same_coset(1, 3)


@pytest.mark.parametrize("q,mod", [(2, 63), (2, 21), (3, 26), (2, 255)])
def test_cosets_partition_and_sizes(q, mod):
    t = coset_partition(q, mod)
    flat = sorted(v for c in t.cosets for v in c)
    assert flat == list(range(mod))
    for c in t.cosets:
        assert len(c) == multiplicative_order(q, mod // np.gcd(c[0], mod)) if c[0] else len(c) == 1
        assert {v * q % mod for v in c} == set(c)
    assert list(t.representatives) == sorted(t.representatives)


def test_coset_count_mod_63():
    assert len(coset_partition(2, 63).cosets) == 13


def test_representatives_and_shortage():
    t = coset_partition(2, 7)
    assert select_representatives(t, 3) == [0, 1, 3]
    with pytest.raises(NotEnoughCosets):
        select_representatives(t, 4)
    with pytest.raises(ValueError):
        coset_partition(2, 6)
