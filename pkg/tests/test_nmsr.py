import time
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from regen import nmsr
from regen.errors import (B1Violation, B2Violation, CorruptionError, CosetCollision, DegreeOrderViolation,
                          ParameterError)
from regen.extfield import coset_partition
from regen.linalg import GfMatrix
from sweeps import sweep


@pytest.fixture(scope="module")
def desk():
    return nmsr.validate_params(6, 3, 2, 18)


def test_desk_parameters(desk):
    p = desk
    assert (p.d, p.m, p.g, p.modulus, p.L) == (4, 6, 1, 63, 12)
    assert p.indices == (0, 1, 3, 5, 7, 9)
    assert (p.alpha, p.beta, p.B) == (72, 36, 156)
    met = nmsr.metrics(p)
    assert met["B_over_alpha_k"] == Fraction(13, 18)
    assert met["rate"] == Fraction(156, 72 * 6)


def test_indices_lie_in_distinct_cosets(desk):
    t = coset_partition(2, desk.modulus)
    cos = [t.coset_of(e) for e in desk.indices]
    assert len(set(cos)) == len(cos)


def test_exhaustive_desk(desk):
    code = nmsr.NmsrCode(desk)
    data = np.random.default_rng(11).integers(0, 2, desk.B)
    t0 = time.perf_counter()
    assert sweep(code, 6, 3, 4, data) == (comb(6, 3), 6 * comb(5, 4))
    assert time.perf_counter() - t0 < 60


@pytest.mark.parametrize("n,k,q,b", [(3, 2, 2, 8), (4, 2, 3, 4), (3, 2, 3, 4)])
def test_exhaustive_small(n, k, q, b):
    p = nmsr.validate_params(n, k, q, b)
    code = nmsr.NmsrCode(p)
    data = np.random.default_rng(n + b).integers(0, q, p.B)
    sweep(code, n, k, p.d, data)


def test_encoder_structure(desk):
    code = nmsr.code_for(desk)
    enc = nmsr.build_encoder(desk)
    m, L = desk.m, desk.L
    assert enc["Phi"].shape == (desk.n * m, L)
    assert enc["M"].shape == (desk.n * m, 2 * L)
    for j, e in enumerate(desk.indices, start=1):
        phi = code.phi(j)
        assert phi.get_block(0, 0, m) == GfMatrix.identity(m, 2)
        assert phi[:, m:2 * m] == code.rep.power(e)
        assert code.lambdas[j - 1] == code.rep.power(2 * e)
        assert code.node_matrix(j) == GfMatrix.hstack([phi, code.lambdas[j - 1] @ phi])
    assert enc["M"] == GfMatrix.hstack([enc["Phi"], enc["Lambda"] @ enc["Phi"]])


def test_data_matrix_is_two_symmetric_blocks(desk):
    code = nmsr.code_for(desk)
    X = code.data_matrix(np.random.default_rng(2).integers(0, 2, desk.B))
    S1, S2 = X[:12, :], X[12:, :]
    assert S1 == S1.T and S2 == S2.T


def test_repair_packet_is_beta_symbols(desk):
    code = nmsr.code_for(desk)
    shares = code.encode(np.zeros(desk.B, dtype=np.int64))
    assert code.repair_helper(shares[1], 1).symbols == desk.beta == 36
    assert shares[0].symbols == desk.alpha == 72


def test_coset_collision_raises():
    good = nmsr.validate_params(6, 3, 2, 18)
    bad = nmsr.NmsrParams(6, 3, 2, 18, (0, 1, 2, 5, 7, 9))  # 1 and 2 share a coset
    with pytest.raises(CosetCollision):
        nmsr.check_indices(bad)
    with pytest.raises(CosetCollision):
        nmsr.NmsrCode(bad)
    code = nmsr.NmsrCode(bad, strict=False)
    shares = code.encode(np.random.default_rng(0).integers(0, 2, good.B))
    with pytest.raises(CosetCollision) as ei:
        code.reconstruct([shares[0], shares[1], shares[2]])
    assert "nodes 2 and 3" in str(ei.value)
    # subsets avoiding the colliding pair still work
    out = code.reconstruct([shares[0], shares[1], shares[3]])
    assert out.size == good.B


def test_tampered_share_detected(desk):
    code = nmsr.code_for(desk)
    data = np.random.default_rng(5).integers(0, 2, desk.B)
    shares = code.encode(data)
    bad = shares[0].payload.array.copy()
    bad[0, 0] ^= 1
    tampered = type(shares[0])(1, GfMatrix(bad, 2))
    try:
        out = code.reconstruct([tampered, shares[1], shares[2]])
    except CorruptionError:
        return
    assert not np.array_equal(out, data)


def test_parameter_violations():
    with pytest.raises(B1Violation):
        nmsr.validate_params(5, 2, 2, 4)
    with pytest.raises(B2Violation):
        nmsr.validate_params(6, 3, 2, 17)
    with pytest.raises(DegreeOrderViolation):
        nmsr.validate_params(4, 3, 2, 18)
    with pytest.raises(DegreeOrderViolation):
        nmsr.validate_params(3, 1, 2, 8)
    with pytest.raises(ParameterError):
        nmsr.NmsrCode(nmsr.NmsrParams(6, 3, 2, 18))


def test_gcd_reduces_modulus():
    # k - 1 = 3 divides 2^6 - 1 = 63, so indices live modulo 21
    p = nmsr.NmsrParams(7, 4, 2, 24)
    assert p.g == 3 and p.modulus == 21


def test_table_scale_parameters_skip_selection():
    p = nmsr.validate_params(1000, 400, 2, 190 * 400, select=False)
    assert p.indices == () and p.B == 190 * 399 * (190 * 399 + 1)
