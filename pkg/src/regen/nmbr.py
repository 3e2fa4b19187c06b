"""Nearly-MBR regenerating codes over a small prime field.

Each node ``j`` stores ``M_j X`` where ``X = [[S, T], [T^T, 0]]`` is symmetric
and ``M_j`` is the ``j``-th block row of a block-Vandermonde matrix built from
powers of a companion matrix.  Any ``d`` survivors repair a lost node with
``beta = (b/k)^2`` symbols each; any ``k`` nodes reconstruct the file.

Node elements: node ``j`` (1-based) uses the field element ``gamma^(j-1)``
where ``gamma`` is the primitive element, except that the index ``q^m - 1``
denotes the zero element.  This makes all ``q^m`` field elements available,
so ``n = q^{b/k}`` is allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import (A1Violation, A2Violation, CorruptionError, DegreeOrderViolation,
                     ParameterError, SingularMatrix)
from .extfield import ExtFieldRep
from .gf import PrimeField, prime_field
from .linalg import GfMatrix, solve
from .shares import NodeShare, RepairPacket

PLAIN = "plain"
SYSTEMATIC = "systematic-cauchy"


@dataclass(frozen=True)
class NmbrParams:
    n: int
    k: int
    d: int
    q: int
    b: int
    encoding: str = PLAIN
    exponents: tuple[int, ...] = ()

    @property
    def m(self) -> int:
        return self.b // self.k

    @property
    def field_size(self) -> int:
        return self.q**self.m

    @property
    def beta(self) -> int:
        return self.m * self.m

    @property
    def alpha(self) -> int:
        return self.beta * self.d

    @property
    def B(self) -> int:
        b = self.b
        return b * (b + 1) // 2 + b * (self.d * self.m - b)

    @property
    def C(self) -> Fraction:
        return Fraction(self.b * self.b, self.k) * (self.d - Fraction(self.k - 1, 2))

    @property
    def width(self) -> int:
        """Side length ``db/k`` of the data matrix."""
        return self.d * self.m

    @property
    def systematic(self) -> bool:
        return self.encoding == SYSTEMATIC


def validate_params(n: int, k: int, d: int, q: int, b: int, encoding: str = PLAIN) -> NmbrParams:
    """Check the construction conditions and fix the node exponents ``0, 1, ..., n-1``."""
    if encoding not in (PLAIN, SYSTEMATIC):
        raise ParameterError(f"unknown encoding {encoding!r}")
    if not (1 <= k <= d <= n - 1):
        raise DegreeOrderViolation(f"need 1 <= k <= d <= n-1, got n={n}, k={k}, d={d}")
    try:
        prime_field(q)
    except ValueError as exc:
        raise ParameterError(str(exc)) from None
    if b < 1 or b % k:
        raise A2Violation(f"condition A2 (k | b) fails: k={k}, b={b}")
    size = q ** (b // k)
    if size < n:
        raise A1Violation(f"condition A1 (q^(b/k) >= n) fails: {q}^{b // k} = {size} < n = {n}")
    if encoding == SYSTEMATIC:
        if size < n + d - k:
            raise A1Violation(
                f"systematic condition A1 (q^(b/k) >= n+d-k) fails: {size} < {n + d - k}")
        exponents = tuple(range(n + d - k))
    else:
        exponents = tuple(range(n))
    return NmbrParams(n, k, d, q, b, encoding, exponents)


# -- data matrix ----------------------------------------------------------------

@dataclass(frozen=True)
class NmbrDataMatrix:
    S: GfMatrix
    T: GfMatrix

    @cached_property
    def X(self) -> GfMatrix:
        b = self.S.rows
        if self.T.cols == 0:
            return self.S
        zero = GfMatrix.zeros(self.T.cols, self.T.cols, self.S.field)
        return GfMatrix.block([[self.S, self.T], [self.T.T, zero]])


def _as_symbols(params, symbols, expected: int) -> np.ndarray:
    a = np.asarray(symbols, dtype=np.int64).reshape(-1)
    if a.size != expected:
        raise ValueError(f"expected {expected} file symbols, got {a.size}")
    if a.size and (a.min() < 0 or a.max() >= params.q):
        raise ValueError(f"file symbols must lie in [0, {params.q})")
    return a


def symmetric_from_upper(values: np.ndarray, size: int, field: PrimeField) -> GfMatrix:
    """Symmetric matrix whose upper triangle, read row by row, is ``values``."""
    a = np.zeros((size, size), dtype=np.int64)
    iu = np.triu_indices(size)
    a[iu] = values
    a.T[iu] = values
    return GfMatrix(a, field)


def upper_of(s: GfMatrix) -> np.ndarray:
    return s.array[np.triu_indices(s.rows)].copy()


def build_data_matrix(params: NmbrParams, file_symbols) -> NmbrDataMatrix:
    """Lay out ``B`` symbols: upper triangle of ``S`` row by row, then ``T`` row by row."""
    x = _as_symbols(params, file_symbols, params.B)
    b = params.b
    field = prime_field(params.q)
    head = b * (b + 1) // 2
    S = symmetric_from_upper(x[:head], b, field)
    T = GfMatrix(x[head:].reshape(b, params.width - b), field)
    return NmbrDataMatrix(S, T)


def extract_file(params: NmbrParams, data: NmbrDataMatrix) -> np.ndarray:
    return np.concatenate([upper_of(data.S), data.T.array.reshape(-1)])


# -- encoding matrix ------------------------------------------------------------

class NmbrCode:
    """Encoder, repair and reconstruction for one parameter set."""

    def __init__(self, params: NmbrParams, rep: ExtFieldRep | None = None) -> None:
        self.params = params
        p = params
        if rep is None:
            top = 0 if p.systematic else (p.d - 1) * max(p.exponents)
            rep = ExtFieldRep(p.q, p.m, max_power=top)
        self.rep = rep
        self.matrix = self._build()

    def element(self, index: int):
        """Field element used for ``index``: ``gamma^index``, or zero when ``index == q^m - 1``."""
        if index == self.rep.order:
            return self.rep.zero()
        return self.rep.alpha_power(index)

    def _element_power(self, index: int, t: int) -> GfMatrix:
        m = self.params.m
        if index == self.rep.order:
            return GfMatrix.identity(m, self.rep.base) if t == 0 else GfMatrix.zeros(m, m, self.rep.base)
        return self.rep.power(index * t)

    def ext_matrix(self) -> list[list[tuple]]:
        """The ``n x d`` matrix over F_{q^m} whose image under Theta is the encoding matrix."""
        p, rep = self.params, self.rep
        if not p.systematic:
            return [[rep.pow(self.element(e), t) if t else rep.one() for t in range(p.d)]
                    for e in p.exponents]
        u = [self.element(e) for e in p.exponents[:p.d]]
        v = [self.element(e) for e in p.exponents[p.d:]]
        cols = []
        for j in range(p.n):
            if j < p.k:
                cols.append([rep.one() if i == j else rep.zero() for i in range(p.d)])
            else:
                vj = v[j - p.k]
                cols.append([rep.inv(rep.sub(ui, vj)) for ui in u])
        return cols  # node j's row is column j of the d x n matrix

    def _build(self) -> GfMatrix:
        p = self.params
        if p.systematic:
            return self.rep.theta_big(self.ext_matrix())
        return GfMatrix.block([[self._element_power(e, t) for t in range(p.d)] for e in p.exponents])

    def node_matrix(self, j: int) -> GfMatrix:
        """``M_j`` for 1-based node id ``j``."""
        self._check_node(j)
        m = self.params.m
        return self.matrix[(j - 1) * m:j * m, :]

    def rows_for(self, nodes: Sequence[int]) -> GfMatrix:
        return GfMatrix.vstack([self.node_matrix(j) for j in nodes])

    def _check_node(self, j: int) -> None:
        if not 1 <= j <= self.params.n:
            raise ValueError(f"node id {j} outside 1..{self.params.n}")

    # -- codec ----------------------------------------------------------------
    def encode(self, file_symbols) -> list[NodeShare]:
        X = build_data_matrix(self.params, file_symbols).X
        Y = self.matrix @ X
        m = self.params.m
        return [NodeShare(j, Y[(j - 1) * m:j * m, :]) for j in range(1, self.params.n + 1)]

    def repair_helper(self, share: NodeShare, target_id: int) -> RepairPacket:
        self._check_node(target_id)
        if share.node_id == target_id:
            raise ValueError(f"node {target_id} cannot help repair itself")
        return RepairPacket(share.node_id, target_id, share.payload @ self.node_matrix(target_id).T)

    def repair_assemble(self, packets: Sequence[RepairPacket]) -> NodeShare:
        p = self.params
        packets = _check_packets(packets, p.d)
        target = packets[0].target_id
        stacked = GfMatrix.vstack([pk.payload for pk in packets])
        M_D = self.rows_for([pk.helper_id for pk in packets])
        try:
            x_mt = solve(M_D, stacked)
        except SingularMatrix as exc:
            raise CorruptionError(f"helper encoding rows are singular (rank {exc.rank})") from None
        return NodeShare(target, x_mt.T)

    def reconstruct(self, shares: Sequence[NodeShare]) -> np.ndarray:
        p = self.params
        shares = _check_shares(shares, p.k)
        Y = GfMatrix.vstack([s.payload for s in shares])
        M_K = self.rows_for([s.node_id for s in shares])
        b = p.b
        M1, M2 = M_K[:, :b], M_K[:, b:]
        try:
            if p.d > p.k:
                T = solve(M1, Y[:, b:])
                S = solve(M1, Y[:, :b] - M2 @ T.T)
            else:
                T = GfMatrix.zeros(b, 0, Y.field)
                S = solve(M1, Y)
        except SingularMatrix as exc:
            raise CorruptionError(f"reconstruction rows are singular (rank {exc.rank})") from None
        return extract_file(p, NmbrDataMatrix(S, T))


def _check_packets(packets: Sequence[RepairPacket], d: int) -> list[RepairPacket]:
    packets = sorted(packets, key=lambda pk: pk.helper_id)
    if len(packets) != d:
        raise ValueError(f"repair needs exactly d={d} packets, got {len(packets)}")
    helpers = [pk.helper_id for pk in packets]
    if len(set(helpers)) != len(helpers):
        raise ValueError(f"duplicate helpers in {helpers}")
    targets = {pk.target_id for pk in packets}
    if len(targets) != 1:
        raise ValueError(f"packets address different targets {sorted(targets)}")
    if targets & set(helpers):
        raise ValueError("the failed node cannot be its own helper")
    return packets


def _check_shares(shares: Sequence[NodeShare], k: int) -> list[NodeShare]:
    shares = sorted(shares, key=lambda s: s.node_id)
    if len(shares) != k:
        raise ValueError(f"reconstruction needs exactly k={k} shares, got {len(shares)}")
    ids = [s.node_id for s in shares]
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate nodes in {ids}")
    return shares


@lru_cache(maxsize=32)
def code_for(params: NmbrParams) -> NmbrCode:
    return NmbrCode(params)


def build_encoding_matrix(params: NmbrParams) -> GfMatrix:
    return code_for(params).matrix


def build_cauchy_systematic_matrix(params: NmbrParams) -> GfMatrix:
    if not params.systematic:
        params = validate_params(params.n, params.k, params.d, params.q, params.b, SYSTEMATIC)
    return code_for(params).matrix


def encode(params: NmbrParams, file_symbols) -> list[NodeShare]:
    return code_for(params).encode(file_symbols)


def repair_helper(share: NodeShare, target_id: int, params: NmbrParams) -> RepairPacket:
    return code_for(params).repair_helper(share, target_id)


def repair_assemble(packets: Sequence[RepairPacket], params: NmbrParams) -> NodeShare:
    return code_for(params).repair_assemble(packets)


def reconstruct(shares: Sequence[NodeShare], params: NmbrParams) -> np.ndarray:
    return code_for(params).reconstruct(shares)


def metrics(params: NmbrParams) -> dict:
    """Closed-form sizes in symbols, as exact integers and fractions."""
    p = params
    B, C = p.B, p.C
    k, d, b = p.k, p.d, p.b
    rate = Fraction(B, p.alpha * p.n)
    b_over_c = (2 - Fraction(k, d) * Fraction(b - 1, b)) / (2 - Fraction(k, d) + Fraction(1, d))
    assert Fraction(B) / C == b_over_c
    assert rate == Fraction(k * k, d * p.n) * (Fraction(d, k) - Fraction(1, 2) + Fraction(1, 2 * b))
    return {"B": B, "C": C, "alpha": p.alpha, "beta": p.beta, "rate": rate, "B_over_C": b_over_c}
