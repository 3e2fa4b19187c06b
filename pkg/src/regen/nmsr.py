"""Nearly-MSR regenerating codes for ``d = 2k - 2``, plus puncturing to larger ``d``.

The file fills the upper triangles of two symmetric ``L x L`` matrices
``S1, S2`` (``L = b(k-1)/k``) and ``X = [S1; S2]``.  Node ``i`` stores
``Phi_i S1 + P^{e_i (k-1)} Phi_i S2`` where ``Phi_i = (I, P^{e_i}, ...,
P^{e_i (k-2)})`` and the node indices ``e_i`` lie in pairwise distinct
``q``-cyclotomic cosets modulo ``(q^{b/k} - 1) / gcd(k - 1, q^{b/k} - 1)``.
Reconstruction reduces to one Stein equation ``A Q B - Q = C`` per pair of
participating nodes; the coset condition is exactly what keeps those systems
nonsingular.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Sequence

import numpy as np

from .errors import (B1Violation, B2Violation, CorruptionError, CosetCollision, DegreeOrderViolation,
                     ParameterError, SingularMatrix, SingularStein)
from .extfield import ExtFieldRep, coset_partition, select_representatives
from .gf import prime_field
from .linalg import GfMatrix, nullspace, rref, solve, solve_stein
from .nmbr import _check_packets, _check_shares, symmetric_from_upper, upper_of
from .shares import NodeShare, RepairPacket


@dataclass(frozen=True)
class NmsrParams:
    n: int
    k: int
    q: int
    b: int
    indices: tuple[int, ...] = ()

    @property
    def d(self) -> int:
        return 2 * self.k - 2

    @property
    def m(self) -> int:
        return self.b // self.k

    @property
    def g(self) -> int:
        return gcd(self.k - 1, self.q**self.m - 1)

    @property
    def modulus(self) -> int:
        return (self.q**self.m - 1) // self.g

    @property
    def L(self) -> int:
        """Side of ``S1`` and ``S2``: ``b(k-1)/k``."""
        return self.m * (self.k - 1)

    @property
    def beta(self) -> int:
        return self.m * self.m

    @property
    def alpha(self) -> int:
        return self.beta * (self.k - 1)

    @property
    def B(self) -> int:
        return self.L * (self.L + 1)


def check_conditions(n: int, k: int, q: int, b: int) -> None:
    if k < 2 or n < 2 * k - 1:
        raise DegreeOrderViolation(f"need k >= 2 and n >= d+1 = 2k-1, got n={n}, k={k}")
    try:
        prime_field(q)
    except ValueError as exc:
        raise ParameterError(str(exc)) from None
    if b < 1 or b % k:
        raise B2Violation(f"condition B2 (k | b) fails: k={k}, b={b}")
    m = b // k
    g = gcd(k - 1, q**m - 1)
    if n * g * m > q**m - 1:
        raise B1Violation(
            f"condition B1 (n <= (q^(b/k)-1)/(g*b/k)) fails: n={n}, bound={Fraction(q**m - 1, g * m)}")


def check_indices(params: NmsrParams) -> None:
    """Raise :class:`CosetCollision` unless the indices sit in pairwise distinct cosets."""
    p = params
    if len(p.indices) != p.n:
        raise ParameterError(f"expected {p.n} node indices, got {len(p.indices)}")
    mod = p.modulus
    for a, c in combinations(range(p.n), 2):
        x, y = p.indices[a] % mod, p.indices[c] % mod
        z = x
        for _ in range(p.m):
            if z == y:
                raise CosetCollision(
                    f"indices of nodes {a + 1} and {c + 1} ({x}, {y}) share a {p.q}-cyclotomic coset mod {mod}")
            z = z * p.q % mod


def validate_params(n: int, k: int, q: int, b: int, *, select: bool = True) -> NmsrParams:
    """Check B1/B2 and choose node indices, one per cyclotomic coset.

    ``select=False`` skips the coset enumeration (for formula-only use with
    huge ``q^{b/k}``).
    """
    check_conditions(n, k, q, b)
    p = NmsrParams(n, k, q, b)
    if not select:
        return p
    table = coset_partition(q, p.modulus)
    p = NmsrParams(n, k, q, b, tuple(select_representatives(table, n)))
    check_indices(p)
    return p


class NmsrCode:
    def __init__(self, params: NmsrParams, *, strict: bool = True, rep: ExtFieldRep | None = None) -> None:
        p = params
        if not p.indices:
            raise ParameterError("node indices missing; build params with validate_params(..., select=True)")
        if strict:
            check_indices(p)
        self.params = p
        self.rep = rep or ExtFieldRep(p.q, p.m, max_power=(p.k - 1) * max(p.indices))
        self.Phi = GfMatrix.block([[self.rep.power(e * t) for t in range(p.k - 1)] for e in p.indices])
        self.lambdas = [self.rep.power(e * (p.k - 1)) for e in p.indices]
        self.matrix = GfMatrix.hstack([self.Phi, GfMatrix.block_diag(self.lambdas) @ self.Phi])

    def phi(self, j: int) -> GfMatrix:
        m = self.params.m
        return self.Phi[(j - 1) * m:j * m, :]

    def node_matrix(self, j: int) -> GfMatrix:
        if not 1 <= j <= self.params.n:
            raise ValueError(f"node id {j} outside 1..{self.params.n}")
        m = self.params.m
        return self.matrix[(j - 1) * m:j * m, :]

    def rows_for(self, nodes: Sequence[int]) -> GfMatrix:
        return GfMatrix.vstack([self.node_matrix(j) for j in nodes])

    # -- data layout ----------------------------------------------------------
    def data_matrix(self, file_symbols) -> GfMatrix:
        p = self.params
        x = np.asarray(file_symbols, dtype=np.int64).reshape(-1)
        if x.size != p.B:
            raise ValueError(f"expected {p.B} file symbols, got {x.size}")
        if x.size and (x.min() < 0 or x.max() >= p.q):
            raise ValueError(f"file symbols must lie in [0, {p.q})")
        half = p.B // 2
        field = prime_field(p.q)
        return GfMatrix.vstack([symmetric_from_upper(x[:half], p.L, field),
                                symmetric_from_upper(x[half:], p.L, field)])

    def encode(self, file_symbols) -> list[NodeShare]:
        Y = self.matrix @ self.data_matrix(file_symbols)
        m = self.params.m
        return [NodeShare(j, Y[(j - 1) * m:j * m, :]) for j in range(1, self.params.n + 1)]

    # -- repair ---------------------------------------------------------------
    def repair_helper(self, share: NodeShare, target_id: int) -> RepairPacket:
        self.node_matrix(target_id)
        if share.node_id == target_id:
            raise ValueError(f"node {target_id} cannot help repair itself")
        return RepairPacket(share.node_id, target_id, share.payload @ self.phi(target_id).T)

    def repair_assemble(self, packets: Sequence[RepairPacket]) -> NodeShare:
        p = self.params
        packets = _check_packets(packets, p.d)
        target = packets[0].target_id
        stacked = GfMatrix.vstack([pk.payload for pk in packets])
        try:
            x_phi = solve(self.rows_for([pk.helper_id for pk in packets]), stacked)
        except SingularMatrix as exc:
            raise CorruptionError(f"helper encoding rows are singular (rank {exc.rank})") from None
        both = x_phi.T  # (Phi_l S1 | Phi_l S2)
        L = p.L
        return NodeShare(target, both[:, :L] + self.lambdas[target - 1] @ both[:, L:])

    # -- reconstruction -------------------------------------------------------
    def gamma(self, shares: Sequence[NodeShare]) -> GfMatrix:
        """``(M_K X) Phi_K^T`` for shares sorted by node id."""
        Y = GfMatrix.vstack([s.payload for s in shares])
        Phi_K = GfMatrix.vstack([self.phi(s.node_id) for s in shares])
        return Y @ Phi_K.T

    def _pair(self, G: GfMatrix, s: int, t: int, ls: int, lt: int) -> GfMatrix:
        """Solve for block ``(s, t)`` of ``Q`` from blocks ``(s, t)`` and ``(t, s)`` of ``Gamma``."""
        k, m = self.params.k, self.params.m
        A = self.rep.power(ls * (k - 1))
        Bm = self.rep.power(-lt * (k - 1)).T
        C = (G.get_block(s, t, m) - G.get_block(t, s, m).T) @ Bm
        return solve_stein(A, Bm, C)

    def reconstruct(self, shares: Sequence[NodeShare]) -> np.ndarray:
        p = self.params
        shares = _check_shares(shares, p.k)
        nodes = [s.node_id for s in shares]
        ell = [p.indices[j - 1] for j in nodes]
        G = self.gamma(shares)
        m, k = p.m, p.k
        Q: dict[tuple[int, int], GfMatrix] = {}
        W: dict[tuple[int, int], GfMatrix] = {}
        for s, t in combinations(range(k), 2):
            try:
                q_st = self._pair(G, s, t, ell[s], ell[t])
                q_ts = self._pair(G, t, s, ell[t], ell[s])
            except SingularStein as exc:
                raise CosetCollision(
                    f"nodes {nodes[s]} and {nodes[t]} (indices {ell[s]}, {ell[t]}): {exc}", rank=exc.rank) from None
            if q_ts != q_st.T:
                raise CorruptionError(f"recovered Q blocks ({s},{t}) and ({t},{s}) are not transposes")
            Q[s, t], Q[t, s] = q_st, q_ts
            W[s, t] = G.get_block(s, t, m) - self.rep.power(ell[s] * (k - 1)) @ q_st
            W[t, s] = W[s, t].T
        S1 = self._unfold(W, nodes)
        S2 = self._unfold(Q, nodes)
        return np.concatenate([upper_of(S1), upper_of(S2)])

    def _unfold(self, blocks: dict, nodes: list[int]) -> GfMatrix:
        """Recover ``S`` from off-diagonal blocks ``Phi_s S Phi_t^T``."""
        k = self.params.k
        rows = []
        try:
            for i in range(k - 1):
                others = [j for j in range(k) if j != i]
                row = GfMatrix.hstack([blocks[i, j] for j in others])
                phi_others = GfMatrix.vstack([self.phi(nodes[j]) for j in others])
                rows.append(solve(phi_others, row.T).T)  # Phi_i S
            first = GfMatrix.vstack([self.phi(nodes[i]) for i in range(k - 1)])
            return solve(first, GfMatrix.vstack(rows))
        except SingularMatrix as exc:
            raise CorruptionError(f"Phi submatrix singular (rank {exc.rank})") from None


@lru_cache(maxsize=32)
def code_for(params: NmsrParams) -> NmsrCode:
    return NmsrCode(params)


def build_encoder(params: NmsrParams) -> dict[str, GfMatrix]:
    code = code_for(params)
    return {"Phi": code.Phi, "Lambda": GfMatrix.block_diag(code.lambdas), "M": code.matrix}


def encode(params: NmsrParams, file_symbols) -> list[NodeShare]:
    return code_for(params).encode(file_symbols)


def repair_helper(share: NodeShare, target_id: int, params: NmsrParams) -> RepairPacket:
    return code_for(params).repair_helper(share, target_id)


def repair_assemble(packets: Sequence[RepairPacket], params: NmsrParams) -> NodeShare:
    return code_for(params).repair_assemble(packets)


def reconstruct(shares: Sequence[NodeShare], params: NmsrParams) -> np.ndarray:
    return code_for(params).reconstruct(shares)


def metrics(params: NmsrParams) -> dict:
    p = params
    ratio = Fraction(p.B, p.alpha * p.k)
    assert ratio == 1 - Fraction(1, p.k) + Fraction(1, p.b)
    return {"B": p.B, "alpha": p.alpha, "beta": p.beta, "B_over_alpha_k": ratio,
            "rate": Fraction(p.B, p.alpha * p.n)}


# -- puncturing -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PuncturedNmsr:
    """Parent code with one node forced to store zeros, then dropped.

    ``removed`` is the parent node that is zero-forced; child node ``j`` is
    the ``j``-th of the remaining parent nodes in ascending order.  The
    precode maps a child file of ``B_parent - alpha`` symbols to a parent file
    whose ``removed`` share vanishes; restricted to the rows in ``free`` it is
    the identity.
    """

    parent: NmsrParams
    removed: int
    precode: GfMatrix
    free: tuple[int, ...]
    code: NmsrCode = dc_field(repr=False)

    @property
    def n(self) -> int:
        return self.parent.n - 1

    @property
    def k(self) -> int:
        return self.parent.k - 1

    @property
    def d(self) -> int:
        return self.parent.d - 1

    @property
    def q(self) -> int:
        return self.parent.q

    @property
    def b(self) -> int:
        return self.parent.b

    @property
    def alpha(self) -> int:
        return self.parent.alpha

    @property
    def beta(self) -> int:
        return self.parent.beta

    @property
    def B(self) -> int:
        return self.parent.B - self.parent.alpha

    def metrics(self) -> dict:
        return {"B": self.B, "alpha": self.alpha, "beta": self.beta,
                "B_over_alpha_k": Fraction(self.B, self.alpha * self.k),
                "rate": Fraction(self.B, self.alpha * self.n)}

    def parent_node(self, j: int) -> int:
        if not 1 <= j <= self.n:
            raise ValueError(f"node id {j} outside 1..{self.n}")
        return j if j < self.removed else j + 1

    def child_node(self, i: int) -> int:
        return i if i < self.removed else i - 1

    def encode(self, file_symbols) -> list[NodeShare]:
        f = np.asarray(file_symbols, dtype=np.int64).reshape(-1)
        if f.size != self.B:
            raise ValueError(f"expected {self.B} file symbols, got {f.size}")
        x = (self.precode @ GfMatrix(f.reshape(-1, 1), self.q)).array.reshape(-1)
        shares = self.code.encode(x)
        if not shares[self.removed - 1].payload.is_zero():
            raise CorruptionError("precode failed to zero the punctured node")  # pragma: no cover
        return [NodeShare(self.child_node(s.node_id), s.payload) for s in shares if s.node_id != self.removed]

    def repair_helper(self, share: NodeShare, target_id: int) -> RepairPacket:
        pk = self.code.repair_helper(NodeShare(self.parent_node(share.node_id), share.payload),
                                     self.parent_node(target_id))
        return RepairPacket(share.node_id, target_id, pk.payload)

    def repair_assemble(self, packets: Sequence[RepairPacket]) -> NodeShare:
        packets = list(packets)
        if len(packets) != self.d:
            raise ValueError(f"repair needs exactly d={self.d} packets, got {len(packets)}")
        target = packets[0].target_id
        p = self.parent
        lifted = [RepairPacket(self.parent_node(pk.helper_id), self.parent_node(pk.target_id), pk.payload)
                  for pk in packets]
        lifted.append(RepairPacket(self.removed, self.parent_node(target), GfMatrix.zeros(p.m, p.m, p.q)))
        share = self.code.repair_assemble(lifted)
        return NodeShare(target, share.payload)

    def reconstruct(self, shares: Sequence[NodeShare]) -> np.ndarray:
        shares = list(shares)
        if len(shares) != self.k:
            raise ValueError(f"reconstruction needs exactly k={self.k} shares, got {len(shares)}")
        p = self.parent
        lifted = [NodeShare(self.parent_node(s.node_id), s.payload) for s in shares]
        lifted.append(NodeShare(self.removed, GfMatrix.zeros(p.m, p.L, p.q)))
        x = self.code.reconstruct(lifted)
        return x[list(self.free)]


def share_map(code: NmsrCode, node: int) -> GfMatrix:
    """The ``alpha x B`` matrix sending a parent file to ``node``'s share (row-major)."""
    p = code.params
    cols = []
    unit = np.zeros(p.B, dtype=np.int64)
    M = code.node_matrix(node)
    for u in range(p.B):
        unit[u] = 1
        cols.append((M @ code.data_matrix(unit)).array.reshape(-1))
        unit[u] = 0
    return GfMatrix(np.column_stack(cols), p.q)


def puncture(parent_params: NmsrParams, node: int | None = None) -> PuncturedNmsr:
    """Derive the ``(n-1, k-1, d-1)`` code with ``B = B_parent - alpha``.

    The zero-forced node must have a share map of full rank ``alpha`` (as a
    systematic node does).  By default the lowest-numbered such node is used;
    nodes whose index generates a proper subfield, such as index 0, fall
    short of full rank.
    """
    code = code_for(parent_params)
    candidates = [node] if node is not None else range(1, parent_params.n + 1)
    best = None
    for j in candidates:
        G = share_map(code, j)
        _, pivots = rref(G)
        if len(pivots) == parent_params.alpha:
            N = nullspace(G)
            free = tuple(c for c in range(parent_params.B) if c not in set(pivots))
            return PuncturedNmsr(parent_params, j, N, free, code)
        best = len(pivots) if best is None else max(best, len(pivots))
    raise ParameterError(f"no node share map of rank alpha={parent_params.alpha} (best rank {best})")
