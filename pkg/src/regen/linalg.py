"""Dense matrices over a prime field.

Entries are kept as canonical residues in an ``int64`` numpy array; every
operation reduces modulo ``q`` before returning.  Since ``q <= 2**16`` a single
product fits in 32 bits, so row-major dot products stay exact for any
dimension this package builds.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import SingularMatrix, SingularStein
from .gf import FieldElement, FieldMismatch, PrimeField, prime_field


class GfMatrix:
    """Immutable dense matrix over ``F_q``.

    Parameters
    ----------
    entries : array_like
        2-D integer data; reduced modulo ``q``.
    field : PrimeField or int
        The base field (or its prime modulus).
    """

    __slots__ = ("_a", "field")

    def __init__(self, entries, field: PrimeField | int) -> None:
        if isinstance(field, int):
            field = prime_field(field)
        a = np.array(entries, dtype=np.int64)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {a.shape}")
        a %= field.q
        a.setflags(write=False)
        self._a = a
        self.field = field

    @classmethod
    def _wrap(cls, a: np.ndarray, field: PrimeField) -> "GfMatrix":
        m = cls.__new__(cls)
        a = np.ascontiguousarray(a % field.q, dtype=np.int64)
        a.setflags(write=False)
        m._a = a
        m.field = field
        return m

    # -- constructors ------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int, field: PrimeField | int) -> "GfMatrix":
        field = prime_field(field) if isinstance(field, int) else field
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), field)

    @classmethod
    def identity(cls, size: int, field: PrimeField | int) -> "GfMatrix":
        field = prime_field(field) if isinstance(field, int) else field
        return cls._wrap(np.eye(size, dtype=np.int64), field)

    @classmethod
    def random(cls, rows: int, cols: int, field: PrimeField | int, rng: np.random.Generator) -> "GfMatrix":
        field = prime_field(field) if isinstance(field, int) else field
        return cls._wrap(rng.integers(0, field.q, size=(rows, cols), dtype=np.int64), field)

    @classmethod
    def hstack(cls, blocks: Sequence["GfMatrix"]) -> "GfMatrix":
        field = _common_field(blocks)
        return cls._wrap(np.hstack([b._a for b in blocks]), field)

    @classmethod
    def vstack(cls, blocks: Sequence["GfMatrix"]) -> "GfMatrix":
        field = _common_field(blocks)
        return cls._wrap(np.vstack([b._a for b in blocks]), field)

    @classmethod
    def block(cls, grid: Sequence[Sequence["GfMatrix"]]) -> "GfMatrix":
        return cls.vstack([cls.hstack(row) for row in grid])

    @classmethod
    def block_diag(cls, blocks: Sequence["GfMatrix"]) -> "GfMatrix":
        field = _common_field(blocks)
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = np.zeros((rows, cols), dtype=np.int64)
        r = c = 0
        for b in blocks:
            out[r:r + b.rows, c:c + b.cols] = b._a
            r += b.rows
            c += b.cols
        return cls._wrap(out, field)

    # -- accessors ---------------------------------------------------------
    @property
    def array(self) -> np.ndarray:
        """Read-only view of the residues."""
        return self._a

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def T(self) -> "GfMatrix":
        return GfMatrix._wrap(self._a.T, self.field)

    def __getitem__(self, key):
        if isinstance(key, tuple) and len(key) == 2 and all(isinstance(k, (int, np.integer)) for k in key):
            return FieldElement(int(self._a[key]), self.field)
        sub = self._a[key]
        if sub.ndim != 2:
            raise IndexError("use two slices (or two integers) to index a GfMatrix")
        return GfMatrix._wrap(sub, self.field)

    def get_block(self, i: int, j: int, size: int | tuple[int, int]) -> "GfMatrix":
        """Block ``(i, j)`` (zero-based) of a matrix partitioned into ``size`` blocks."""
        r, c = (size, size) if isinstance(size, int) else size
        return self[i * r:(i + 1) * r, j * c:(j + 1) * c]

    def block_rows(self, indices: Iterable[int], size: int) -> "GfMatrix":
        return GfMatrix.vstack([self[i * size:(i + 1) * size, :] for i in indices])

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def is_zero(self) -> bool:
        return not self._a.any()

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "GfMatrix") -> None:
        if not isinstance(other, GfMatrix):
            raise TypeError(f"expected GfMatrix, got {type(other).__name__}")
        if other.field.q != self.field.q:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "GfMatrix") -> "GfMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return GfMatrix._wrap(self._a + other._a, self.field)

    def __sub__(self, other: "GfMatrix") -> "GfMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return GfMatrix._wrap(self._a - other._a, self.field)

    def __neg__(self) -> "GfMatrix":
        return GfMatrix._wrap(-self._a, self.field)

    def __matmul__(self, other: "GfMatrix") -> "GfMatrix":
        return matmul(self, other)

    def scale(self, c: int) -> "GfMatrix":
        return GfMatrix._wrap(self._a * (c % self.q), self.field)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GfMatrix):
            return NotImplemented
        return self.q == other.q and self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self.q, self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"GfMatrix(q={self.q}, shape={self.shape},\n{self._a})"

    def inv(self) -> "GfMatrix":
        return invert(self)

    def rank(self) -> int:
        return rank(self)


def _common_field(blocks: Sequence[GfMatrix]) -> PrimeField:
    if not blocks:
        raise ValueError("need at least one block")
    q = blocks[0].q
    for b in blocks:
        if b.q != q:
            raise FieldMismatch(f"GF({q}) vs {b.field}")
    return blocks[0].field


def matmul(a: GfMatrix, b: GfMatrix) -> GfMatrix:
    a._check(b)
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    q = a.q
    if a.cols * (q - 1) ** 2 < 2**62:
        return GfMatrix._wrap(a._a @ b._a, a.field)
    # very wide products: reduce partial sums in chunks
    out = np.zeros((a.rows, b.cols), dtype=np.int64)
    step = max(1, (2**62) // ((q - 1) ** 2))
    for s in range(0, a.cols, step):
        out = (out + a._a[:, s:s + step] @ b._a[s:s + step, :]) % q
    return GfMatrix._wrap(out, a.field)


def rref(a: GfMatrix) -> tuple[GfMatrix, list[int]]:
    """Reduced row echelon form and the pivot columns.

    Pivoting picks the first nonzero entry in each column.
    """
    q = a.q
    m = a._a.copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, q) % q
        col = m[:, c].copy()
        col[r] = 0
        if col.any():
            m = (m - np.outer(col, m[r])) % q
        pivots.append(c)
        r += 1
    return GfMatrix._wrap(m, a.field), pivots


def rank(a: GfMatrix) -> int:
    return len(rref(a)[1])


def invert(a: GfMatrix) -> GfMatrix:
    """Inverse by Gauss-Jordan elimination; raises :class:`SingularMatrix`."""
    if a.rows != a.cols:
        raise ValueError(f"cannot invert non-square {a.shape}")
    n = a.rows
    aug = GfMatrix._wrap(np.hstack([a._a, np.eye(n, dtype=np.int64)]), a.field)
    red, pivots = rref(aug)
    r = sum(1 for p in pivots if p < n)
    if r < n:
        raise SingularMatrix(f"matrix of size {n} is singular (rank {r})", rank=r)
    return red[:, n:]


def solve(a: GfMatrix, b: GfMatrix) -> GfMatrix:
    """Unique ``X`` with ``a @ X = b`` for square invertible ``a``."""
    if a.rows != a.cols or a.rows != b.rows:
        raise ValueError(f"incompatible system {a.shape} vs {b.shape}")
    n = a.rows
    a._check(b)
    red, pivots = rref(GfMatrix._wrap(np.hstack([a._a, b._a]), a.field))
    r = sum(1 for p in pivots if p < n)
    if r < n:
        raise SingularMatrix(f"system matrix of size {n} is singular (rank {r})", rank=r)
    return red[:, n:]


def nullspace(a: GfMatrix) -> GfMatrix:
    """Basis of ``{x : a @ x = 0}`` as the columns of a ``cols x nullity`` matrix.

    The basis is the standard one read off the RREF: restricted to the
    non-pivot coordinates it is the identity.
    """
    red, pivots = rref(a)
    n = a.cols
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, p in enumerate(pivots):
            basis[p, j] = -red._a[i, f]
    return GfMatrix._wrap(basis, a.field)


def kron(a: GfMatrix, b: GfMatrix) -> GfMatrix:
    """Kronecker product; block ``(i, j)`` is ``a[i, j] * b``."""
    a._check(b)
    return GfMatrix._wrap(np.kron(a._a, b._a), a.field)


def vec(a: GfMatrix) -> GfMatrix:
    """Stack the columns of ``a`` into one column vector."""
    return GfMatrix._wrap(a._a.reshape(-1, order="F").reshape(-1, 1), a.field)


def unvec(v: GfMatrix, rows: int, cols: int) -> GfMatrix:
    return GfMatrix._wrap(v._a.reshape(-1).reshape((rows, cols), order="F"), v.field)


def stein_system(a: GfMatrix, b: GfMatrix) -> GfMatrix:
    """The matrix ``b^T (x) a - I`` acting on ``vec(X)`` for ``a X b - X``."""
    m = a.rows
    return kron(b.T, a) - GfMatrix.identity(m * m, a.field)


def solve_stein(a: GfMatrix, b: GfMatrix, c: GfMatrix) -> GfMatrix:
    """Solve ``a @ X @ b - X = c`` for square ``X``.

    Raises
    ------
    SingularStein
        If ``b^T (x) a - I`` is singular, i.e. the solution is not unique.
    """
    m = a.rows
    for name, x in (("a", a), ("b", b), ("c", c)):
        if x.shape != (m, m):
            raise ValueError(f"{name} has shape {x.shape}, expected {(m, m)}")
    system = stein_system(a, b)
    try:
        x = solve(system, vec(c))
    except SingularMatrix as exc:
        raise SingularStein(
            f"Stein system of size {m * m} is singular (rank {exc.rank}); 1 is an eigenvalue of b^T (x) a",
            rank=exc.rank,
        ) from None
    return unvec(x, m, m)
