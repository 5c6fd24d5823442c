"""Dense matrices and exact linear algebra over GF(q).

Matrices are :class:`MatGF` (an int64 array plus its field); vectors are plain
1-D integer numpy arrays.  ``x @ M`` and ``M @ y`` multiply over the field.

Elimination runs in pure Python on row lists with first-nonzero pivoting;
the matrices met here are small and exact integer arithmetic is what matters.
Over GF(2) rows are packed into Python ints.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, FieldMismatch
from .gf import GF


class MatGF:
    """Immutable dense matrix over a finite field."""

    __slots__ = ("field", "a")
    # make ``ndarray @ MatGF`` defer to MatGF.__rmatmul__
    __array_ufunc__ = None

    def __init__(self, field: GF, data, *, shape: tuple[int, int] | None = None):
        arr = field.asarray(data)
        if shape is not None:
            arr = arr.reshape(shape)
        if arr.ndim != 2:
            raise DimensionMismatch(f"matrix data must be 2-D, got shape {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        self.field = field
        self.a = arr

    @classmethod
    def zeros(cls, field: GF, rows: int, cols: int) -> MatGF:
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: GF, n: int) -> MatGF:
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field: GF, rows: Sequence[Sequence[int]], cols: int | None = None) -> MatGF:
        if len(rows) == 0:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, np.array([list(r) for r in rows], dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def T(self) -> MatGF:
        return MatGF(self.field, self.a.T)

    def row(self, i: int) -> np.ndarray:
        return self.a[i].copy()

    def column(self, j: int) -> np.ndarray:
        return self.a[:, j].copy()

    def row_sub(self, index: Iterable[int]) -> MatGF:
        """``M_E``: rows indexed by ``E`` in the given (increasing) order."""
        idx = list(index)
        return MatGF(self.field, self.a[idx, :].reshape(len(idx), self.cols))

    def col_sub(self, index: Iterable[int]) -> MatGF:
        """``M[F]``: columns indexed by ``F`` in the given (increasing) order."""
        idx = list(index)
        return MatGF(self.field, self.a[:, idx].reshape(self.rows, len(idx)))

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def _same_field(self, other: MatGF) -> None:
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other):
        if isinstance(other, MatGF):
            self._same_field(other)
            if self.cols != other.rows:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            return MatGF(self.field, self.field.matmul(self.a, other.a).reshape(self.rows, other.cols))
        vec = np.asarray(other, dtype=np.int64)
        if vec.shape != (self.cols,):
            raise DimensionMismatch(f"{self.shape} @ vector of shape {vec.shape}")
        return self.field.matmul(self.a, vec).reshape(self.rows)

    def __rmatmul__(self, other):
        vec = np.asarray(other, dtype=np.int64)
        if vec.ndim == 1:
            if vec.shape[0] != self.rows:
                raise DimensionMismatch(f"vector of length {vec.shape[0]} @ {self.shape}")
            return self.field.matmul(vec, self.a).reshape(self.cols)
        if vec.shape[1] != self.rows:
            raise DimensionMismatch(f"{vec.shape} @ {self.shape}")
        return self.field.matmul(vec, self.a).reshape(vec.shape[0], self.cols)

    def __add__(self, other: MatGF) -> MatGF:
        self._same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return MatGF(self.field, self.field.vadd(self.a, other.a))

    def __sub__(self, other: MatGF) -> MatGF:
        self._same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return MatGF(self.field, self.field.vsub(self.a, other.a))

    def __eq__(self, other):
        return (
            isinstance(other, MatGF)
            and self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.field, self.shape, self.a.tobytes()))

    def __repr__(self):
        return f"MatGF({self.field.spec}, {self.tolist()})"


def hstack(mats: Sequence[MatGF]) -> MatGF:
    field = mats[0].field
    for m in mats:
        mats[0]._same_field(m)
    return MatGF(field, np.hstack([m.a for m in mats]))


def vstack(mats: Sequence[MatGF]) -> MatGF:
    field = mats[0].field
    for m in mats:
        mats[0]._same_field(m)
    return MatGF(field, np.vstack([m.a for m in mats]))


def unit(n: int, i: int) -> np.ndarray:
    e = np.zeros(n, dtype=np.int64)
    e[i] = 1
    return e


def support(v) -> frozenset[int]:
    return frozenset(int(i) for i in np.flatnonzero(np.asarray(v)))


def weight(v) -> int:
    return int(np.count_nonzero(np.asarray(v)))


def distance(u, v) -> int:
    return int(np.count_nonzero(np.asarray(u) != np.asarray(v)))


# --- elimination ----------------------------------------------------------


def rref_rows(field: GF, rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of a list of rows.

    Returns the nonzero RREF rows and their pivot columns.
    """
    work = [[int(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = field.inv(work[r][c])
        if inv != 1:
            work[r] = [field.mul(inv, x) for x in work[r]]
        prow = work[r]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(work[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def _rank_gf2(rows: Iterable[Sequence[int]]) -> int:
    basis: list[int] = []
    for row in rows:
        v = 0
        for bit in row:
            v = (v << 1) | int(bit)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def rank_rows(field: GF, rows: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    if len(rows) == 0:
        return 0
    if field.q == 2:
        return _rank_gf2(rows)
    return len(rref_rows(field, rows, len(rows[0]) if ncols is None else ncols)[0])


def rank(M: MatGF) -> int:
    """Dimension of the row space of ``M``."""
    return rank_rows(M.field, M.a.tolist(), M.cols)


def rref(M: MatGF) -> tuple[MatGF, list[int]]:
    rows, pivots = rref_rows(M.field, M.a.tolist(), M.cols)
    return MatGF.from_rows(M.field, rows, M.cols) if rows else MatGF.zeros(M.field, 0, M.cols), pivots


def solve_left(A: MatGF, b) -> np.ndarray | None:
    """One solution ``y`` of ``y @ A == b``, or ``None`` when infeasible.

    Free variables are set to zero.  When solvable, the solution set has
    ``q ** (A.rows - rank(A))`` elements.
    """
    b = np.asarray(b, dtype=np.int64)
    if b.shape != (A.cols,):
        raise DimensionMismatch(f"right-hand side of length {b.shape} for {A.shape}")
    field = A.field
    # y A = b  <=>  A^T y^T = b^T ; eliminate on [A^T | b]
    aug = np.hstack([A.a.T, b[:, None]]).tolist()
    rows, pivots = rref_rows(field, aug, A.rows + 1)
    if pivots and pivots[-1] == A.rows:
        return None
    y = np.zeros(A.rows, dtype=np.int64)
    for row, p in zip(rows, pivots):
        y[p] = row[-1]
    return y


def nullspace_left(A: MatGF) -> list[np.ndarray]:
    """Basis of ``{y : y @ A == 0}``, of size ``A.rows - rank(A)``."""
    field = A.field
    n = A.rows
    rows, pivots = rref_rows(field, A.a.T.tolist(), n)
    pivset = set(pivots)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        y = np.zeros(n, dtype=np.int64)
        y[free] = 1
        for row, p in zip(rows, pivots):
            y[p] = field.neg(row[free])
        basis.append(y)
    return basis


def span_member(S: Sequence, v, field: GF) -> bool:
    """Whether ``v`` lies in the span of the vectors ``S``."""
    v = np.asarray(v, dtype=np.int64)
    if len(S) == 0:
        return not v.any()
    return solve_left(MatGF(field, np.vstack([np.asarray(s) for s in S])), v) is not None


def inverse(M: MatGF) -> MatGF:
    if M.rows != M.cols:
        raise DimensionMismatch(f"cannot invert {M.shape}")
    n = M.rows
    aug = np.hstack([M.a, np.eye(n, dtype=np.int64)]).tolist()
    rows, pivots = rref_rows(M.field, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ValueError("matrix is singular")
    return MatGF(M.field, np.array([r[n:] for r in rows], dtype=np.int64))


class RowBasis:
    """Incrementally grown echelon basis supporting push/pop.

    Each stored row has a pivot coordinate that is zero in every row pushed
    after it, so reduction in insertion order clears all pivots.
    """

    def __init__(self, field: GF, ncols: int):
        self.field = field
        self.ncols = ncols
        self._binary = field.q == 2
        self._rows: list = []
        self._pivots: list[int] = []

    def __len__(self) -> int:
        return len(self._rows)

    def _pack(self, row: Sequence[int]):
        if self._binary:
            v = 0
            for k, bit in enumerate(row):
                if bit:
                    v |= 1 << k
            return v
        return list(int(x) for x in row)

    def reduce(self, row):
        """Residual of ``row`` (packed) after eliminating all pivots."""
        if self._binary:
            v = row if isinstance(row, int) else self._pack(row)
            for p, b in zip(self._pivots, self._rows):
                if (v >> p) & 1:
                    v ^= b
            return v
        f = self.field
        v = list(row)
        for p, b in zip(self._pivots, self._rows):
            c = v[p]
            if c:
                v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, b)]
        return v

    def push(self, row) -> bool:
        """Add ``row``; returns whether it was independent of the basis."""
        v = self.reduce(row)
        if self._binary:
            if not v:
                return False
            p = (v & -v).bit_length() - 1
        else:
            p = next((k for k, x in enumerate(v) if x), None)
            if p is None:
                return False
            inv = self.field.inv(v[p])
            v = [self.field.mul(inv, x) for x in v]
        self._rows.append(v)
        self._pivots.append(p)
        return True

    def pop(self) -> None:
        self._rows.pop()
        self._pivots.pop()

    def pack(self, row: Sequence[int]):
        return self._pack(row)
