"""Linear [n, k, d]_q codes given by spanning sets.

Distances are computed by exhaustive enumeration of codewords, guarded by an
explicit budget on ``q**k``.  Decoding is nearest-codeword search.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    DEFAULT_BUDGET,
    DecodeFailure,
    DimensionMismatch,
    NotEnoughFieldElements,
    RepeatedAlpha,
    ValidationError,
    ZeroCode,
    check_budget,
)
from .gf import GF
from .matlin import MatGF, nullspace_left, rank, rref, solve_left


@lru_cache(maxsize=64)
def all_vectors(q: int, k: int) -> np.ndarray:
    """Every vector of ``F_q^k`` as rows, in lexicographic order (read-only)."""
    if k == 0:
        out = np.zeros((1, 0), dtype=np.int64)
    else:
        grids = np.indices((q,) * k, dtype=np.int64)
        out = grids.reshape(k, -1).T.copy()
    out.flags.writeable = False
    return out


def row_ids(rows: np.ndarray, q: int) -> np.ndarray:
    """Map each row of an integer array to a dense id; equal rows share ids."""
    rows = np.asarray(rows, dtype=np.int64)
    n, k = rows.shape
    if k == 0:
        return np.zeros(n, dtype=np.int64)
    if k * (q - 1).bit_length() <= 62:
        weights = q ** np.arange(k, dtype=np.int64)
        return rows @ weights
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1)


class LinearCode:
    """A nonzero linear code, the row space of ``generators``.

    Parameters
    ----------
    generators : MatGF
        Matrix whose rows span the code; need not be independent.
    """

    def __init__(self, generators: MatGF):
        basis, pivots = rref(generators)
        if basis.rows == 0:
            raise ZeroCode("spanning set generates the zero code")
        self.field: GF = generators.field
        self.n: int = generators.cols
        self.k: int = basis.rows
        self.generator: MatGF = basis
        self.pivots: tuple[int, ...] = tuple(pivots)
        self._d: int | None = None

    @classmethod
    def from_spanning(cls, field: GF, vectors: Sequence) -> LinearCode:
        if len(vectors) == 0:
            raise ZeroCode("empty spanning set")
        arr = np.vstack([np.asarray(v, dtype=np.int64) for v in vectors])
        return cls(MatGF(field, arr))

    def __repr__(self):
        return f"LinearCode([{self.n},{self.k}]_{self.field.q})"

    def __eq__(self, other):
        return (
            isinstance(other, LinearCode)
            and self.field == other.field
            and self.generator == other.generator
        )

    def __hash__(self):
        return hash(self.generator)

    @property
    def size(self) -> int:
        return self.field.q**self.k

    def codewords(self, budget: int = DEFAULT_BUDGET) -> np.ndarray:
        """All ``q**k`` codewords as rows, ordered by message lexicographically."""
        check_budget("codeword enumeration", self.size, budget)
        return self._codewords

    @cached_property
    def _codewords(self) -> np.ndarray:
        out = self.field.matmul(all_vectors(self.field.q, self.k), self.generator.a)
        out.flags.writeable = False
        return out

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.n,):
            raise DimensionMismatch(f"vector of length {v.shape} for code of length {self.n}")
        return solve_left(self.generator, v) is not None

    def weight_distribution(self, budget: int = DEFAULT_BUDGET) -> list[int]:
        w = np.count_nonzero(self.codewords(budget), axis=1)
        return np.bincount(w, minlength=self.n + 1).tolist()

    def min_distance(self, budget: int = DEFAULT_BUDGET) -> int:
        if self._d is None:
            w = np.count_nonzero(self.codewords(budget)[1:], axis=1)
            self._d = int(w.min())
        return self._d

    def dual(self) -> LinearCode:
        """``C^⊥``; raises :class:`ZeroCode` when ``C`` is the full space."""
        basis = nullspace_left(self.generator.T)
        if not basis:
            raise ZeroCode("dual of the full space is the zero code")
        return LinearCode(MatGF(self.field, np.vstack(basis)))

    def dual_distance(self, budget: int = DEFAULT_BUDGET) -> int:
        """Minimum distance of the dual; ``n + 1`` for the full space."""
        if self.k == self.n:
            return self.n + 1
        return self.dual().min_distance(budget)

    def singleton_defect(self, budget: int = DEFAULT_BUDGET) -> int:
        return self.n - self.k + 1 - self.min_distance(budget)

    def is_mds(self) -> bool:
        return is_mds(self.generator)


def code_distance(field: GF, generators: MatGF, budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """``(d, d_dual)`` of the row space, with the zero code given ``d = n + 1``, ``d_dual = 1``."""
    if rank(generators) == 0:
        return generators.cols + 1, 1
    code = LinearCode(generators)
    return code.min_distance(budget), code.dual_distance(budget)


def is_mds(G: MatGF) -> bool:
    """Every ``k`` columns of the full-rank ``k x n`` matrix ``G`` are independent."""
    k = rank(G)
    if k != G.rows:
        return False
    return all(rank(G.col_sub(cols)) == k for cols in itertools.combinations(range(G.cols), k))


def vandermonde_mds(field: GF, rows: int, cols: int, alphas: Sequence[int] | None = None) -> MatGF:
    """Vandermonde matrix whose row ``i`` is ``(alpha_1**i, ..., alpha_N**i)``.

    With pairwise distinct nonzero ``alphas`` it generates an
    ``[N, rows, N - rows + 1]`` MDS code, and so does every block of
    consecutive rows.
    """
    if cols > field.q - 1:
        raise NotEnoughFieldElements(f"{cols} distinct nonzero elements needed, {field!r} has {field.q - 1}")
    if rows > cols:
        raise ValidationError(f"{rows} rows exceed {cols} columns")
    if alphas is None:
        alphas = list(range(1, cols + 1))
    alphas = [field._check(a) for a in alphas]
    if len(alphas) != cols:
        raise ValidationError(f"{len(alphas)} alphas for {cols} columns")
    if 0 in alphas:
        raise ValidationError("alphas must be nonzero")
    if len(set(alphas)) != len(alphas):
        raise RepeatedAlpha(f"alphas {alphas} are not pairwise distinct")
    data = [[field.pow(a, i) for a in alphas] for i in range(rows)]
    return MatGF(field, np.array(data, dtype=np.int64).reshape(rows, cols))


def bounded_distance_decode(code: LinearCode, y, delta: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """The unique codeword within Hamming distance ``delta`` of ``y``.

    Raises :class:`DecodeFailure` if no codeword is that close.
    """
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (code.n,):
        raise DimensionMismatch(f"received word of length {y.shape} for code of length {code.n}")
    d = code.min_distance(budget)
    if 2 * delta + 1 > d:
        raise ValidationError(f"radius {delta} exceeds unique-decoding radius of a d={d} code")
    words = code.codewords(budget)
    dist = np.count_nonzero(words != y, axis=1)
    best = int(np.argmin(dist))
    if dist[best] > delta:
        raise DecodeFailure(f"no codeword within distance {delta} (nearest at {int(dist[best])})")
    return words[best].copy()


def orthogonal_array_violations(code: LinearCode, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """Column subsets of size ``r <= d_dual - 1`` on which the codeword table is unbalanced.

    An empty result means every such ``r``-subset of columns shows each
    ``r``-tuple exactly ``q**(k - r)`` times.
    """
    words = code.codewords(budget)
    q = code.field.q
    strength = min(code.dual_distance(budget) - 1, code.n)
    bad = []
    for r in range(1, strength + 1):
        expected = q ** (code.k - r) if r <= code.k else 0
        for cols in itertools.combinations(range(code.n), r):
            ids = row_ids(words[:, cols], q)
            counts = np.bincount(ids, minlength=q**r)
            if counts.min() != expected or counts.max() != expected:
                bad.append(cols)
    return bad
