"""Scalar linear index codes ``E(x) = x L``.

``C(L)`` is the span of the transposed columns of ``L``, i.e. the row space of
``L.T``.  Receiver ``i`` can decode exactly when some ``u`` supported on
``X_i`` has ``u + e_{f(i)}`` in ``C(L)``; :func:`find_combination` decides that
with a single linear solve.
"""

from __future__ import annotations

import itertools
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    DEFAULT_BUDGET,
    Ambiguous,
    BudgetExceeded,
    DecodeFailure,
    DimensionMismatch,
    FieldMismatch,
    ParseError,
    ValidationError,
    check_budget,
)
from .gf import GF, parse_field
from .icsi import IcsiInstance, adversary_free_coords
from .lincode import LinearCode, all_vectors
from .matlin import MatGF, RowBasis, rank_rows, solve_left, unit


def find_combination(G: MatGF, allowed: Iterable[int], target: int) -> np.ndarray | None:
    """Coefficients ``y`` with ``c = y @ G`` satisfying ``c[target] == 1`` and
    ``c[k] == 0`` for every ``k`` outside ``allowed ∪ {target}``.

    ``None`` if the row space of ``G`` has no such vector.
    """
    keep = set(allowed) | {target}
    cols = sorted(set(range(G.cols)) - keep) + [target]
    rhs = np.zeros(len(cols), dtype=np.int64)
    rhs[-1] = 1
    if G.rows == 0:
        return None
    return solve_left(G.col_sub(cols), rhs)


@dataclass(frozen=True)
class DecodeRecipe:
    """``x[f(i)] = (x @ L) . beta - x . u`` with ``u`` supported on ``X_i``."""

    receiver: int
    demand: int
    u: np.ndarray
    beta: np.ndarray

    def apply(self, s, x_side: Sequence[int], side: Sequence[int], field: GF) -> int:
        """Evaluate on broadcast ``s`` and side values ``x_side`` (aligned with ``side``)."""
        a = int(field.matmul(np.asarray(s, dtype=np.int64), self.beta))
        known = int(field.matmul(np.asarray(x_side, dtype=np.int64), self.u[list(side)])) if side else 0
        return field.sub(a, known)


@dataclass(frozen=True)
class Validity:
    failing: tuple[int, ...]
    weight_check: bool | None = None

    @property
    def valid(self) -> bool:
        return not self.failing

    def __bool__(self):
        return self.valid


@dataclass(frozen=True, eq=False)
class IndexCode:
    """Linear index code for ``inst`` based on the ``n x N`` matrix ``L``."""

    inst: IcsiInstance
    L: MatGF

    def __post_init__(self):
        if self.L.field != self.inst.field:
            raise FieldMismatch(f"code over {self.L.field!r}, instance over {self.inst.field!r}")
        if self.L.rows != self.inst.n:
            raise DimensionMismatch(f"L has {self.L.rows} rows but the instance has n={self.inst.n}")

    @property
    def field(self) -> GF:
        return self.inst.field

    @property
    def N(self) -> int:
        return self.L.cols

    @cached_property
    def generator(self) -> MatGF:
        """``L.T``, whose row space is ``C(L)``."""
        return self.L.T

    @cached_property
    def code(self) -> LinearCode:
        return LinearCode(self.generator)

    @cached_property
    def _recipes(self) -> dict:
        return {}


def encode(code: IndexCode, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (code.inst.n,):
        raise DimensionMismatch(f"message of shape {x.shape}, expected ({code.inst.n},)")
    return x @ code.L


def side_values(inst: IcsiInstance, i: int, x) -> list[int]:
    x = np.asarray(x)
    return [int(x[j]) for j in inst.side(i)]


def decode_recipe(code: IndexCode, i: int) -> DecodeRecipe | None:
    if i not in code._recipes:
        code._recipes[i] = _find_recipe(code, i)
    return code._recipes[i]


def _find_recipe(code: IndexCode, i: int) -> DecodeRecipe | None:
    inst = code.inst
    f = inst.demands[i]
    beta = find_combination(code.generator, inst.side_info[i], f)
    if beta is None:
        return None
    c = beta @ code.generator
    u = code.field.vsub(c, unit(inst.n, f))
    return DecodeRecipe(i, f, u, beta)


def decode(code: IndexCode, i: int, s, x_side: Sequence[int]) -> int:
    recipe = decode_recipe(code, i)
    if recipe is None:
        raise DecodeFailure(f"receiver {i} cannot decode")
    return recipe.apply(s, x_side, code.inst.side(i), code.field)


def _receiver_min_weight(code: IndexCode, i: int, budget: int) -> int:
    """Min ``weight(z L)`` over ``z`` with ``z_{X_i} = 0`` and ``z_{f(i)} != 0``."""
    inst, field = code.inst, code.field
    q = field.q
    free = sorted(adversary_free_coords(inst, i))
    check_budget(f"receiver {i} weight enumeration", q ** (len(free) + 1), budget)
    f = inst.demands[i]
    rest = all_vectors(q, len(free))
    heads = np.repeat(np.arange(1, q, dtype=np.int64), rest.shape[0])[:, None]
    Z = np.hstack([heads, np.tile(rest, (q - 1, 1))])
    rows = code.L.row_sub([f] + free)
    if code.N == 0:
        return 0
    return int(np.count_nonzero(Z @ rows, axis=1).min())


def is_valid(code: IndexCode, cross_check: bool = True, budget: int = DEFAULT_BUDGET) -> Validity:
    """Validity by decode recipes, with the weight criterion as a cross-check.

    The cross-check is skipped (``weight_check`` is ``None``) when its
    enumeration would exceed ``budget``.
    """
    failing = tuple(i for i in range(code.inst.m) if decode_recipe(code, i) is None)
    weight_ok = None
    if cross_check:
        try:
            weight_ok = all(_receiver_min_weight(code, i, budget) >= 1 for i in range(code.inst.m))
        except BudgetExceeded:
            pass
        if weight_ok is not None and weight_ok != (not failing):
            raise AssertionError("recipe and weight criteria disagree on validity")
    return Validity(failing, weight_ok)


def is_delta_error_correcting(code: IndexCode, delta: int, budget: int = DEFAULT_BUDGET) -> bool:
    if delta < 0:
        raise ValidationError("delta must be non-negative")
    need = 2 * delta + 1
    return all(_receiver_min_weight(code, i, budget) >= need for i in range(code.inst.m))


def decode_with_errors(code: IndexCode, i: int, y, x_side: Sequence[int], delta: int,
                       budget: int = DEFAULT_BUDGET) -> int:
    """Demanded value of receiver ``i`` from a word with at most ``delta`` errors.

    Searches every message consistent with the side information for one whose
    encoding lies within ``delta`` of ``y``.
    """
    inst, field = code.inst, code.field
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (code.N,):
        raise DimensionMismatch(f"received word of shape {y.shape}, expected ({code.N},)")
    side = inst.side(i)
    if len(x_side) != len(side):
        raise DimensionMismatch(f"receiver {i} holds {len(side)} messages, got {len(x_side)} values")
    free = [j for j in range(inst.n) if j not in inst.side_info[i]]
    q = field.q
    check_budget(f"receiver {i} decoding search", q ** len(free), budget)
    cand = np.zeros((q ** len(free), inst.n), dtype=np.int64)
    cand[:, free] = all_vectors(q, len(free))
    if side:
        cand[:, side] = np.asarray(x_side, dtype=np.int64)
    dist = np.count_nonzero((cand @ code.L) != y, axis=1)
    values = np.unique(cand[dist <= delta, inst.demands[i]])
    if len(values) == 0:
        raise DecodeFailure(f"no message within distance {delta} of the received word")
    if len(values) > 1:
        raise Ambiguous(f"receiver {i}: values {values.tolist()} all consistent")
    return int(values[0])


# --- optimal length ----------------------------------------------------------


@dataclass(frozen=True)
class MinRank:
    kappa: int
    L: MatGF
    rows: tuple[tuple[int, ...], ...] = dc_field(repr=False)


def _choice_rows(inst: IcsiInstance, i: int) -> list[tuple[int, ...]]:
    """Every ``u + e_{f(i)}`` with ``u`` supported on ``X_i``, lexicographic in ``u``."""
    side = inst.side(i)
    out = []
    for vals in itertools.product(range(inst.q), repeat=len(side)):
        row = [0] * inst.n
        row[inst.demands[i]] = 1
        for j, v in zip(side, vals):
            row[j] = v
        out.append(tuple(row))
    return out


def _search_space(inst: IcsiInstance) -> int:
    return inst.q ** sum(len(x) for x in inst.side_info)


def _min_rank_search(inst: IcsiInstance, accept, budget: int,
                     monotone: bool = False) -> tuple[int, list[tuple[int, ...]]] | None:
    """Depth-first branch and bound over receiver choices in lexicographic order.

    ``accept(rows)`` filters complete choices; with ``monotone`` it is also
    applied to partial choices, valid when rejection survives adding rows.
    Returns the first minimiser
    found, or ``None`` if no complete choice is accepted.  ``budget`` caps the
    number of search nodes visited, which never exceeds the size of the
    choice space.
    """
    choices = [_choice_rows(inst, i) for i in range(inst.m)]
    # distinct receivers with identical choice lists contribute the same row set
    basis = RowBasis(inst.field, inst.n)
    packed = [[basis.pack(r) for r in rows] for rows in choices]
    best: list = [inst.m + 1, None]
    picked: list[tuple[int, ...]] = []
    lower = 1 if inst.m else 0
    visited = [0]

    def dfs(depth: int) -> bool:
        if depth == inst.m:
            if len(basis) < best[0] and accept(picked):
                best[0], best[1] = len(basis), list(picked)
                return best[0] <= lower
            return False
        for row, pk in zip(choices[depth], packed[depth]):
            visited[0] += 1
            if visited[0] > budget:
                raise BudgetExceeded("min-rank search", visited[0], budget)
            added = basis.push(pk)
            if len(basis) < best[0]:
                picked.append(row)
                if monotone and added and not accept(picked):
                    done = False
                else:
                    done = dfs(depth + 1)
                picked.pop()
                if done:
                    if added:
                        basis.pop()
                    return True
            if added:
                basis.pop()
        return False

    dfs(0)
    if best[1] is None:
        return None
    return best[0], best[1]


def basis_matrix(field: GF, n: int, rows: Sequence[Sequence[int]]) -> MatGF:
    """``n x r`` matrix whose columns are the independent rows among ``rows``, in order."""
    basis = RowBasis(field, n)
    cols = [r for r in rows if basis.push(basis.pack(r))]
    if not cols:
        return MatGF.zeros(field, n, 0)
    return MatGF(field, np.array(cols, dtype=np.int64).T)


def kappa_q(inst: IcsiInstance, budget: int = DEFAULT_BUDGET) -> MinRank:
    """Exact optimal linear length by exhaustive search, with a witness ``L``."""
    kappa, rows = _min_rank_search(inst, lambda rows: True, budget)
    return MinRank(kappa, basis_matrix(inst.field, inst.n, rows), tuple(rows))


def minrank_fitting(inst: IcsiInstance, budget: int = DEFAULT_BUDGET) -> int:
    """Min-rank of the side-information graph: min rank over all fitting matrices.

    A matrix fits when its diagonal is nonzero and its off-diagonal support
    lies in the side-information sets.  Requires ``m == n`` and ``f = id``.
    """
    if not inst.is_standard():
        raise ValidationError("min-rank of the graph needs m == n and f(i) == i")
    q, n = inst.q, inst.n
    field = inst.field
    check_budget("fitting-matrix enumeration", _search_space(inst) * (q - 1) ** n, budget)
    positions = [(i, j) for i in range(n) for j in inst.side(i)]
    best = n
    for diag in itertools.product(range(1, q), repeat=n):
        for vals in itertools.product(range(q), repeat=len(positions)):
            A = [[0] * n for _ in range(n)]
            for i in range(n):
                A[i][i] = diag[i]
            for (i, j), v in zip(positions, vals):
                A[i][j] = v
            best = min(best, rank_rows(field, A, n))
            if best == 1:
                return 1
    return best


# --- code files --------------------------------------------------------------

_CODE_KEYS = {"field", "n", "N", "eta", "entries", "construction"}


@dataclass(frozen=True)
class CodeFile:
    L: MatGF
    n: int
    eta: int = 0
    construction: dict | None = None


def code_to_dict(L: MatGF, n: int, eta: int = 0, construction: dict | None = None) -> dict:
    if L.rows != n + eta:
        raise DimensionMismatch(f"L has {L.rows} rows, expected n + eta = {n + eta}")
    doc = {"field": L.field.spec, "n": n, "N": L.cols, "entries": L.tolist()}
    if eta:
        doc["eta"] = eta
    if construction is not None:
        doc["construction"] = construction
    return doc


def code_from_dict(doc: dict) -> CodeFile:
    if not isinstance(doc, dict):
        raise ParseError("code document must be an object")
    unknown = set(doc) - _CODE_KEYS
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}")
    for key in ("field", "n", "N", "entries"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    field = parse_field(doc["field"])
    n, N, eta = doc["n"], doc["N"], doc.get("eta", 0)
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != n + eta:
        raise ParseError(f"entries must list n + eta = {n + eta} rows")
    if any(not isinstance(r, list) or len(r) != N for r in entries):
        raise ParseError(f"every row must have N = {N} entries")
    try:
        L = MatGF(field, np.array(entries, dtype=np.int64).reshape(n + eta, N))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return CodeFile(L, n, eta, doc.get("construction"))


def save_code(path: str | Path, L: MatGF, n: int, eta: int = 0, construction: dict | None = None) -> None:
    Path(path).write_text(json.dumps(code_to_dict(L, n, eta, construction), indent=2) + "\n")


def load_code(path: str | Path) -> CodeFile:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return code_from_dict(doc)
