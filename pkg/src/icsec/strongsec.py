"""Randomized linear index codes: coset coding, strong security and optimal length.

A randomized code over ``n`` messages with ``eta`` random symbols transmits
``(x | g) @ L`` for an ``(n + eta) x N`` matrix ``L`` and uniform ``g``.
Treating the random symbols as extra messages that no receiver holds turns
every deterministic notion (validity, error correction, recipes) into one for
the randomized code; :meth:`RandomizedIndexCode.as_index_code` does exactly that.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Any

import numpy as np

from .errors import (
    DEFAULT_BUDGET,
    ConstructionError,
    DimensionMismatch,
    FieldTooSmall,
    NoRecipe,
    ValidationError,
    check_budget,
)
from .gf import GF
from .icsi import IcsiInstance
from .indexcode import (
    IndexCode,
    decode,
    decode_recipe,
    decode_with_errors,
    find_combination,
    is_delta_error_correcting,
    is_valid,
    kappa_q,
)
from .lincode import LinearCode, all_vectors, bounded_distance_decode, is_mds, row_ids, vandermonde_mds
from .matlin import MatGF, solve_left, vstack
from .security import uniform_counts


@dataclass(frozen=True)
class RandomizedIndexCode:
    """``L`` of shape ``(n + eta) x N``; rows past ``n`` multiply the random symbols."""

    inst: IcsiInstance
    eta: int
    L: MatGF
    construction: dict[str, Any] | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        if self.eta < 0:
            raise ValidationError(f"negative number of random symbols: {self.eta}")
        if self.L.field != self.inst.field:
            raise ValidationError(f"code over {self.L.field.spec}, instance over {self.inst.field.spec}")
        if self.L.rows != self.inst.n + self.eta:
            raise DimensionMismatch(f"L has {self.L.rows} rows, expected n + eta = {self.inst.n + self.eta}")

    @property
    def field(self) -> GF:
        return self.inst.field

    @property
    def n(self) -> int:
        return self.inst.n

    @property
    def N(self) -> int:
        return self.L.cols

    def as_index_code(self) -> IndexCode:
        """Deterministic code over ``n + eta`` messages, the last ``eta`` held by nobody."""
        return IndexCode(self.inst.extended(self.eta), self.L)

    @cached_property
    def _coset_parts(self) -> tuple[IndexCode, MatGF, LinearCode] | None:
        meta = self.construction
        if not meta or meta.get("kind") != "A":
            return None
        kappa, mu = meta["kappa"], meta["mu"]
        M = vandermonde_mds(self.field, kappa + mu, kappa + mu + 2 * meta["delta"], meta["alphas"])
        L0 = MatGF(self.field, np.array(meta["L0"], dtype=np.int64).reshape(self.n, kappa))
        return IndexCode(self.inst, L0), M, LinearCode(M)


def draw_randomness(field: GF, eta: int, seed: int | None) -> np.ndarray:
    """Uniform ``g`` from a seeded generator."""
    return np.random.default_rng(seed).integers(0, field.q, size=eta, dtype=np.int64)


def encode_randomized(code: RandomizedIndexCode, x, g=None, seed: int | None = None) -> np.ndarray:
    """``(x | g) @ L``; when ``g`` is omitted it is drawn uniformly from ``seed``."""
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (code.n,):
        raise DimensionMismatch(f"message of length {x.shape}, expected {code.n}")
    if g is None:
        g = draw_randomness(code.field, code.eta, seed)
    g = np.asarray(g, dtype=np.int64)
    if g.shape != (code.eta,):
        raise DimensionMismatch(f"randomness of length {g.shape}, expected {code.eta}")
    return np.concatenate([x, g]) @ code.L


# --- coset construction --------------------------------------------------------


def construct_a(
    inst: IcsiInstance,
    mu: int,
    delta: int,
    alphas=None,
    L0: MatGF | None = None,
    budget: int = DEFAULT_BUDGET,
) -> RandomizedIndexCode:
    """Coset code of length ``kappa + mu + 2 delta`` with ``eta = mu`` random symbols.

    ``M`` is the ``(kappa + mu) x N`` Vandermonde matrix on ``alphas``; its top
    ``kappa`` rows ``P`` carry ``x @ L0`` and its bottom ``mu`` rows ``Q`` carry
    ``g``, so ``L = [L0 @ P ; Q]``.  ``L0`` defaults to the min-rank witness.
    """
    if mu < 0 or delta < 0:
        raise ValidationError(f"mu and delta must be nonnegative, got {mu}, {delta}")
    field = inst.field
    optimal = L0 is None
    if L0 is None:
        L0 = kappa_q(inst, budget).L
    elif L0.field != field or L0.rows != inst.n:
        raise DimensionMismatch(f"L0 must be {inst.n} x kappa over {field.spec}")
    kappa = L0.cols
    k, N = kappa + mu, kappa + mu + 2 * delta
    if k == 0:
        raise ConstructionError("nothing to transmit: kappa + mu = 0")
    if field.q < N + 1:
        raise FieldTooSmall(f"need q >= kappa + mu + 2 delta + 1 = {N + 1}, got q = {field.q}")
    if alphas is None:
        alphas = list(range(1, N + 1))
    M = vandermonde_mds(field, k, N, alphas)
    if not is_mds(M):
        raise ConstructionError("M does not generate an MDS code")
    P, Q = M.row_sub(range(kappa)), M.row_sub(range(kappa, k))
    if mu and not is_mds(Q):
        raise ConstructionError("bottom rows of M do not generate an MDS code")
    L = vstack([B for B in (L0 @ P, Q) if B.rows])
    meta = {
        "kind": "A",
        "kappa": kappa,
        "kappa_optimal": optimal,
        "mu": mu,
        "delta": delta,
        "alphas": [int(a) for a in alphas],
        "L0": L0.tolist(),
    }
    return RandomizedIndexCode(inst, mu, L, meta)


def decode_randomized(code: RandomizedIndexCode, i: int, y, x_side, delta: int,
                      budget: int = DEFAULT_BUDGET) -> int:
    """Receiver ``i``'s demanded symbol from a received word with at most ``delta`` errors.

    Codes from :func:`construct_a` decode ``y`` to the nearest word of ``M``'s code,
    read off ``(x @ L0 | g)`` and apply ``L0``'s recipe.  Other codes fall
    back to exhaustive joint search.
    """
    parts = code._coset_parts
    if parts is None:
        return decode_with_errors(code.as_index_code(), i, y, x_side, delta, budget)
    inner, M, outer = parts
    c = bounded_distance_decode(outer, y, delta, budget)
    s = solve_left(M, c)[: inner.N]
    if decode_recipe(inner, i) is None:
        raise NoRecipe(f"receiver {i} cannot decode from L0")
    return decode(inner, i, s, x_side)


# --- strong security ------------------------------------------------------------


def _strong_budget(code: RandomizedIndexCode, mu: int, t: int) -> int:
    views = sum(math.comb(code.N, w) for w in range(mu + 1))
    return code.field.q ** (code.n + code.eta) * views * math.comb(code.n, t)


def find_leak(code: RandomizedIndexCode, mu: int, t: int,
              budget: int = DEFAULT_BUDGET) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """First ``(W, X_A)`` whose view leaks about ``x`` outside ``X_A``, or ``None``.

    For each eavesdropped set ``W`` (``|W| <= mu``) and adversary set ``X_A``
    (``|X_A| = t``), counts every ``(x, g)``: within each class of equal
    ``((x | g) @ L[W], x[X_A])`` every value of the unknown messages must occur
    equally often.
    """
    n, N, q = code.n, code.N, code.field.q
    if not 0 <= mu <= N:
        raise ValidationError(f"mu must lie in [0, {N}], got {mu}")
    if not 0 <= t <= n:
        raise ValidationError(f"t must lie in [0, {n}], got {t}")
    check_budget("strong security enumeration", _strong_budget(code, mu, t), budget)
    V = all_vectors(q, n + code.eta)
    S = V @ code.L
    X = V[:, :n]
    for w in range(mu + 1):
        for W in itertools.combinations(range(N), w):
            view = row_ids(S[:, list(W)], q)
            for A in itertools.combinations(range(n), t):
                hidden = [j for j in range(n) if j not in A]
                if not hidden:
                    continue
                key = np.stack([view, row_ids(X[:, list(A)], q)], axis=1)
                key = row_ids(key, max(int(key.max()) + 1, 2))
                if not uniform_counts(key, row_ids(X[:, hidden], q), q ** len(hidden)):
                    return W, A
    return None


def verify_strong_security(code: RandomizedIndexCode, mu: int, t: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Exact ``(mu, t)``-strong security by integer counting over all ``(x, g)``."""
    return find_leak(code, mu, t, budget) is None


def random_symbol_recipes(code: RandomizedIndexCode) -> list[np.ndarray | None]:
    """Per random symbol ``g_i``, coefficients recovering it from ``x`` and the transmission."""
    G = code.L.T
    known = range(code.n)
    return [find_combination(G, known, code.n + i) for i in range(code.eta)]


def delete_columns(L: MatGF, cols) -> MatGF:
    drop = set(cols)
    return L.col_sub([j for j in range(L.cols) if j not in drop])


@dataclass(frozen=True)
class LengthBoundReport:
    N: int
    eta: int
    kappa: int
    mu: int
    t: int
    delta: int
    valid: bool
    error_correcting: bool
    strongly_secure: bool

    @property
    def required_length(self) -> int:
        return self.kappa + self.mu + 2 * self.delta

    @property
    def optimal(self) -> bool:
        return self.N == self.required_length and self.eta == self.mu

    @property
    def contradiction(self) -> bool:
        """A verified strongly secure code that is shorter or uses less randomness than allowed."""
        if not (self.valid and self.strongly_secure):
            return False
        if self.N < self.kappa + self.mu or self.eta < self.mu:
            return True
        return self.error_correcting and self.N < self.required_length

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "eta": self.eta,
            "kappa": self.kappa,
            "mu": self.mu,
            "t": self.t,
            "delta": self.delta,
            "required_length": self.required_length,
            "valid": self.valid,
            "error_correcting": self.error_correcting,
            "strongly_secure": self.strongly_secure,
            "optimal": self.optimal,
            "contradiction": self.contradiction,
        }


def check_length_bounds(
    code: RandomizedIndexCode,
    mu: int,
    t: int,
    delta: int,
    kappa: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> LengthBoundReport:
    """Compare ``N`` with ``kappa + mu + 2 delta`` and ``eta`` with ``mu``.

    The randomness bound presumes every message is demanded by some receiver.
    """
    code.inst.require_all_demanded()
    if kappa is None:
        kappa = kappa_q(code.inst, budget).kappa
    det = code.as_index_code()
    valid = is_valid(det, cross_check=False, budget=budget).valid
    ec = valid and is_delta_error_correcting(det, delta, budget)
    secure = verify_strong_security(code, mu, t, budget)
    return LengthBoundReport(code.N, code.eta, kappa, mu, t, delta, valid, ec, secure)


@dataclass(frozen=True)
class BoundSearch:
    instances: int
    candidates: int
    counterexamples: list[tuple[IcsiInstance, int, MatGF]]


def search_short_secure_codes(
    field: GF,
    n: int,
    mu: int,
    t: int,
    delta: int = 0,
    max_eta: int = 2,
    budget: int = DEFAULT_BUDGET,
) -> BoundSearch:
    """Every standard instance on ``n`` messages, every ``L`` shorter than ``kappa + mu + 2 delta``.

    Collects all valid, ``delta``-error-correcting, ``(mu, t)``-strongly secure
    codes found; the lower bounds say there are none.
    """
    q = field.q
    others = [[j for j in range(n) if j != i] for i in range(n)]
    side_choices = [
        [frozenset(c) for r in range(len(o) + 1) for c in itertools.combinations(o, r)] for o in others
    ]
    instances = candidates = 0
    found = []
    for side in itertools.product(*side_choices):
        inst = IcsiInstance(field, n, tuple(side), tuple(range(n)))
        instances += 1
        bound = kappa_q(inst, budget).kappa + mu + 2 * delta
        for eta in range(max_eta + 1):
            ext = inst.extended(eta)
            rows = n + eta
            for N in range(1, bound):
                check_budget("short code search", q ** (rows * N), budget)
                for flat in all_vectors(q, rows * N):
                    candidates += 1
                    L = MatGF(field, flat.reshape(rows, N))
                    det = IndexCode(ext, L)
                    if not is_valid(det, cross_check=False).valid:
                        continue
                    if delta and not is_delta_error_correcting(det, delta, budget):
                        continue
                    code = RandomizedIndexCode(inst, eta, L)
                    # a code shorter than mu is heard in full
                    if verify_strong_security(code, min(mu, N), t, budget):
                        found.append((inst, eta, L))
    return BoundSearch(instances, candidates, found)


__all__ = [
    "BoundSearch",
    "LengthBoundReport",
    "RandomizedIndexCode",
    "check_length_bounds",
    "construct_a",
    "decode_randomized",
    "delete_columns",
    "draw_randomness",
    "encode_randomized",
    "find_leak",
    "random_symbol_recipes",
    "search_short_secure_codes",
    "verify_strong_security",
]
