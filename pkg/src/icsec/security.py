"""Block security of deterministic linear index codes.

Two independent routes to the same question: :func:`has_no_information`
decides it with linear algebra on ``C(L)``, while :func:`entropy_oracle` and
:func:`uniform_for_all_messages` count preimages over the whole message space.
Everything is exact; there is no floating point.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DEFAULT_BUDGET, ValidationError, check_budget
from .icsi import IcsiInstance
from .indexcode import IndexCode, find_combination, is_valid, kappa_q, _min_rank_search, basis_matrix
from .lincode import LinearCode, all_vectors, code_distance, row_ids
from .matlin import MatGF, nullspace_left, support

PAIR_BUDGET = 1 << 16


def _check_sets(n: int, x_a: frozenset[int], b: frozenset[int]) -> None:
    if x_a & b:
        raise ValidationError("adversary knowledge and target block overlap")
    if not b:
        raise ValidationError("target block must be nonempty")
    if any(not 0 <= j < n for j in x_a | b):
        raise ValidationError("index outside the message range")


def has_no_information(L: MatGF, x_a: Iterable[int], b: Iterable[int]) -> bool:
    """Whether an adversary holding ``x[X_A]`` and hearing ``x @ L`` learns nothing about ``x[B]``.

    True iff no codeword of ``C(L)`` is supported inside ``X_A ∪ B`` while
    being nonzero on ``B``.
    """
    x_a, b = frozenset(x_a), frozenset(b)
    n = L.rows
    _check_sets(n, x_a, b)
    rest = sorted(set(range(n)) - x_a - b)
    G = L.T
    if rest:
        # coefficient vectors whose codewords vanish on the rest
        beta = nullspace_left(G.col_sub(rest))
        if not beta:
            return True
        sub = MatGF(L.field, np.vstack(beta)) @ G
    else:
        sub = G
    return not sub.col_sub(sorted(b)).a.any()


@dataclass(frozen=True)
class ConditionalCounts:
    """Exact conditional distribution of ``x[B]`` as integer preimage counts."""

    q: int
    block: tuple[int, ...]
    counts: dict[tuple[int, ...], int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def uniform(self) -> bool:
        if len(self.counts) != self.q ** len(self.block):
            return False
        return len(set(self.counts.values())) == 1


def entropy_oracle(L: MatGF, x_a: Iterable[int], b: Iterable[int], x, budget: int = DEFAULT_BUDGET) -> ConditionalCounts:
    """Count every ``z`` with ``z @ L == x @ L`` and ``z[X_A] == x[X_A]``, tallied by ``z[B]``."""
    x_a, b = frozenset(x_a), frozenset(b)
    n, field = L.rows, L.field
    _check_sets(n, x_a, b)
    check_budget("entropy oracle enumeration", field.q**n, budget)
    x = np.asarray(x, dtype=np.int64)
    free = [j for j in range(n) if j not in x_a]
    Z = np.tile(x, (field.q ** len(free), 1))
    Z[:, free] = all_vectors(field.q, len(free))
    hit = np.all((Z @ L) == (x @ L), axis=1)
    block = tuple(sorted(b))
    counts = Counter(map(tuple, Z[hit][:, list(block)].tolist()))
    return ConditionalCounts(field.q, block, dict(counts))


def consistent_count(L: MatGF, x_a: Iterable[int], x, budget: int = DEFAULT_BUDGET) -> int:
    """Size of the adversary's candidate list: messages agreeing with ``x`` on ``X_A`` and on ``x @ L``."""
    x_a = frozenset(x_a)
    rest = frozenset(range(L.rows)) - x_a
    if not rest:
        return 1
    return entropy_oracle(L, x_a, rest, x, budget).total


def uniform_counts(key: np.ndarray, secret: np.ndarray, n_secret: int) -> bool:
    """Whether, within every class of ``key``, each of ``n_secret`` values of ``secret`` occurs equally often."""
    _, cls = np.unique(key, return_inverse=True)
    cls = cls.reshape(-1)
    class_size = np.bincount(cls)
    pair = cls.astype(np.int64) * n_secret + secret
    pairs, pair_count = np.unique(pair, return_counts=True)
    return bool(np.all(pair_count * n_secret == class_size[pairs // n_secret]))


class MessageSpace:
    """Every message vector with its encoding, enumerated once for repeated oracle queries."""

    def __init__(self, L: MatGF, budget: int = DEFAULT_BUDGET):
        self.L = L
        self.q = L.field.q
        check_budget("message space enumeration", self.q**L.rows, budget)
        self.X = all_vectors(self.q, L.rows)
        self.S = self.X @ L
        self.S_ids = row_ids(self.S, self.q)

    def uniform(self, x_a: Iterable[int], b: Iterable[int]) -> bool:
        """Entropy-oracle verdict for every message at once."""
        x_a, b = sorted(x_a), sorted(b)
        key = self.S_ids
        if x_a:
            key = np.stack([key, row_ids(self.X[:, x_a], self.q)], axis=1)
            key = row_ids(key, max(int(key.max()) + 1, 2))
        return uniform_counts(key, row_ids(self.X[:, b], self.q), self.q ** len(b))


def uniform_for_all_messages(L: MatGF, x_a: Iterable[int], b: Iterable[int], budget: int = DEFAULT_BUDGET) -> bool:
    """Whether :func:`entropy_oracle` reports a uniform block for every message ``x``."""
    x_a, b = frozenset(x_a), frozenset(b)
    _check_sets(L.rows, x_a, b)
    return MessageSpace(L, budget).uniform(x_a, b)


# --- complete insecurity -----------------------------------------------------


@dataclass(frozen=True)
class InsecurityCheck:
    """Per unknown message, the coefficients recovering it (``None`` if it stays hidden)."""

    recipes: dict[int, np.ndarray | None]

    @property
    def complete(self) -> bool:
        return all(r is not None for r in self.recipes.values())

    @property
    def recovered(self) -> list[int]:
        return sorted(j for j, r in self.recipes.items() if r is not None)

    def __bool__(self):
        return self.complete


def completely_insecure_check(L: MatGF, x_a: Iterable[int]) -> InsecurityCheck:
    """Which unknown messages an adversary holding ``x[X_A]`` recovers from ``x @ L``."""
    x_a = frozenset(x_a)
    G = L.T
    return InsecurityCheck({j: find_combination(G, x_a, j) for j in range(L.rows) if j not in x_a})


# --- security profile ---------------------------------------------------------


@dataclass(frozen=True)
class Attack:
    """An adversary holding ``known`` who recovers message ``target``."""

    weight: int
    known: tuple[int, ...]
    target: int
    codeword: tuple[int, ...]


@dataclass(frozen=True)
class StrengthLevel:
    strength: int
    adversaries: int
    block: int
    completely_insecure: bool
    sampled: bool


@dataclass
class SecurityReport:
    n: int
    N: int
    k: int
    d: int
    d_dual: int
    guaranteed_block: dict[int, int]
    list_size_exponent: dict[int, int]
    attacks: list[Attack]
    measured: list[StrengthLevel] = dc_field(default_factory=list)
    budgets: dict[str, int] = dc_field(default_factory=dict)
    seed: int | None = None

    @property
    def weakly_secure_up_to(self) -> int:
        """Largest strength with a guaranteed weak-security bound (``d - 2``)."""
        return self.d - 2

    @property
    def insecure_from(self) -> int:
        """Strength from which every adversary recovers everything (``n - d_dual + 1``)."""
        return self.n - self.d_dual + 1

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "k": self.k,
            "d": self.d,
            "d_dual": self.d_dual,
            "weakly_secure_up_to": self.weakly_secure_up_to,
            "insecure_from": self.insecure_from,
            "guaranteed_block": {str(t): b for t, b in self.guaranteed_block.items()},
            "list_size_exponent": {str(t): e for t, e in self.list_size_exponent.items()},
            "attacks": [
                {"weight": a.weight, "known": [j + 1 for j in a.known], "target": a.target + 1,
                 "codeword": list(a.codeword)}
                for a in self.attacks
            ],
            "measured": [
                {"strength": s.strength, "adversaries": s.adversaries, "block": s.block,
                 "completely_insecure": s.completely_insecure, "sampled": s.sampled}
                for s in self.measured
            ],
            "budgets": dict(self.budgets),
            "seed": self.seed,
        }


def guaranteed_block(d: int, t: int) -> int:
    return d - 1 - t if t <= d - 2 else 0


def _attacks(code: LinearCode, budget: int) -> list[Attack]:
    """One recovering adversary per codeword weight present in ``code``."""
    field = code.field
    found: dict[int, Attack] = {}
    for c in code.codewords(budget)[1:]:
        w = int(np.count_nonzero(c))
        if w in found:
            continue
        supp = sorted(support(c))
        target = supp[-1]
        scaled = field.vmul(c, field.inv(int(c[target])))
        found[w] = Attack(w, tuple(supp[:-1]), target, tuple(int(v) for v in scaled))
    return [found[w] for w in sorted(found)]


def _max_block(L: MatGF, x_a: frozenset[int]) -> int:
    rest = sorted(set(range(L.rows)) - x_a)
    best = 0
    for size in range(1, len(rest) + 1):
        if all(has_no_information(L, x_a, blk) for blk in itertools.combinations(rest, size)):
            best = size
        else:
            break
    return best


def block_security_profile(
    L: MatGF,
    budget: int = DEFAULT_BUDGET,
    pair_budget: int = PAIR_BUDGET,
    seed: int = 0,
) -> SecurityReport:
    """Distance-based guarantees plus per-strength measurements.

    Measurement checks every adversary of every strength while the number of
    (adversary, block) pairs stays within ``pair_budget``; beyond that a seeded
    uniform sample of adversaries is taken per strength and marked ``sampled``.
    """
    n, N = L.rows, L.cols
    code = LinearCode(L.T)
    d = code.min_distance(budget)
    d_dual = code.dual_distance(budget)
    rng = np.random.default_rng(seed)
    measured = []
    full = 3**n <= pair_budget
    for t in range(n):
        adversaries = [frozenset(c) for c in itertools.combinations(range(n), t)]
        sampled = False
        if not full:
            cap = max(1, pair_budget // (n * 2 ** (n - t)))
            if cap < len(adversaries):
                pick = rng.choice(len(adversaries), size=cap, replace=False)
                adversaries = [adversaries[i] for i in sorted(pick)]
                sampled = True
        block = min(_max_block(L, x_a) for x_a in adversaries)
        insecure = all(completely_insecure_check(L, x_a).complete for x_a in adversaries)
        measured.append(StrengthLevel(t, len(adversaries), block, insecure, sampled))
    return SecurityReport(
        n=n,
        N=N,
        k=code.k,
        d=d,
        d_dual=d_dual,
        guaranteed_block={t: guaranteed_block(d, t) for t in range(n)},
        list_size_exponent={t: n - t - N for t in range(min(d, n))},
        attacks=_attacks(code, budget),
        measured=measured,
        budgets={"enumeration": budget, "pairs": pair_budget},
        seed=seed,
    )


# --- restricted eavesdropping ---------------------------------------------------


def restricted_distances(L: MatGF, mu: int, budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """``(d_mu, d_dual_mu)``: minima over ``mu``-subsets ``W`` of the columns.

    A zero sub-code counts as distance ``n + 1`` (it has no nonzero words) and
    dual distance 1.
    """
    N = L.cols
    if not 1 <= mu <= N:
        raise ValidationError(f"eavesdropped count must lie in [1, {N}], got {mu}")
    check_budget("eavesdropper subsets", math.comb(N, mu), budget)
    best_d = best_dd = None
    for w in itertools.combinations(range(N), mu):
        d, dd = code_distance(L.field, L.col_sub(w).T, budget)
        best_d = d if best_d is None else min(best_d, d)
        best_dd = dd if best_dd is None else min(best_dd, dd)
    return best_d, best_dd


# --- restricted information (ICSRI) -------------------------------------------


def _restriction_ok(inst: IcsiInstance, G: MatGF) -> bool:
    if inst.restricted is None:
        return True
    for x, z in zip(inst.side_info, inst.restricted):
        for j in z:
            if find_combination(G, x, j) is not None:
                return False
    return True


def icsri_valid(code: IndexCode) -> bool:
    """Valid index code whose receivers learn nothing about their restricted messages."""
    return is_valid(code, cross_check=False).valid and _restriction_ok(code.inst, code.generator)


def kappa_star(inst: IcsiInstance, budget: int = DEFAULT_BUDGET) -> tuple[float | int, MatGF | None]:
    """Optimal length for the restricted instance, ``math.inf`` when no linear code exists."""
    if inst.restricted is None or not any(inst.restricted):
        res = kappa_q(inst, budget)
        return res.kappa, res.L
    field = inst.field

    def accept(rows) -> bool:
        return _restriction_ok(inst, MatGF(field, np.array(rows, dtype=np.int64)))

    found = _min_rank_search(inst, accept, budget, monotone=True)
    if found is None:
        return math.inf, None
    kappa, rows = found
    return kappa, basis_matrix(field, inst.n, rows)


__all__ = [
    "Attack",
    "ConditionalCounts",
    "InsecurityCheck",
    "MessageSpace",
    "SecurityReport",
    "StrengthLevel",
    "block_security_profile",
    "completely_insecure_check",
    "consistent_count",
    "entropy_oracle",
    "guaranteed_block",
    "has_no_information",
    "icsri_valid",
    "kappa_star",
    "restricted_distances",
    "uniform_for_all_messages",
]
