"""ICSI / ICSRI instances and their JSON file format.

In memory every index is 0-based.  Files use 1-based message indices::

    {"field": "gf(2)", "n": 4, "m": 4,
     "receivers": [{"demand": 1, "side_info": [2, 3, 4], "restricted": []}, ...]}

``restricted`` is optional; when any receiver carries it the instance is an
ICSRI instance and receivers without it get an empty restricted set.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvalidDemand,
    ParseError,
    RestrictionOverlap,
    UndemandedMessage,
)
from .gf import GF, parse_field


@dataclass(frozen=True)
class IcsiInstance:
    """``(m, n, X, f)`` over ``field``, optionally with restricted sets ``Z``."""

    field: GF
    n: int
    side_info: tuple[frozenset[int], ...]
    demands: tuple[int, ...]
    restricted: tuple[frozenset[int], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "side_info", tuple(frozenset(int(j) for j in x) for x in self.side_info))
        object.__setattr__(self, "demands", tuple(int(f) for f in self.demands))
        if self.restricted is not None:
            object.__setattr__(self, "restricted", tuple(frozenset(int(j) for j in z) for z in self.restricted))
        if self.n < 1:
            raise IndexOutOfRange(f"need at least one message, got n={self.n}")
        if len(self.side_info) != len(self.demands):
            raise ParseError("side_info and demands differ in length")
        if self.restricted is not None and len(self.restricted) != len(self.demands):
            raise ParseError("restricted and demands differ in length")
        for i, (x, f) in enumerate(zip(self.side_info, self.demands)):
            if not 0 <= f < self.n:
                raise IndexOutOfRange(f"receiver {i}: demand {f} outside [0, {self.n})")
            if any(not 0 <= j < self.n for j in x):
                raise IndexOutOfRange(f"receiver {i}: side information outside [0, {self.n})")
            if f in x:
                raise InvalidDemand(f"receiver {i} demands message {f} it already holds")
            if self.restricted is not None:
                z = self.restricted[i]
                if any(not 0 <= j < self.n for j in z):
                    raise IndexOutOfRange(f"receiver {i}: restricted set outside [0, {self.n})")
                if z & (x | {f}):
                    raise RestrictionOverlap(
                        f"receiver {i}: restricted {sorted(z)} meets side info or demand"
                    )

    @property
    def m(self) -> int:
        return len(self.demands)

    @property
    def q(self) -> int:
        return self.field.q

    def side(self, i: int) -> list[int]:
        """Sorted side-information indices of receiver ``i``."""
        return sorted(self.side_info[i])

    def is_standard(self) -> bool:
        """``m == n`` and ``f(i) == i``: the side-information-graph setting."""
        return self.m == self.n and all(f == i for i, f in enumerate(self.demands))

    def require_all_demanded(self) -> None:
        missing = sorted(set(range(self.n)) - set(self.demands))
        if missing:
            raise UndemandedMessage(f"messages {missing} are requested by no receiver")

    def with_restricted(self, restricted: Sequence[Iterable[int]] | None) -> IcsiInstance:
        return IcsiInstance(self.field, self.n, self.side_info, self.demands,
                            None if restricted is None else tuple(frozenset(z) for z in restricted))

    def extended(self, extra: int) -> IcsiInstance:
        """Same receivers over ``n + extra`` messages; the extras are unknown to all."""
        return IcsiInstance(self.field, self.n + extra, self.side_info, self.demands, self.restricted)


def adversary_free_coords(inst: IcsiInstance, i: int) -> frozenset[int]:
    """``[n] \\ ({f(i)} ∪ X_i)``."""
    return frozenset(range(inst.n)) - inst.side_info[i] - {inst.demands[i]}


@dataclass(frozen=True)
class DemandFamily:
    """The support family J(m, n, X, f), kept as ``(f(i), Y_i)`` pairs."""

    n: int
    pairs: tuple[tuple[int, frozenset[int]], ...]

    @classmethod
    def of(cls, inst: IcsiInstance) -> DemandFamily:
        return cls(inst.n, tuple((inst.demands[i], adversary_free_coords(inst, i)) for i in range(inst.m)))

    def __contains__(self, support) -> bool:
        s = frozenset(support)
        return any(f in s and s - {f} <= y for f, y in self.pairs)

    def supports(self) -> Iterator[frozenset[int]]:
        """Every member support, without repetition."""
        seen = set()
        for f, y in self.pairs:
            ys = sorted(y)
            for mask in range(1 << len(ys)):
                s = frozenset([f] + [ys[b] for b in range(len(ys)) if mask >> b & 1])
                if s not in seen:
                    seen.add(s)
                    yield s


def in_error_set(inst: IcsiInstance, z) -> bool:
    """Membership in I(q, m, n, X, f): some receiver has ``z_{X_i} = 0`` and ``z_{f(i)} != 0``."""
    z = np.asarray(z)
    return any(z[f] != 0 and not any(z[j] for j in x) for x, f in zip(inst.side_info, inst.demands))


def split_multi_demand(
    field: GF,
    n: int,
    receivers: Iterable[tuple[Iterable[int], Iterable[int]] | tuple[Iterable[int], Iterable[int], Iterable[int]]],
) -> IcsiInstance:
    """Build an instance from receivers that may request several messages.

    Each receiver is ``(demands, side_info)`` or ``(demands, side_info,
    restricted)``; it becomes one single-demand receiver per requested index,
    all sharing its side information.  Receivers requesting nothing vanish.
    """
    side, dem, res = [], [], []
    any_restricted = False
    for rec in receivers:
        demands, x, *rest = rec
        z = frozenset(rest[0]) if rest else frozenset()
        any_restricted |= bool(rest)
        for f in sorted(set(demands)):
            side.append(frozenset(x))
            dem.append(f)
            res.append(z)
    return IcsiInstance(field, n, tuple(side), tuple(dem), tuple(res) if any_restricted else None)


def random_instance(field: GF, n: int, m: int, rng: np.random.Generator, p_side: float = 0.5) -> IcsiInstance:
    """Uniformly random demands; each other message is side information with probability ``p_side``."""
    side, dem = [], []
    for _ in range(m):
        f = int(rng.integers(n))
        x = frozenset(j for j in range(n) if j != f and rng.random() < p_side)
        side.append(x)
        dem.append(f)
    return IcsiInstance(field, n, tuple(side), tuple(dem))


# --- file format -----------------------------------------------------------

_TOP_KEYS = {"field", "n", "m", "receivers"}
_REC_KEYS = {"demand", "side_info", "restricted"}


def _index_list(value, what: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ParseError(f"{what} must be a list of integers")
    return [v - 1 for v in value]


def instance_from_dict(doc: dict) -> IcsiInstance:
    if not isinstance(doc, dict):
        raise ParseError("instance document must be an object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}")
    missing = _TOP_KEYS - set(doc)
    if missing:
        raise ParseError(f"missing keys {sorted(missing)}")
    if not isinstance(doc["field"], str):
        raise ParseError("field must be a spec string")
    field = parse_field(doc["field"])
    n, m, recs = doc["n"], doc["m"], doc["receivers"]
    if not isinstance(n, int) or not isinstance(m, int) or not isinstance(recs, list):
        raise ParseError("n and m must be integers and receivers a list")
    if len(recs) != m:
        raise ParseError(f"m = {m} but {len(recs)} receivers listed")
    side, dem, res = [], [], []
    any_restricted = False
    for k, rec in enumerate(recs):
        if not isinstance(rec, dict):
            raise ParseError(f"receiver {k + 1} must be an object")
        unknown = set(rec) - _REC_KEYS
        if unknown:
            raise ParseError(f"receiver {k + 1}: unknown keys {sorted(unknown)}")
        if "demand" not in rec or not isinstance(rec["demand"], int) or isinstance(rec["demand"], bool):
            raise ParseError(f"receiver {k + 1}: integer demand required")
        dem.append(rec["demand"] - 1)
        side.append(frozenset(_index_list(rec.get("side_info", []), f"receiver {k + 1} side_info")))
        if "restricted" in rec:
            any_restricted = True
            res.append(frozenset(_index_list(rec["restricted"], f"receiver {k + 1} restricted")))
        else:
            res.append(frozenset())
    return IcsiInstance(field, n, tuple(side), tuple(dem), tuple(res) if any_restricted else None)


def instance_to_dict(inst: IcsiInstance) -> dict:
    recs = []
    for i in range(inst.m):
        rec = {"demand": inst.demands[i] + 1, "side_info": [j + 1 for j in inst.side(i)]}
        if inst.restricted is not None:
            rec["restricted"] = [j + 1 for j in sorted(inst.restricted[i])]
        recs.append(rec)
    return {"field": inst.field.spec, "n": inst.n, "m": inst.m, "receivers": recs}


def load_instance(path: str | Path) -> IcsiInstance:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return instance_from_dict(doc)


def save_instance(inst: IcsiInstance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=2) + "\n")
