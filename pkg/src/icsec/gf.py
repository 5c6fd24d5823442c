"""Exact arithmetic in GF(p) and GF(2^m).

Elements are plain integers in ``[0, q)``.  Prime-field elements are residues;
elements of GF(2^m) are polynomial bit-vectors (bit ``i`` is the coefficient of
``x^i``) reduced modulo the field's irreducible polynomial.

Scalar operations live on :class:`GF`; vectorised versions (``vadd``, ``vmul``,
``matmul`` ...) act elementwise on integer numpy arrays and are what the linear
algebra and the exhaustive enumerators use.  :class:`FieldElem` is a thin
operator-overloading wrapper for interactive use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DegreeTooLarge,
    FieldMismatch,
    NonPrimeCharacteristic,
    ParseError,
    ReducibleModulus,
    UnsupportedExtension,
    UnsupportedField,
    ZeroInverse,
)

MAX_PRIME = 1 << 16
MAX_DEGREE = 16


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def poly2_mod(a: int, b: int) -> int:
    """Remainder of binary polynomial ``a`` divided by ``b`` (both bit patterns)."""
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def is_irreducible2(poly: int) -> bool:
    """Exhaustive factor test for a binary polynomial of degree >= 1."""
    m = poly.bit_length() - 1
    if m < 1:
        return False
    if m == 1:
        return True
    # a reducible polynomial has a factor of degree <= m // 2
    for d in range(2, 1 << (m // 2 + 1)):
        if poly2_mod(poly, d) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def default_poly(m: int) -> int:
    """Smallest (as an integer bit pattern) irreducible binary polynomial of degree ``m``."""
    for poly in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_irreducible2(poly):
            return poly
    raise AssertionError(f"no irreducible polynomial of degree {m}")  # pragma: no cover


def _clmul_mod(a: int, b: int, poly: int, m: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> m) & 1:
            a ^= poly
    return r


class GF:
    """The finite field with ``q = p**m`` elements.

    Parameters
    ----------
    p : int
        Characteristic; prime, below 2**16.
    m : int
        Extension degree, 1 <= m <= 16; m > 1 only for p = 2.
    poly : int, optional
        Reduction polynomial for GF(2^m) as a bit pattern including the
        ``x^m`` term.  Defaults to :func:`default_poly`.
    """

    __slots__ = ("p", "m", "q", "poly", "_exp", "_log", "_exp_np", "_log_np", "_inv")

    def __init__(self, p: int, m: int = 1, poly: int | None = None):
        if not is_prime(p):
            raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
        if m < 1:
            raise UnsupportedExtension(f"extension degree must be >= 1, got {m}")
        if m > MAX_DEGREE:
            raise DegreeTooLarge(f"extension degree {m} exceeds {MAX_DEGREE}")
        if m > 1 and p != 2:
            raise UnsupportedExtension(f"GF({p}^{m}): only p = 2 supports m > 1")
        if p >= MAX_PRIME:
            raise UnsupportedField(f"prime {p} is not below {MAX_PRIME}")
        self.p = p
        self.m = m
        self.q = p**m
        if m == 1:
            if poly is not None:
                raise UnsupportedExtension("prime fields take no reduction polynomial")
            self.poly = None
            self._inv = [0] + [pow(a, -1, p) for a in range(1, p)]
            self._exp = self._log = self._exp_np = self._log_np = None
            return
        if poly is None:
            poly = default_poly(m)
        if poly.bit_length() - 1 != m:
            raise ReducibleModulus(f"polynomial {poly:#x} does not have degree {m}")
        if not is_irreducible2(poly):
            raise ReducibleModulus(f"polynomial {poly:#x} is reducible over GF(2)")
        self.poly = poly
        self._build_tables()

    def _build_tables(self) -> None:
        q, m, poly = self.q, self.m, self.poly
        order = q - 1
        factors = _prime_factors(order)
        gen = None
        for g in range(2, q) if q > 2 else ():
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                gen = g
                break
        if gen is None:  # pragma: no cover - GF(2) never reaches here
            gen = 1
        exp = [0] * (2 * order)
        log = [0] * q
        a = 1
        for i in range(order):
            exp[i] = a
            log[a] = i
            a = _clmul_mod(a, gen, poly, m)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp = exp
        self._log = log
        self._exp_np = np.array(exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)
        self._inv = [0] + [exp[order - log[a]] for a in range(1, q)]

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = _clmul_mod(r, a, self.poly, self.m)
            a = _clmul_mod(a, a, self.poly, self.m)
            e >>= 1
        return r

    # identity -------------------------------------------------------------

    def _key(self):
        return (self.p, self.m, self.poly)

    def __eq__(self, other):
        return isinstance(other, GF) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GF({self.spec})"

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    @property
    def spec(self) -> str:
        """Canonical field spec string, e.g. ``gf(5)`` or ``gf(2^3,poly=0xb)``."""
        if self.m == 1:
            return f"gf({self.p})"
        return f"gf(2^{self.m},poly={self.poly:#x})"

    def __call__(self, value: int) -> FieldElem:
        return FieldElem(self, self._check(value))

    def _check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of {self!r}")
        return a

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # scalar arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return a ^ b

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        return a

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse(f"0 has no inverse in {self!r}")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.m == 1:
            return pow(a, e, self.p)
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[self._log[a] * e % (self.q - 1)]

    # vectorised arithmetic on integer arrays -------------------------------

    def asarray(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError(f"entries outside {self!r}")
        return arr

    def vadd(self, a, b) -> np.ndarray:
        if self.m == 1:
            return (np.asarray(a) + b) % self.p
        return np.bitwise_xor(a, b)

    def vsub(self, a, b) -> np.ndarray:
        if self.m == 1:
            return (np.asarray(a) - b) % self.p
        return np.bitwise_xor(a, b)

    def vneg(self, a) -> np.ndarray:
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        return np.asarray(a).copy()

    def vmul(self, a, b) -> np.ndarray:
        if self.m == 1:
            return (np.asarray(a) * b) % self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp_np[self._log_np[a] + self._log_np[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def matmul(self, a, b) -> np.ndarray:
        """Matrix product over the field of two integer arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a @ b) % self.p
        squeeze_a = a.ndim == 1
        squeeze_b = b.ndim == 1
        a2 = a[None, :] if squeeze_a else a
        b2 = b[:, None] if squeeze_b else b
        out = np.zeros((a2.shape[0], b2.shape[1]), dtype=np.int64)
        for k in range(a2.shape[1]):
            out ^= self.vmul(a2[:, k, None], b2[None, k, :])
        if squeeze_a:
            out = out[0]
        if squeeze_b:
            out = out[..., 0]
        return out


@lru_cache(maxsize=None)
def field_new(p: int, m: int = 1, poly: int | None = None) -> GF:
    """Cached :class:`GF` constructor."""
    return GF(p, m, poly)


_SPEC_RE = re.compile(
    r"^\s*gf\(\s*(?:(\d+)\s*\^\s*(\d+)|(\d+))\s*(?:,\s*poly\s*=\s*(0x[0-9a-fA-F]+|\d+)\s*)?\)\s*$",
    re.IGNORECASE,
)


def parse_field(spec: str) -> GF:
    """Parse ``gf(q)``, ``gf(p^m)`` or ``gf(2^m,poly=0x..)``."""
    match = _SPEC_RE.match(spec)
    if not match:
        raise ParseError(f"bad field spec {spec!r}")
    base, exp, order, poly = match.groups()
    poly_val = int(poly, 0) if poly else None
    if order is not None:
        q = int(order)
        if is_prime(q):
            return field_new(q, 1, poly_val)
        factors = _prime_factors(q) if q > 1 else []
        if len(factors) != 1:
            raise NonPrimeCharacteristic(f"{q} is not a prime power")
        if factors[0] != 2:
            raise UnsupportedExtension(f"GF({q}): only p = 2 supports m > 1")
        return field_new(2, q.bit_length() - 1, poly_val)
    return field_new(int(base), int(exp), poly_val)


@dataclass(frozen=True)
class FieldElem:
    field: GF
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, (int, np.integer)):
            if self.field.is_prime_field:
                return int(other) % self.field.p
            return self.field._check(other)
        raise TypeError(f"cannot combine FieldElem with {type(other).__name__}")

    def __add__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElem(self.field, self.field.div(self.value, b))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.value, e))

    def inv(self) -> FieldElem:
        return FieldElem(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value}@{self.field.spec}"
