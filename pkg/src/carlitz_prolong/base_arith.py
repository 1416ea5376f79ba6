"""Finite fields F_{q^d} with q = p^e, and binomials mod p.

Elements are coordinate vectors over F_p with respect to the power basis
of a fixed monic irreducible modulus of degree e*d.  Besides scalar
arithmetic (FieldElem) the field object exposes vectorised kernels on
integer arrays whose last axis holds those coordinates; the series types
build on them.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy import signal

from .errors import ConfigError, InversionOfZero

# Above this many products per output slot the FFT path is not trusted.
_FFT_EXACT_LIMIT = 2**50


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q == p**e, or raise ConfigError."""
    if q < 2:
        raise ConfigError(f"q={q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ConfigError(f"q={q} is not a prime power")
    return p, e


def binom_mod_p(i: int, n: int, p: int) -> int:
    """C(i, n) mod p for i, n >= 0 via Lucas' theorem (0 when n > i)."""
    if n < 0 or i < 0 or n > i:
        return 0
    r = 1
    while n:
        i, a = divmod(i, p)
        n, b = divmod(n, p)
        if b > a:
            return 0
        r = r * math.comb(a, b) % p
    return r


def binom_signed_mod_p(a: int, n: int, p: int) -> int:
    """Generalised C(a, n) mod p for any integer a, n >= 0.

    Uses C(a, n) = (-1)^n C(n - a - 1, n) for negative a.
    """
    if n < 0:
        return 0
    if a >= 0:
        return binom_mod_p(a, n, p)
    c = binom_mod_p(n - a - 1, n, p)
    return c if n % 2 == 0 else (-c) % p


# -- polynomials over F_p as coefficient lists, low to high ---------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    inv = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for j, mj in enumerate(m):
            a[shift + j] = (a[shift + j] - c * mj) % p
        _trim(a)
    return a


def _is_irreducible(m: Sequence[int], p: int) -> bool:
    deg = len(m) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    # trial division by every monic polynomial of degree 1..deg//2
    for k in range(1, deg // 2 + 1):
        for idx in range(p**k):
            f = [(idx // p**j) % p for j in range(k)] + [1]
            if not _polymod(m, f, p):
                return False
    return True


def smallest_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Smallest monic irreducible of the given degree.

    Candidates are enumerated by the integer whose base-p digits are the
    non-leading coefficients (low to high), so the result is deterministic.
    """
    for idx in range(p**degree):
        m = [(idx // p**j) % p for j in range(degree)] + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class FieldParams:
    """The field F_{q^d}, q = p^e, with a fixed power-basis modulus."""

    p: int
    e: int
    d: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ConfigError(f"p={self.p} is not prime")
        if self.e < 1 or self.d < 1:
            raise ConfigError("e and d must be >= 1")
        if self.p ** (self.e * self.d) > 2**20:
            raise ConfigError("fields with more than 2^20 elements are not supported")
        object.__setattr__(self, "modulus", tuple(int(c) % self.p for c in self.modulus))
        m = self.modulus
        if len(m) != self.e * self.d + 1 or m[-1] != 1:
            raise ConfigError("modulus must be monic of degree e*d")
        if not _is_irreducible(m, self.p):
            raise ConfigError(f"modulus {list(m)} is reducible over F_{self.p}")

    @classmethod
    def create(cls, q: int, d: int = 1) -> FieldParams:
        p, e = prime_power(q)
        return _create(p, e, d)

    # -- sizes -------------------------------------------------------------
    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def D(self) -> int:
        """Dimension of the field over F_p."""
        return self.e * self.d

    @property
    def order(self) -> int:
        return self.p**self.D

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "d": self.d, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> FieldParams:
        return cls(int(obj["p"]), int(obj["e"]), int(obj["d"]), tuple(obj["modulus"]))

    # -- elements ----------------------------------------------------------
    def __call__(self, value) -> FieldElem:
        return self.element(value)

    def element(self, value) -> FieldElem:
        if isinstance(value, FieldElem):
            return value
        D = self.D
        if isinstance(value, (int, np.integer)):
            v = [0] * D
            v[0] = int(value) % self.p
            return FieldElem(self, tuple(v))
        v = [int(c) % self.p for c in value]
        if len(v) > D:
            v = _polymod(v, self.modulus, self.p)
        v = v + [0] * (D - len(v))
        return FieldElem(self, tuple(v))

    def zero(self) -> FieldElem:
        return self.element(0)

    def one(self) -> FieldElem:
        return self.element(1)

    def gen(self) -> FieldElem:
        """The class of x (a generator of the field over F_p)."""
        return self.element([0, 1]) if self.D > 1 else self.element(self._prim_root())

    def elements(self) -> Iterator[FieldElem]:
        D, p = self.D, self.p
        for idx in range(self.order):
            yield FieldElem(self, tuple((idx // p**j) % p for j in range(D)))

    def from_index(self, idx: int) -> FieldElem:
        D, p = self.D, self.p
        return FieldElem(self, tuple((idx // p**j) % p for j in range(D)))

    def _prim_root(self) -> int:
        p = self.p
        if p == 2:
            return 1
        fac = {f for f in range(2, p) if (p - 1) % f == 0 and is_prime(f)}
        return next(g for g in range(2, p) if all(pow(g, (p - 1) // f, p) != 1 for f in fac))

    # -- precomputed tables ------------------------------------------------
    @functools.cached_property
    def reduce_table(self) -> np.ndarray:
        """Row j holds x^(D+j) mod modulus, j = 0..D-2."""
        D = self.D
        rows = []
        for j in range(D - 1):
            mono = [0] * (D + j) + [1]
            r = _polymod(mono, self.modulus, self.p)
            rows.append(r + [0] * (D - len(r)))
        return np.array(rows, dtype=np.int64).reshape(max(D - 1, 0), D)

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        """T[i, j, k] = coefficient of x^k in x^i * x^j."""
        D = self.D
        T = np.zeros((D, D, D), dtype=np.int64)
        for i in range(D):
            for j in range(D):
                r = _polymod([0] * (i + j) + [1], self.modulus, self.p)
                T[i, j, : len(r)] = r
        return T

    @functools.lru_cache(maxsize=None)
    def frob_matrix(self, k: int) -> np.ndarray:
        """Matrix F with v @ F = coordinates of x^(q^k) for x with coordinates v."""
        k %= self.d
        D = self.D
        F = np.zeros((D, D), dtype=np.int64)
        for i in range(D):
            basis = [0] * D
            basis[i] = 1
            img = FieldElem(self, tuple(basis)) ** (self.q**k)
            F[i] = img.coeffs
        F.setflags(write=False)
        return F

    # -- array kernels -----------------------------------------------------
    def reduce(self, a: np.ndarray) -> np.ndarray:
        """Fold a last axis of length <= 2D-1 back to length D, mod p."""
        D, p = self.D, self.p
        a = np.asarray(a, dtype=np.int64) % p
        L = a.shape[-1]
        if L <= D:
            if L == D:
                return a
            pad = [(0, 0)] * (a.ndim - 1) + [(0, D - L)]
            return np.pad(a, pad)
        out = a[..., :D] + a[..., D:] @ self.reduce_table[: L - D]
        return out % p

    def conv(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product of two arrays of field elements, convolving all leading axes."""
        if a.ndim != b.ndim:
            raise ValueError("rank mismatch in convolution")
        if a.size == 0 or b.size == 0:
            shape = tuple(x + y - 1 for x, y in zip(a.shape[:-1], b.shape[:-1]))
            return np.zeros(tuple(max(s, 0) for s in shape) + (self.D,), dtype=np.int64)
        count = 1
        for x, y in zip(a.shape, b.shape):
            count *= min(x, y)
        bound = count * (self.p - 1) ** 2
        if bound >= 2**62:  # pragma: no cover - outside supported sizes
            raise OverflowError("convolution too large for exact int64 arithmetic")
        method = "auto" if bound < _FFT_EXACT_LIMIT else "direct"
        full = signal.convolve(a, b, mode="full", method=method)
        return self.reduce(full)

    def scale_rows(self, data: np.ndarray, factors: np.ndarray) -> np.ndarray:
        """Multiply data[m, ...] by the field element factors[m] (shape (M, D))."""
        out = np.einsum("m...i,mj,ijk->m...k", data, factors, self.mul_table, optimize=True)
        return out % self.p

    def inv_series(self, w: np.ndarray, L: int) -> np.ndarray:
        """First L coefficients of 1/w for a u-adic unit w (rows = powers of u)."""
        c0 = FieldElem(self, tuple(int(x) for x in w[0]))
        y = np.array([c0.inverse().coeffs], dtype=np.int64)
        n = 1
        one = np.zeros((1, self.D), dtype=np.int64)
        one[0, 0] = 1
        while n < L:
            n = min(2 * n, L)
            wy = self.conv(w[:n], y)[:n]
            err = -wy
            err[0] = (err[0] + one[0]) % self.p
            y = np.pad(y, ((0, n - len(y)), (0, 0)))
            y = (y + self.conv(y, err)[:n]) % self.p
        return y[:L]

    def frob_rows(self, data: np.ndarray, k: int) -> np.ndarray:
        if k % self.d == 0:
            return data
        return (data @ self.frob_matrix(k % self.d)) % self.p


@functools.lru_cache(maxsize=None)
def _create(p: int, e: int, d: int) -> FieldParams:
    return FieldParams(p, e, d, smallest_irreducible(p, e * d))


@dataclass(frozen=True)
class FieldElem:
    field: FieldParams
    coeffs: tuple[int, ...]

    def _lift(self, other) -> FieldElem | None:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, np.integer)):
            return self.field.element(int(other))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElem(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        F = self.field
        prod = [0] * (2 * F.D - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        return F.element(_polymod(prod, F.modulus, F.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> FieldElem:
        if not any(self.coeffs):
            raise InversionOfZero("zero has no inverse in a field")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, FieldElem) else other
        if o is None:
            return NotImplemented
        return self.field == o.field and self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        terms = [f"{c}" if i == 0 else (f"{c}*x^{i}" if c != 1 else f"x^{i}")
                 for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"

    def index(self) -> int:
        p = self.field.p
        return sum(c * p**j for j, c in enumerate(self.coeffs))

    def degree_over_fq(self) -> int:
        """Smallest d' >= 1 with x^(q^d') == x."""
        y, k = frobenius(self, 1), 1
        while y != self:
            y, k = frobenius(y, 1), k + 1
        return k

    def in_fq(self) -> bool:
        return frobenius(self, 1) == self


def frobenius(x: FieldElem, k: int) -> FieldElem:
    """x^(q^k); negative k gives the inverse twist."""
    F = x.field
    k %= F.d
    if k == 0:
        return x
    v = np.array(x.coeffs, dtype=np.int64) @ F.frob_matrix(k) % F.p
    return FieldElem(F, tuple(int(c) for c in v))


def qth_root(x: FieldElem) -> FieldElem:
    """The unique y with y^q == x, computed as x^(Q/q) with Q = q^d."""
    F = x.field
    return x ** (F.order // F.q)
