"""Truncated Laurent series in u = 1/lambda over F_{q^d}.

lambda is a fixed (q-1)-th root of -theta, so theta = -u^(-(q-1)) is
represented exactly and v_u(theta) = -(q-1).  Precision is absolute: an
element with ``prec = N`` is known modulo u^N; ``prec = inf`` means exact.
"""
from __future__ import annotations

import math
from typing import Union

import numpy as np

from .base_arith import FieldElem, FieldParams
from .errors import InversionOfZero, PrecisionLoss

INF = math.inf

Number = Union[int, FieldElem, "LaurentU"]


def _as_prec(x) -> float:
    if x is None or x == "infinity":
        return INF
    return float(x)


def prec_to_json(x: float):
    return "infinity" if x == INF else int(x)


class LaurentU:
    """An element of F_{q^d}((u)) known to absolute precision ``prec``.

    ``data[j]`` holds the coordinates of the coefficient of u^(lead + j).
    After normalisation data[0] is nonzero, unless the element is zero at
    its precision, in which case data is empty.
    """

    __slots__ = ("field", "lead", "data", "prec")
    __hash__ = None

    def __init__(self, field: FieldParams, lead: int, data, prec: float = INF):
        self.field = field
        data = np.asarray(data, dtype=np.int64).reshape(-1, field.D) % field.p
        prec = _as_prec(prec)
        if prec != INF:
            keep = max(0, min(len(data), int(math.ceil(prec)) - lead))
            data = data[:keep]
        nz = np.flatnonzero(data.any(axis=1))
        if len(nz):
            data = data[nz[0] : nz[-1] + 1]
            lead += int(nz[0])
        else:
            data = data[:0]
            lead = int(prec) if prec != INF else 0
        self.lead = int(lead)
        self.data = data
        self.prec = prec

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, field: FieldParams, prec: float = INF) -> LaurentU:
        return cls(field, 0, np.zeros((0, field.D)), prec)

    @classmethod
    def constant(cls, field: FieldParams, c) -> LaurentU:
        c = field.element(c)
        return cls(field, 0, np.array([c.coeffs]))

    @classmethod
    def monomial(cls, field: FieldParams, exponent: int, c=1) -> LaurentU:
        c = field.element(c)
        return cls(field, exponent, np.array([c.coeffs]))

    @classmethod
    def u(cls, field: FieldParams) -> LaurentU:
        return cls.monomial(field, 1)

    @classmethod
    def lam(cls, field: FieldParams) -> LaurentU:
        """lambda = 1/u, a (q-1)-th root of -theta."""
        return cls.monomial(field, -1)

    @classmethod
    def theta(cls, field: FieldParams) -> LaurentU:
        return cls.monomial(field, -(field.q - 1), -1)

    @classmethod
    def from_coeffs(cls, field: FieldParams, lead: int, coeffs, prec: float = INF) -> LaurentU:
        rows = [field.element(c).coeffs for c in coeffs]
        return cls(field, lead, np.array(rows, dtype=np.int64).reshape(-1, field.D), prec)

    def coerce(self, other) -> LaurentU | None:
        if isinstance(other, LaurentU):
            if other.field != self.field:
                raise ValueError("series over different fields")
            return other
        if isinstance(other, (int, np.integer, FieldElem)):
            return LaurentU.constant(self.field, other)
        return None

    # -- inspection --------------------------------------------------------
    def valuation(self) -> float:
        """u-adic valuation; inf when every known coefficient vanishes."""
        return float(self.lead) if len(self.data) else INF

    def vlow(self) -> float:
        """A certified lower bound for the true valuation."""
        return float(self.lead) if len(self.data) else self.prec

    def is_zero(self) -> bool:
        """Zero to the tracked precision."""
        return len(self.data) == 0

    def is_exact_zero(self) -> bool:
        return len(self.data) == 0 and self.prec == INF

    def is_exact(self) -> bool:
        return self.prec == INF

    def is_unit(self) -> bool:
        return not self.is_zero()

    def rel_prec(self) -> float:
        return self.prec - self.valuation() if len(self.data) else 0.0

    def coeff(self, k: int) -> FieldElem:
        if k >= self.prec:
            raise PrecisionLoss(f"coefficient of u^{k} is beyond precision {self.prec}")
        j = k - self.lead
        if 0 <= j < len(self.data):
            return FieldElem(self.field, tuple(int(c) for c in self.data[j]))
        return self.field.zero()

    def zero_like(self) -> LaurentU:
        return LaurentU.zero(self.field)

    def one_like(self) -> LaurentU:
        return LaurentU.constant(self.field, 1)

    def truncate(self, prec: float) -> LaurentU:
        return LaurentU(self.field, self.lead, self.data, min(self.prec, _as_prec(prec)))

    def _dense(self, lo: int, hi: int) -> np.ndarray:
        out = np.zeros((hi - lo, self.field.D), dtype=np.int64)
        if len(self.data):
            out[self.lead - lo : self.lead - lo + len(self.data)] = self.data
        return out

    # -- ring operations ---------------------------------------------------
    def _addsub(self, other: LaurentU, sign: int) -> LaurentU:
        prec = min(self.prec, other.prec)
        if not len(self.data) and not len(other.data):
            return LaurentU.zero(self.field, prec)
        spans = [(x.lead, x.lead + len(x.data)) for x in (self, other) if len(x.data)]
        lo = min(s[0] for s in spans)
        hi = max(s[1] for s in spans)
        acc = self._dense(lo, hi) + sign * other._dense(lo, hi)
        return LaurentU(self.field, lo, acc, prec)

    def __add__(self, other):
        o = self.coerce(other)
        return NotImplemented if o is None else self._addsub(o, 1)

    __radd__ = __add__

    def __sub__(self, other):
        o = self.coerce(other)
        return NotImplemented if o is None else self._addsub(o, -1)

    def __rsub__(self, other):
        o = self.coerce(other)
        return NotImplemented if o is None else o._addsub(self, -1)

    def __neg__(self):
        return LaurentU(self.field, self.lead, -self.data, self.prec)

    def __mul__(self, other):
        o = self.coerce(other)
        if o is None:
            return NotImplemented
        prec = min(self.prec + o.vlow(), o.prec + self.vlow())
        if not len(self.data) or not len(o.data):
            return LaurentU.zero(self.field, prec)
        data = self.field.conv(self.data, o.data)
        return LaurentU(self.field, self.lead + o.lead, data, prec)

    __rmul__ = __mul__

    def inverse(self, prec: float | None = None) -> LaurentU:
        """1/x.  ``prec`` caps (and for exact non-monomials, sets) the result precision."""
        if not len(self.data):
            raise InversionOfZero("no nonzero coefficient is known")
        v = self.lead
        target = self.prec - 2 * v
        if prec is not None:
            target = min(target, _as_prec(prec))
        if target == INF:
            if len(self.data) == 1:
                c = FieldElem(self.field, tuple(int(x) for x in self.data[0])).inverse()
                return LaurentU(self.field, -v, np.array([c.coeffs]))
            raise ValueError("inverse of an exact non-monomial needs a target precision")
        L = int(math.ceil(target)) + v
        if L <= 0:
            return LaurentU.zero(self.field, target)
        w = self.data[:L]
        if len(w) < L:
            w = np.pad(w, ((0, L - len(w)), (0, 0)))
        y = self.field.inv_series(w, L)
        return LaurentU(self.field, -v, y, target)

    invert = inverse

    def __truediv__(self, other):
        o = self.coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self.coerce(other)
        return NotImplemented if o is None else o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.one_like()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> LaurentU:
        """Multiply by u^k."""
        return LaurentU(self.field, self.lead + k, self.data, self.prec + k)

    def coeff_twist(self, k: int) -> LaurentU:
        """x ↦ x^(q^k): u-exponents scale by q^k, coefficients by Frobenius^k."""
        if k == 0:
            return self
        F = self.field
        Qk = F.q ** abs(k)
        rows = F.frob_rows(self.data, k)
        if k > 0:
            if not len(rows):
                return LaurentU.zero(F, self.prec * Qk)
            out = np.zeros(((len(rows) - 1) * Qk + 1, F.D), dtype=np.int64)
            out[::Qk] = rows
            return LaurentU(F, self.lead * Qk, out, self.prec * Qk)
        prec = self.prec if self.prec == INF else math.ceil(self.prec / Qk)
        if not len(rows):
            return LaurentU.zero(F, prec)
        exps = self.lead + np.flatnonzero(rows.any(axis=1))
        if np.any(exps % Qk):
            raise PrecisionLoss(f"element is not a q^{abs(k)}-th power in F_{{q^d}}((u))")
        start = -((-self.lead) // Qk)
        first = start * Qk - self.lead
        return LaurentU(F, start, rows[first::Qk], prec)

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        o = self.coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __repr__(self):
        terms = []
        for j, row in enumerate(self.data[:6]):
            if row.any():
                c = FieldElem(self.field, tuple(int(x) for x in row))
                terms.append(f"({c})*u^{self.lead + j}")
        if len(self.data) > 6:
            terms.append("...")
        body = " + ".join(terms) if terms else "0"
        return body if self.prec == INF else f"{body} + O(u^{int(self.prec)})"

    # -- serialisation -----------------------------------------------------
    def to_json(self) -> dict:
        if self.prec == INF:
            rows = self.data
        else:
            rows = self._dense(self.lead, int(self.prec)) if len(self.data) else self.data
        return {
            "lead": self.lead,
            "prec": prec_to_json(self.prec),
            "coeffs": [[int(c) for c in r] for r in rows],
        }

    @classmethod
    def from_json(cls, field: FieldParams, obj: dict) -> LaurentU:
        data = np.array(obj["coeffs"], dtype=np.int64).reshape(-1, field.D)
        return cls(field, int(obj["lead"]), data, _as_prec(obj["prec"]))
