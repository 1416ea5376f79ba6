"""Polynomials and truncated power series in t with LaurentU coefficients.

Storage is one integer array ``data[m, j, :]`` = coefficient of t^m u^(lead+j),
a per-row absolute u-precision, and a *tail certificate* (a, b): every
coefficient x_m that is not stored (m >= tprec) satisfies
v_u(x_m) >= a + b*m.  Polynomials have a = +inf (the omitted
coefficients are exactly zero); a plain truncated series has a = -inf.

The certificate is what lets evaluations at t = theta and t = zeta claim a
precision for the infinite tail instead of guessing.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .base_arith import FieldElem, FieldParams, binom_mod_p
from .errors import DivergentEvaluation, InversionOfZero, PrecisionExhausted
from .laurent_u import INF, LaurentU, _as_prec, prec_to_json

NINF = -math.inf


def _addinf(x: float, y: float) -> float:
    # inf + -inf only arises when one factor is identically zero
    if math.isinf(x) and math.isinf(y) and x != y:
        return INF
    return x + y


class TSeries:
    __slots__ = ("field", "lead", "data", "prec", "tail")
    __hash__ = None

    def __init__(self, field: FieldParams, lead: int, data, prec, tail=(INF, 0.0)):
        self.field = field
        data = np.asarray(data, dtype=np.int64) % field.p
        if data.ndim != 3:
            data = data.reshape(len(prec), -1, field.D)
        prec = np.asarray(prec, dtype=np.float64).reshape(-1)
        M, W, _ = data.shape
        if len(prec) != M:
            raise ValueError("one precision per stored t-coefficient is required")
        a, b = float(tail[0]), float(tail[1])
        if W:
            cols = lead + np.arange(W)
            data = np.where((cols[None, :] >= prec[:, None])[:, :, None], 0, data)
            colmask = data.any(axis=(0, 2))
            nz = np.flatnonzero(colmask)
            if len(nz):
                data = data[:, nz[0] : nz[-1] + 1]
                lead += int(nz[0])
            else:
                data = data[:, :0]
                lead = 0
        else:
            lead = 0
        if a == INF:
            # polynomial: drop trailing rows that are exactly zero
            rows = data.any(axis=(1, 2)) if data.shape[1] else np.zeros(M, dtype=bool)
            keep = M
            while keep and not rows[keep - 1] and prec[keep - 1] == INF:
                keep -= 1
            data, prec = data[:keep], prec[:keep]
        self.lead = int(lead)
        self.data = data
        self.prec = prec
        self.tail = (a, b)

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_coeffs(cls, field: FieldParams, coeffs: Sequence, kind: str = "polynomial",
                    tail=None) -> TSeries:
        items = []
        for c in coeffs:
            if isinstance(c, LaurentU):
                items.append(c)
            else:
                items.append(LaurentU.constant(field, c))
        M = len(items)
        spans = [(x.lead, x.lead + len(x.data)) for x in items if len(x.data)]
        lo = min((s[0] for s in spans), default=0)
        hi = max((s[1] for s in spans), default=0)
        data = np.zeros((M, hi - lo, field.D), dtype=np.int64)
        for m, x in enumerate(items):
            if len(x.data):
                data[m, x.lead - lo : x.lead - lo + len(x.data)] = x.data
        prec = [x.prec for x in items]
        if tail is None:
            tail = (INF, 0.0) if kind == "polynomial" else (NINF, 0.0)
        return cls(field, lo, data, prec, tail)

    @classmethod
    def constant(cls, field: FieldParams, c) -> TSeries:
        return cls.from_coeffs(field, [c])

    @classmethod
    def zero(cls, field: FieldParams) -> TSeries:
        return cls.from_coeffs(field, [])

    @classmethod
    def t(cls, field: FieldParams) -> TSeries:
        return cls.from_coeffs(field, [0, 1])

    @classmethod
    def monomial(cls, field: FieldParams, m: int, c=1) -> TSeries:
        return cls.from_coeffs(field, [0] * m + [c])

    @classmethod
    def t_minus_theta(cls, field: FieldParams) -> TSeries:
        return cls.from_coeffs(field, [-LaurentU.theta(field), 1])

    def zero_like(self) -> TSeries:
        return TSeries.zero(self.field)

    def one_like(self) -> TSeries:
        return TSeries.constant(self.field, 1)

    def _new(self, lead, data, prec, tail) -> TSeries:
        return TSeries(self.field, lead, data, prec, tail)

    # -- inspection --------------------------------------------------------
    @property
    def tprec(self) -> int:
        return len(self.prec)

    @property
    def kind(self) -> str:
        return "polynomial" if self.tail[0] == INF else "series"

    @property
    def is_polynomial(self) -> bool:
        return self.tail[0] == INF

    def coeff(self, m: int) -> LaurentU:
        if m < self.tprec:
            return LaurentU(self.field, self.lead, self.data[m], self.prec[m])
        if self.is_polynomial:
            return LaurentU.zero(self.field)
        a, b = self.tail
        bound = a + b * m
        if bound == NINF:
            raise PrecisionExhausted(f"t^{m} coefficient lies beyond the truncation")
        return LaurentU.zero(self.field, math.floor(bound))

    __getitem__ = coeff

    @property
    def coeffs(self) -> list[LaurentU]:
        return [self.coeff(m) for m in range(self.tprec)]

    def vlow(self) -> np.ndarray:
        """Per-row lower bounds for the u-valuation."""
        M = self.tprec
        if not self.data.shape[1]:
            return self.prec.copy()
        nz = self.data.any(axis=2)
        has = nz.any(axis=1)
        first = np.argmax(nz, axis=1)
        return np.where(has, self.lead + first, self.prec).astype(np.float64)[:M]

    def nonzero_rows(self) -> np.ndarray:
        if not self.data.shape[1]:
            return np.zeros(self.tprec, dtype=bool)
        return self.data.any(axis=(1, 2))

    def min_prec(self) -> float:
        return float(self.prec.min()) if self.tprec else INF

    def is_zero(self) -> bool:
        """All stored coefficients vanish to their precision."""
        return not self.nonzero_rows().any()

    def is_exact_zero(self) -> bool:
        return self.is_polynomial and self.tprec == 0

    def is_unit(self) -> bool:
        """Invertible in the power-series ring (nonzero constant term)."""
        return self.tprec > 0 and bool(self.nonzero_rows()[0] and self.vlow()[0] < self.prec[0])

    def degree(self) -> int:
        if not self.is_polynomial:
            raise ValueError("degree of a truncated series is undefined")
        return self.tprec - 1

    # -- tail certificates -------------------------------------------------
    def _line(self, start: int, slope: float) -> float:
        """Largest a with v(x_m) >= a + slope*m for every m >= start (given knowledge)."""
        a = INF
        if start < self.tprec:
            vl = self.vlow()[start:]
            m = np.arange(start, self.tprec)
            if len(vl):
                a = float(np.min(vl - slope * m))
        ta, tb = self.tail
        if ta == INF:
            return a
        if ta == NINF:
            return NINF
        if slope > tb:
            return NINF
        return min(a, ta + (tb - slope) * max(self.tprec, start))

    def with_tail(self, a: float, b: float) -> TSeries:
        """Attach a certificate known from outside (e.g. a product formula)."""
        return TSeries(self.field, self.lead, self.data, self.prec, (a, b))

    def truncate_t(self, n: int) -> TSeries:
        """Keep t^0..t^(n-1) as a series; dropped rows feed the tail bound."""
        n = max(0, n)
        if self.is_polynomial:
            slope = 0.0
        else:
            slope = self.tail[1]
        if n >= self.tprec and not self.is_polynomial:
            return self
        data, prec = self.data[:n], self.prec[:n]
        if n > self.tprec:
            pad = n - self.tprec
            data = np.concatenate([data, np.zeros((pad,) + data.shape[1:], dtype=np.int64)])
            prec = np.concatenate([prec, np.full(pad, INF)])
        a = self._line(n, slope)
        return TSeries(self.field, self.lead, data, prec, (a, slope))

    def truncate_u(self, prec: float) -> TSeries:
        return self._new(self.lead, self.data, np.minimum(self.prec, prec), self.tail)

    # -- arithmetic --------------------------------------------------------
    def coerce(self, other) -> TSeries | None:
        if isinstance(other, TSeries):
            if other.field != self.field:
                raise ValueError("series over different fields")
            return other
        if isinstance(other, (int, np.integer, FieldElem, LaurentU)):
            return TSeries.constant(self.field, other)
        return None

    def _padded(self, M: int, lo: int, hi: int):
        data = np.zeros((M, hi - lo, self.field.D), dtype=np.int64)
        k = min(M, self.tprec)
        W = self.data.shape[1]
        if W and k:
            data[:k, self.lead - lo : self.lead - lo + W] = self.data[:k]
        prec = np.full(M, INF)
        prec[:k] = self.prec[:k]
        return data, prec

    def _addsub(self, other: TSeries, sign: int) -> TSeries:
        f, g = self, other
        if f.is_polynomial and g.is_polynomial:
            M = max(f.tprec, g.tprec)
            tail = (INF, 0.0)
        else:
            Ms = [x.tprec for x in (f, g) if not x.is_polynomial]
            slopes = [x.tail[1] for x in (f, g) if not x.is_polynomial]
            M = min(Ms)
            b = min(slopes)
            tail = (min(f._line(M, b), g._line(M, b)), b)
        spans = [(x.lead, x.lead + x.data.shape[1]) for x in (f, g) if x.data.shape[1]]
        lo = min((s[0] for s in spans), default=0)
        hi = max((s[1] for s in spans), default=0)
        df, pf = f._padded(M, lo, hi)
        dg, pg = g._padded(M, lo, hi)
        return TSeries(self.field, lo, df + sign * dg, np.minimum(pf, pg), tail)

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
        return self._new(self.lead, -self.data, self.prec, self.tail)

    def __mul__(self, other):
        o = self.coerce(other)
        if o is None:
            return NotImplemented
        return _mul(self, o)

    __rmul__ = __mul__

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

    def inverse(self, terms: int | None = None, prec: float | None = None) -> TSeries:
        """Power-series inverse by Newton iteration.

        ``terms`` defaults to tprec for series and is required for polynomials
        of positive degree; ``prec`` is needed when the constant term is an
        exact non-monomial.
        """
        if not self.tprec or not self.nonzero_rows()[0]:
            raise InversionOfZero("constant term is zero at its precision")
        if terms is None:
            if self.is_polynomial and self.tprec > 1:
                raise ValueError("inverse of a polynomial needs a number of terms")
            terms = self.tprec
        c0 = self.coeff(0).inverse(prec)
        if self.is_polynomial and self.tprec == 1:
            return TSeries.constant(self.field, c0)
        if not self.is_polynomial:
            terms = min(terms, self.tprec)
        y = TSeries.from_coeffs(self.field, [c0], kind="series")
        n = 1
        one = self.one_like()
        while n < terms:
            n = min(2 * n, terms)
            yp = y.as_polynomial()
            err = one - self.series_rows(n) * yp
            y = (yp + yp * err).series_rows(n)
        return y

    def as_polynomial(self) -> TSeries:
        """The stored rows read as a polynomial (drops the tail)."""
        return TSeries(self.field, self.lead, self.data, self.prec, (INF, 0.0))

    def series_rows(self, n: int, tail=(NINF, 0.0)) -> TSeries:
        """Exactly n rows as a series; padding uses exact zeros for polynomials."""
        data, prec = self.data[:n], self.prec[:n]
        if n > self.tprec:
            pad = n - self.tprec
            if self.is_polynomial:
                extra = np.full(pad, INF)
            else:
                a, b = self.tail
                if a == NINF:
                    raise PrecisionExhausted("rows beyond the truncation are unknown")
                extra = np.floor(a + b * np.arange(self.tprec, n))
            data = np.concatenate([data, np.zeros((pad,) + data.shape[1:], dtype=np.int64)])
            prec = np.concatenate([prec, extra])
        return TSeries(self.field, self.lead, data, prec, tail)

    # -- operators ---------------------------------------------------------
    def hyperderive(self, n: int) -> TSeries:
        """n-th hyperderivative in t: x_i t^i ↦ C(i, n) x_i t^(i-n)."""
        if n == 0:
            return self
        p = self.field.p
        M = self.tprec
        a, b = self.tail
        tail = (a, b) if a in (INF, NINF) else (a + b * n, b)
        if M <= n:
            empty = np.zeros((0, 0, self.field.D), dtype=np.int64)
            return TSeries(self.field, 0, empty, [], tail)
        c = np.array([binom_mod_p(i, n, p) for i in range(n, M)], dtype=np.int64)
        data = self.data[n:] * c[:, None, None]
        prec = np.where(c == 0, INF, self.prec[n:])
        return TSeries(self.field, self.lead, data, prec, tail)

    def twist(self, k: int) -> TSeries:
        """Apply x ↦ x^(q^k) to every coefficient (tau for k=1, sigma for k=-1)."""
        if k == 0:
            return self
        F = self.field
        Qk = F.q ** abs(k)
        M, W, D = self.data.shape
        a, b = self.tail
        if k > 0:
            rows = F.frob_rows(self.data, k)
            out = np.zeros((M, (W - 1) * Qk + 1 if W else 0, D), dtype=np.int64)
            if W:
                out[:, ::Qk] = rows
            tail = (a * Qk if math.isfinite(a) else a, b * Qk)
            return TSeries(F, self.lead * Qk, out, self.prec * Qk, tail)
        # inverse twist: only q^|k|-th powers can be untwisted
        from .errors import PrecisionLoss

        prec = np.where(np.isinf(self.prec), self.prec, np.ceil(self.prec / Qk))
        tail = (a / Qk if math.isfinite(a) else a, b / Qk)
        if not W:
            return TSeries(F, 0, self.data, prec, tail)
        colnz = np.flatnonzero(self.data.any(axis=(0, 2)))
        if np.any((self.lead + colnz) % Qk):
            raise PrecisionLoss(f"series is not a q^{abs(k)}-th power at this precision")
        start = -((-self.lead) // Qk)
        first = start * Qk - self.lead
        rows = F.frob_rows(self.data[:, first::Qk], k)
        return TSeries(F, start, rows, prec, tail)

    def eval_at_theta(self, tail_bound: float | None = None) -> LaurentU:
        """Sum x_m theta^m, with the tail certified by ``tail_bound`` or the certificate."""
        F = self.field
        q1 = F.q - 1
        M = self.tprec
        if self.is_polynomial:
            tb = INF
        elif tail_bound is not None:
            tb = float(tail_bound)
        else:
            a, b = self.tail
            if a == NINF or b <= q1:
                raise DivergentEvaluation(
                    "no certified tail bound for evaluation at t = theta"
                )
            tb = a + b * M - q1 * M
        if not self.is_polynomial:
            self._divergence_guard(q1)
        if M == 0:
            return LaurentU.zero(F, math.floor(tb) if tb != INF else INF)
        W = self.data.shape[1]
        span = (M - 1) * q1
        out = np.zeros((W + span, F.D), dtype=np.int64)
        if W:
            for m in range(M):
                off = (M - 1 - m) * q1
                if m % 2:
                    out[off : off + W] -= self.data[m]
                else:
                    out[off : off + W] += self.data[m]
        prec = float(np.min(self.prec - q1 * np.arange(M)))
        prec = min(prec, math.floor(tb) if tb != INF else INF)
        return LaurentU(F, self.lead - span, out, prec)

    def _divergence_guard(self, q1: int) -> None:
        # the smallest term valuation must not recur among the last q stored terms
        nz = np.flatnonzero(self.nonzero_rows())
        q = self.field.q
        if len(nz) <= q:
            return
        w = self.vlow()[nz] - q1 * nz
        if w[-q:].min() <= w[:-q].min():
            raise DivergentEvaluation(
                "term valuations stop increasing: series does not converge at t = theta"
            )

    def eval_at_zeta(self, zeta, tail_bound: float | None = None) -> LaurentU:
        """Sum x_m zeta^m for a constant zeta of F_{q^d} (|zeta| <= 1)."""
        F = self.field
        zeta = F.element(zeta)
        M = self.tprec
        if self.is_polynomial:
            tb = INF
        elif not zeta:
            tb = INF
        elif tail_bound is not None:
            tb = float(tail_bound)
        else:
            a, b = self.tail
            if a == NINF or b < 0:
                raise PrecisionExhausted("no certified tail bound for evaluation at zeta")
            tb = a + b * M
        if M == 0:
            return LaurentU.zero(F, math.floor(tb) if tb != INF else INF)
        if not zeta:
            return self.coeff(0)
        pows = [F.one()]
        for _ in range(M - 1):
            pows.append(pows[-1] * zeta)
        Z = np.array([z.coeffs for z in pows], dtype=np.int64)
        W = self.data.shape[1]
        if W:
            out = F.scale_rows(self.data, Z).sum(axis=0) % F.p
        else:
            out = np.zeros((0, F.D), dtype=np.int64)
        prec = min(float(self.prec.min()), math.floor(tb) if tb != INF else INF)
        return LaurentU(F, self.lead, out, prec)

    # -- comparison / io ---------------------------------------------------
    def __eq__(self, other):
        o = self.coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __repr__(self):
        parts = []
        for m in range(min(self.tprec, 4)):
            c = self.coeff(m)
            if not c.is_zero() or c.prec != INF:
                parts.append(f"[{c!r}]*t^{m}")
        body = " + ".join(parts) or "0"
        if self.tprec > 4:
            body += " + ..."
        if not self.is_polynomial:
            body += f" + O(t^{self.tprec})"
        return body

    def to_json(self) -> dict:
        obj = {
            "tprec": self.tprec,
            "kind": self.kind,
            "coeffs": [c.to_json() for c in self.coeffs],
        }
        if not self.is_polynomial:
            a, b = self.tail
            obj["tail"] = None if a == NINF else [a, b]
        return obj

    @classmethod
    def from_json(cls, field: FieldParams, obj: dict) -> TSeries:
        coeffs = [LaurentU.from_json(field, c) for c in obj["coeffs"]]
        if obj.get("kind", "polynomial") == "polynomial":
            return cls.from_coeffs(field, coeffs)
        tail = obj.get("tail")
        tail = (NINF, 0.0) if tail is None else (float(tail[0]), float(tail[1]))
        return cls.from_coeffs(field, coeffs, kind="series", tail=tail)


def _mul(f: TSeries, g: TSeries) -> TSeries:
    F = f.field
    if f.is_exact_zero() or g.is_exact_zero():
        return TSeries.zero(F)
    if f.is_polynomial and g.is_polynomial:
        M = f.tprec + g.tprec - 1
        tail = (INF, 0.0)
    else:
        series = [x for x in (f, g) if not x.is_polynomial]
        M = min(x.tprec for x in series)
        b = min(x.tail[1] for x in series)
        tail = (_addinf(f._line(0, b), g._line(0, b)), b)
    Mf, Mg = min(f.tprec, M), min(g.tprec, M)
    vf, pf = f.vlow()[:Mf], f.prec[:Mf]
    vg, pg = g.vlow()[:Mg], g.prec[:Mg]
    T = np.minimum(pf[:, None] + vg[None, :], pg[None, :] + vf[:, None])
    prec = np.full(M, INF)
    for m in range(M):
        lo, hi = max(0, m - Mg + 1), min(m, Mf - 1)
        if lo <= hi:
            ii = np.arange(lo, hi + 1)
            prec[m] = T[ii, m - ii].min()
    if f.data.shape[1] and g.data.shape[1]:
        data = F.conv(f.data[:Mf], g.data[:Mg])[:M]
        if data.shape[0] < M:
            pad = np.zeros((M - data.shape[0],) + data.shape[1:], dtype=np.int64)
            data = np.concatenate([data, pad])
        lead = f.lead + g.lead
    else:
        data = np.zeros((M, 0, F.D), dtype=np.int64)
        lead = 0
    return TSeries(F, lead, data, prec, tail)


def hyperderive(f: TSeries, n: int) -> TSeries:
    return f.hyperderive(n)


def twist(f: TSeries, k: int) -> TSeries:
    return f.twist(k)


def eval_at_theta(f: TSeries, tail_bound: float | None = None) -> LaurentU:
    return f.eval_at_theta(tail_bound)


def eval_at_zeta(f: TSeries, zeta, tail_bound: float | None = None) -> LaurentU:
    return f.eval_at_zeta(zeta, tail_bound)


def recenter_at_theta(f: TSeries, pole_order: int, terms: int,
                      tail_growth: tuple[float, float] | None = None) -> list[LaurentU]:
    """Laurent coefficients c_{-pole_order}, ..., c_{terms-pole_order-1} of f around t = theta.

    The pole is multiplied out by (t - theta)^pole_order; the Taylor
    coefficients of the product at theta are the hyperderivatives evaluated
    there.  ``tail_growth`` is a certificate (a, b) for the coefficients of
    the product, when the caller knows one.
    """
    g = TSeries.t_minus_theta(f.field) ** pole_order * f
    if tail_growth is not None:
        g = g.with_tail(*tail_growth)
    return [g.hyperderive(j).eval_at_theta() for j in range(terms)]


def series_from_rows(field: FieldParams, rows: Iterable[LaurentU], tail=(NINF, 0.0)) -> TSeries:
    return TSeries.from_coeffs(field, list(rows), kind="series", tail=tail)


__all__ = [
    "TSeries",
    "hyperderive",
    "twist",
    "eval_at_theta",
    "eval_at_zeta",
    "recenter_at_theta",
    "prec_to_json",
    "series_from_rows",
    "_as_prec",
]
