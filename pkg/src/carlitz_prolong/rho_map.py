"""Square matrices over TSeries (or LaurentU) and the jet map rho_[k].

rho_[k](f) is the (k+1)x(k+1) upper-triangular Toeplitz matrix whose
(i, j) entry is the hyperderivative d^(j-i) f; on matrices it acts blockwise.
"""
from __future__ import annotations

from typing import Callable, Sequence

from .base_arith import FieldParams
from .errors import InversionOfZero, ShapeMismatch
from .laurent_u import INF, LaurentU, prec_to_json
from .t_series import TSeries

Entry = TSeries | LaurentU


def _twist(x: Entry, k: int) -> Entry:
    return x.twist(k) if isinstance(x, TSeries) else x.coeff_twist(k)


def _is_exact_zero(x: Entry) -> bool:
    return x.is_exact_zero()


class BlockMat:
    """Dense square matrix; entries are all TSeries or all LaurentU."""

    __slots__ = ("field", "rows")
    __hash__ = None

    def __init__(self, field: FieldParams, rows: Sequence[Sequence[Entry]]):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ShapeMismatch("matrix must be square")
        self.field = field
        self.rows = rows

    # -- constructors ------------------------------------------------------
    @classmethod
    def identity(cls, field: FieldParams, n: int, entry=TSeries) -> BlockMat:
        one, zero = entry.constant(field, 1), entry.zero(field)
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: FieldParams, n: int, entry=TSeries) -> BlockMat:
        zero = entry.zero(field)
        return cls(field, [[zero] * n for _ in range(n)])

    @classmethod
    def scalar(cls, x: Entry, n: int) -> BlockMat:
        zero = x.zero_like()
        return cls(x.field, [[x if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[BlockMat]]) -> BlockMat:
        field = blocks[0][0].field
        r = blocks[0][0].size
        rows = []
        for brow in blocks:
            if any(b.size != r for b in brow):
                raise ShapeMismatch("blocks must share one size")
            for i in range(r):
                rows.append([x for b in brow for x in b.rows[i]])
        return cls(field, rows)

    # -- inspection --------------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def block(self, i: int, j: int, r: int) -> BlockMat:
        return self.submatrix(i * r, j * r, r)

    def submatrix(self, i0: int, j0: int, n: int) -> BlockMat:
        if i0 + n > self.size or j0 + n > self.size:
            raise ShapeMismatch("submatrix out of range")
        return BlockMat(self.field, [r[j0 : j0 + n] for r in self.rows[i0 : i0 + n]])

    def map(self, fn: Callable[[Entry], Entry]) -> BlockMat:
        return BlockMat(self.field, [[fn(x) for x in r] for r in self.rows])

    def entries(self):
        return (x for r in self.rows for x in r)

    def is_upper_triangular(self) -> bool:
        return all(_is_exact_zero(self.rows[i][j]) for i in range(self.size) for j in range(i))

    def is_lower_triangular(self) -> bool:
        return self.transpose().is_upper_triangular()

    def transpose(self) -> BlockMat:
        return BlockMat(self.field, [list(c) for c in zip(*self.rows)])

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries())

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: BlockMat) -> None:
        if not isinstance(other, BlockMat) or other.size != self.size:
            raise ShapeMismatch("matrix sizes differ")

    def __add__(self, other: BlockMat) -> BlockMat:
        self._check(other)
        return BlockMat(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: BlockMat) -> BlockMat:
        self._check(other)
        return BlockMat(self.field, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> BlockMat:
        return self.map(lambda x: -x)

    def __matmul__(self, other: BlockMat) -> BlockMat:
        self._check(other)
        n = self.size
        cols = other.transpose().rows
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = None
                for a, b in zip(r, c):
                    if _is_exact_zero(a) or _is_exact_zero(b):
                        continue
                    acc = a * b if acc is None else acc + a * b
                row.append(acc if acc is not None else r[0].zero_like())
            out.append(row)
        return BlockMat(self.field, out) if n else self

    def scale(self, c) -> BlockMat:
        return self.map(lambda x: x * c)

    def __pow__(self, e: int) -> BlockMat:
        if e < 0:
            return self.inverse() ** (-e)
        kind = type(self.rows[0][0]) if self.size else TSeries
        result = BlockMat.identity(self.field, self.size, kind)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def twist(self, k: int) -> BlockMat:
        return self.map(lambda x: _twist(x, k))

    def hyperderive(self, n: int) -> BlockMat:
        return self.map(lambda x: x.hyperderive(n))

    def eval_at_theta(self) -> BlockMat:
        return self.map(lambda x: x.eval_at_theta())

    def eval_at_zeta(self, zeta) -> BlockMat:
        return self.map(lambda x: x.eval_at_zeta(zeta))

    def truncate_t(self, n: int) -> BlockMat:
        return self.map(lambda x: x.truncate_t(n))

    # -- inversion and determinant ----------------------------------------
    def inverse(self, terms: int | None = None, prec: float | None = None) -> BlockMat:
        """Gauss-Jordan elimination; every pivot must be a unit.

        ``terms``/``prec`` are forwarded to the entry inverses (needed for
        polynomial pivots and exact non-monomial constants).
        """
        n = self.size
        kind = type(self.rows[0][0])
        a = [list(r) for r in self.rows]
        b = BlockMat.identity(self.field, n, kind).rows

        def inv(x):
            if isinstance(x, TSeries):
                t = terms
                if x.is_polynomial and x.tprec == 1:
                    t = None
                elif t is None and x.is_polynomial:
                    t = _default_terms(a)
                return x.inverse(t, prec)
            return x.inverse(prec)

        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c].is_unit()), None)
            if piv is None:
                raise InversionOfZero(f"no unit pivot in column {c}")
            a[c], a[piv] = a[piv], a[c]
            b[c], b[piv] = b[piv], b[c]
            p_inv = inv(a[c][c])
            a[c] = [x * p_inv for x in a[c]]
            b[c] = [x * p_inv for x in b[c]]
            for r in range(n):
                if r == c or _is_exact_zero(a[r][c]):
                    continue
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
                b[r] = [x - f * y for x, y in zip(b[r], b[c])]
        return BlockMat(self.field, b)

    def det(self) -> Entry:
        """Determinant: diagonal product when triangular, else Berkowitz (division-free)."""
        n = self.size
        if n == 0:
            return TSeries.constant(self.field, 1)
        if self.is_upper_triangular() or self.is_lower_triangular():
            d = self.rows[0][0]
            for i in range(1, n):
                d = d * self.rows[i][i]
            return d
        return _berkowitz(self.rows)

    # -- comparison / io ---------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, BlockMat):
            return NotImplemented
        return other.size == self.size and (self - other).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __repr__(self):
        return f"BlockMat({self.size}x{self.size})"

    def to_json(self) -> dict:
        return {"size": self.size, "entries": [[x.to_json() for x in r] for r in self.rows]}

    @classmethod
    def from_json(cls, field: FieldParams, obj: dict) -> BlockMat:
        def load(e):
            return TSeries.from_json(field, e) if "tprec" in e else LaurentU.from_json(field, e)

        return cls(field, [[load(e) for e in r] for r in obj["entries"]])


def _default_terms(rows) -> int:
    m = [x.tprec for r in rows for x in r if isinstance(x, TSeries) and not x.is_polynomial]
    if not m:
        raise ValueError("inverting a polynomial matrix needs a number of t-terms")
    return min(m)


def _berkowitz(a: list[list[Entry]]) -> Entry:
    # characteristic polynomial coefficients via Toeplitz products; det = (-1)^n c_n
    n = len(a)
    zero = a[0][0].zero_like()
    one = a[0][0].one_like()
    vect = [one, -a[0][0]]
    for r in range(1, n):
        R = [a[r][j] for j in range(r)]
        C = [a[i][r] for i in range(r)]
        A = [row[:r] for row in a[:r]]
        # Q = [1, -a_rr, -R C, -R A C, ..., -R A^(r-1) C]
        q = [one, -a[r][r]]
        v = C
        for _ in range(r):
            s = zero
            for x, y in zip(R, v):
                s = s + x * y
            q.append(-s)
            v = [sum((A[i][j] * v[j] for j in range(r)), zero) for i in range(r)]
        new = []
        for i in range(len(vect) + 1):
            s = zero
            for j in range(max(0, i - len(q) + 1), min(i, len(vect) - 1) + 1):
                s = s + q[i - j] * vect[j]
            new.append(s)
        vect = new
    d = vect[n]
    return d if n % 2 == 0 else -d


def rho(f: TSeries, k: int) -> BlockMat:
    """(k+1)x(k+1) upper-triangular Toeplitz matrix of hyperderivatives of f."""
    if isinstance(f, LaurentU):
        f = TSeries.constant(f.field, f)
    ders = [f.hyperderive(j) for j in range(k + 1)]
    zero = TSeries.zero(f.field)
    return BlockMat(f.field, [[ders[j - i] if j >= i else zero for j in range(k + 1)] for i in range(k + 1)])


def rho_mat(theta: BlockMat, k: int) -> BlockMat:
    """Block upper-triangular Toeplitz matrix with blocks d^(j-i) Theta."""
    ders = [theta.hyperderive(j) for j in range(k + 1)]
    zero = BlockMat.zeros(theta.field, theta.size)
    return BlockMat.from_blocks(
        [[ders[j - i] if j >= i else zero for j in range(k + 1)] for i in range(k + 1)]
    )


def block_structure_check(A: BlockMat, r: int, k: int, l: int) -> dict:
    """Sub-object rho_[l] in the top-left corner, quotient rho_[k-l-1] bottom-right."""
    if r <= 0 or A.size != r * (k + 1) or not 0 <= l <= k:
        raise ShapeMismatch(f"expected size r(k+1) = {r * (k + 1)} with 0 <= l <= k")
    theta = A.submatrix(0, 0, r)
    sub = A.submatrix(0, 0, r * (l + 1)) == rho_mat(theta, l)
    m = k - l
    if m == 0:
        quotient = True
    else:
        quotient = A.submatrix(r * (l + 1), r * (l + 1), r * m) == rho_mat(theta, m - 1)
    return {"sub": bool(sub), "quotient": bool(quotient), "pass": bool(sub and quotient)}


def residual_report(R: BlockMat | Entry) -> dict:
    """Smallest u-valuation among nonzero coefficients of R, and the precision it is known to."""
    entries = list(R.entries()) if isinstance(R, BlockMat) else [R]
    val, prec = INF, INF
    for x in entries:
        if isinstance(x, TSeries):
            nz = x.nonzero_rows()
            if nz.any():
                val = min(val, float(x.vlow()[nz].min()))
            prec = min(prec, x.min_prec())
        else:
            val = min(val, x.valuation())
            prec = min(prec, x.prec)
    return {
        "residual_valuation": prec_to_json(val),
        "precision": prec_to_json(prec) if prec > -INF else None,
        "pass": val == INF,
    }


__all__ = ["BlockMat", "rho", "rho_mat", "block_structure_check", "residual_report"]
