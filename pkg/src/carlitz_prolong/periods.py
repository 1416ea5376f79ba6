"""Period-lattice coordinates of the n-th Carlitz tensor power.

z_i = (-1)^n * d^(n-i)(Omega^-n) evaluated at t = theta, where
Omega^-n = (t - theta)^n omega^n.  Two independent routes are kept:
inverting Omega^n, and multiplying out the pole of omega^n.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .base_arith import FieldParams
from .errors import ShapeMismatch
from .laurent_u import INF, LaurentU, prec_to_json
from .rho_map import BlockMat, residual_report, rho
from .special_fn import SpecialFnConfig, omega_big_power, omega_small_power, pi_tilde
from .t_series import TSeries, recenter_at_theta


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _pval(n: int, p: int) -> int:
    s = 0
    while n % p == 0:
        n //= p
        s += 1
    return s


def negligible(x: LaurentU, cfg: SpecialFnConfig, n: int) -> bool:
    """Counts as zero: every known coefficient sits above N - (q-1) n."""
    return x.valuation() > cfg.N - (cfg.q - 1) * n


@dataclass
class PeriodVector:
    n: int
    z: list[LaurentU]
    normalized: bool
    alternate: list[LaurentU] = dc_field(default_factory=list)
    agreement: float = 1.0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "z": [x.to_json() for x in self.z],
            "normalized": self.normalized,
            "route_agreement": round(self.agreement, 6),
        }


def _by_inversion(n: int, cfg: SpecialFnConfig) -> list[LaurentU]:
    g = omega_big_power(cfg, -n)
    sg = _sign(n)
    return [g.hyperderive(n - i).eval_at_theta() * sg for i in range(1, n + 1)]


def _by_recentering(n: int, cfg: SpecialFnConfig) -> list[LaurentU]:
    q = cfg.q
    c = recenter_at_theta(omega_small_power(cfg, n), n, n,
                          tail_growth=(-float(q * n), float(q * (q - 1))))
    # c[j] is the coefficient of (t - theta)^(j - n); z_i pairs with j = n - i
    sg = _sign(n)
    return [c[n - i] * sg for i in range(1, n + 1)]


def route_agreement(a: list[LaurentU], b: list[LaurentU]) -> float:
    """Fraction of tracked digits (past the leading term) on which two routes agree."""
    worst = 1.0
    for x, y in zip(a, b):
        top = max(x.prec, y.prec)
        common = min(x.prec, y.prec)
        diff = (x - y).valuation()
        agreed = min(diff, common)
        ref = min(x.valuation(), y.valuation())
        if ref == INF:
            ref = 0.0
        if top == INF:
            frac = 1.0 if agreed == INF else 0.0
        else:
            frac = max(0.0, (agreed - ref) / (top - ref)) if top > ref else 1.0
        worst = min(worst, frac)
    return worst


def period_coordinates(n: int, cfg: SpecialFnConfig) -> PeriodVector:
    """(z_1, ..., z_n), normalised by z_n = pi^n, with both routes compared."""
    if n < 1:
        raise ValueError("n must be positive")
    z = _by_inversion(n, cfg)
    alt = _by_recentering(n, cfg)
    norm = z[-1] * (pi_tilde(cfg) ** n).inverse() - 1
    return PeriodVector(n, z, norm.is_zero(), alt, route_agreement(z, alt))


def normalization_report(pv: PeriodVector, cfg: SpecialFnConfig) -> dict:
    r = pv.z[-1] * (pi_tilde(cfg) ** pv.n).inverse() - 1
    return {"residual_valuation": prec_to_json(r.valuation()), "precision": prec_to_json(r.prec),
            "pass": r.is_zero()}


def _toeplitz(field: FieldParams, first_row: list[LaurentU]) -> BlockMat:
    n = len(first_row)
    zero = LaurentU.zero(field)
    return BlockMat(field, [[first_row[j - i] if j >= i else zero for j in range(n)]
                            for i in range(n)])


def toeplitz_inverse_identity(n: int, cfg: SpecialFnConfig,
                              z: list[LaurentU] | None = None) -> dict:
    """Compare (rho_[n-1](Omega^n) at theta)^-1 with (-1)^n Toeplitz(z_n, ..., z_1)."""
    F = cfg.field
    if z is None:
        z = period_coordinates(n, cfg).z
    if len(z) != n:
        raise ShapeMismatch("need exactly n coordinates")
    A = rho(omega_big_power(cfg, n), n - 1).eval_at_theta()
    lhs = A.inverse()
    sg = _sign(n)
    rhs = _toeplitz(F, [x * sg for x in reversed(z)])
    return residual_report(lhs - rhs)


def vanishing_pattern(n: int, cfg: SpecialFnConfig) -> dict:
    """z_i vanish off multiples of p^s and are p^s-th powers of the n/p^s coordinates on them."""
    p = cfg.field.p
    s = _pval(n, p)
    ps = p**s
    z = period_coordinates(n, cfg).z
    zero_ok, nonzero_ok = [], []
    for i in range(1, n + 1):
        if i % ps:
            zero_ok.append(negligible(z[i - 1], cfg, n))
        else:
            nonzero_ok.append(not negligible(z[i - 1], cfg, n))
    powers = []
    if s:
        base = period_coordinates(n // ps, cfg).z
        for m in range(1, n // ps + 1):
            d = z[ps * m - 1] - base[m - 1] ** ps
            powers.append(d.is_zero())
    ok = all(zero_ok) and all(nonzero_ok) and all(powers)
    return {
        "n": n,
        "p_power": ps,
        "zeros": all(zero_ok),
        "nonzeros": all(nonzero_ok),
        "powers": all(powers),
        "valuations": [prec_to_json(x.valuation()) for x in z],
        "pass": ok,
    }


def frobenius_power_lemma_check(f: TSeries, n: int, k: int, terms: int = 16) -> dict:
    """rho_[k](f) = rho_[k](f^(p^s))^a rho_[k](f^n)^b with a p^s + b n = 1 and p^s > k."""
    p = f.field.p
    if n < 1 or n % p == 0:
        raise ValueError("n must be positive and prime to p")
    s = 0
    while p**s <= k:
        s += 1
    ps = p**s
    a, b = _bezout(ps, n)
    fp = f**ps
    Rp = rho(fp, k)
    scalar = all(Rp[i, j].is_zero() for i in range(k + 1) for j in range(k + 1) if i != j)

    def mpow(M: BlockMat, e: int) -> BlockMat:
        if e >= 0:
            return M**e
        t = None if not M[0, 0].is_polynomial else terms
        return M.inverse(terms=t) ** (-e)

    rhs = mpow(Rp, a) @ mpow(rho(f**n, k), b)
    lhs = rho(f, k)
    report = residual_report(lhs - rhs)
    report.update({"s": s, "a": a, "b": b, "scalar": scalar, "pass": report["pass"] and scalar})
    return report


def _bezout(x: int, y: int) -> tuple[int, int]:
    # extended Euclid: a x + b y = 1
    r0, r1, a0, a1, b0, b1 = x, y, 1, 0, 0, 1
    while r1:
        qt = r0 // r1
        r0, r1 = r1, r0 - qt * r1
        a0, a1 = a1, a0 - qt * a1
        b0, b1 = b1, b0 - qt * b1
    if r0 != 1:
        raise ValueError("arguments are not coprime")
    return a0, b0


__all__ = [
    "PeriodVector", "period_coordinates", "toeplitz_inverse_identity", "vanishing_pattern",
    "frobenius_power_lemma_check", "route_agreement", "negligible", "normalization_report",
]
