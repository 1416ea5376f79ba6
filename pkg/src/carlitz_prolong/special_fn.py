"""Omega, omega, the Carlitz period, beta and xi_n to a prescribed precision.

With u = 1/lambda and theta = -u^-(q-1), every product factor becomes a
polynomial in u with F_p coefficients:

    Omega   = u^q  * prod_{j>=1} (1 + t u^((q-1) q^j))
    pi      = -u^-q * prod_{j>=1} (1 - u^((q-1)(q^j - 1)))^-1
    omega   = 1 / ((t - theta) Omega)

so Omega is assembled by shift-and-add on its coefficient array.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .base_arith import FieldParams, prime_power
from .errors import ConfigError
from .laurent_u import INF, LaurentU
from .t_series import TSeries

_BIG = float(2**62)


def _smallest_exponent(q: int, target: float) -> int:
    j = 0
    while q**j < target:
        j += 1
    return j


@dataclass(frozen=True)
class SpecialFnConfig:
    """Truncation parameters.

    N  target u-precision of reported quantities
    M  number of stored t-coefficients
    J  last product factor kept
    P  working u-precision of the constructed series
    """

    q: int
    d: int
    N: int
    M: int
    J: int
    P: int

    def __post_init__(self):
        try:
            prime_power(self.q)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.d < 1 or self.N < 1 or self.M < 2 or self.J < 1 or self.P < 1:
            raise ConfigError("d, N, J, P must be positive and M >= 2")

    @classmethod
    def create(cls, q: int, d: int = 1, N: int = 96, M: int | None = None,
               J: int | None = None, P: int | None = None,
               k_max: int = 3, n_max: int = 6) -> SpecialFnConfig:
        try:
            prime_power(q)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if N < 1 or d < 1:
            raise ConfigError("N and d must be positive")
        q1 = q - 1
        if M is None:
            M = max(
                2 * (k_max + n_max) + 8,
                # tail of (t-theta)^n omega^n at theta decays like (q-1)^2 per row
                math.ceil((N + q * n_max + 8) / q1**2) + k_max + n_max,
                # tail of d^n omega at a root of unity decays like (q-1) per row
                math.ceil((N + q**d + 8) / q1) + n_max,
            )
        if P is None:
            P = max(q * (N + q), N + (M + n_max + 2) * q1 + q * (n_max + 1)) + 16
        if J is None:
            J = max(
                _smallest_exponent(q, M + N),
                next(j for j in range(1, 64) if q + q1 * q ** (j + 1) >= P),
            )
        return cls(q, d, N, M, J, P)

    @property
    def field(self) -> FieldParams:
        return FieldParams.create(self.q, self.d)

    def replace(self, **kw) -> SpecialFnConfig:
        args = {k: getattr(self, k) for k in ("q", "d", "N", "M", "J", "P")}
        args.update(kw)
        return SpecialFnConfig(**args)

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in ("q", "d", "N", "M", "J", "P")}

    @property
    def omega_prec(self) -> int:
        """u-precision of Omega's coefficients: capped by the first dropped factor."""
        q = self.q
        return int(min(self.P, q + (q - 1) * q ** (self.J + 1)))


def _omega_tail(q: int, M: int) -> tuple[float, float]:
    # v(Omega_m) >= q^(m+1), which lies above its tangent-like chord from m = M on
    a = min(float(q) ** (M + 1), _BIG) - q * (q - 1) * M
    return (a, float(q * (q - 1)))


@functools.lru_cache(maxsize=32)
def omega_big(cfg: SpecialFnConfig) -> TSeries:
    """Omega as a series with M stored coefficients and a certified tail."""
    F = cfg.field
    q, M = cfg.q, cfg.M
    P = cfg.omega_prec
    width = P - q
    # rows m, column c  <->  coefficient of t^m u^(q + c)
    arr = np.zeros((M, width), dtype=np.int64)
    arr[0, 0] = 1
    for j in range(1, cfg.J + 1):
        s = (q - 1) * q**j
        if s >= width:
            break
        arr[1:, s:] = (arr[1:, s:] + arr[:-1, :-s]) % F.p
    data = np.zeros((M, width, F.D), dtype=np.int64)
    data[..., 0] = arr
    prec = np.array([min(float(q) ** (m + 1), _BIG) if q ** (m + 1) >= P else P
                     for m in range(M)], dtype=np.float64)
    prec[0] = INF  # the constant term is exactly u^q
    return TSeries(F, q, data, prec, _omega_tail(q, M))


@functools.lru_cache(maxsize=32)
def omega_small(cfg: SpecialFnConfig) -> TSeries:
    """omega = ((t - theta) Omega)^-1, certified by v(omega_m) >= (q-1) m - 1."""
    F = cfg.field
    g = TSeries.t_minus_theta(F) * omega_big(cfg)
    return g.inverse(cfg.M).with_tail(-1.0, float(cfg.q - 1))


@functools.lru_cache(maxsize=64)
def omega_big_power(cfg: SpecialFnConfig, n: int) -> TSeries:
    """Omega^n for any integer n; negative powers come from series inversion."""
    q = cfg.q
    if n == 0:
        return TSeries.constant(cfg.field, 1)
    if n > 0:
        base = omega_big(cfg)
        out = base if n == 1 else omega_big_power(cfg, n - 1) * base
        return out.with_tail(float(q * n), float(q * (q - 1)))
    # Omega^-n = ((t - theta) omega)^n: coefficients satisfy v >= -q n + q(q-1) m
    return omega_big_power(cfg, -n).inverse(cfg.M).with_tail(float(q * n), float(q * (q - 1)))


@functools.lru_cache(maxsize=64)
def omega_small_power(cfg: SpecialFnConfig, n: int) -> TSeries:
    if n < 0:
        raise ValueError("only nonnegative powers of omega are entire")
    if n == 0:
        return TSeries.constant(cfg.field, 1)
    base = omega_small(cfg)
    out = base if n == 1 else omega_small_power(cfg, n - 1) * base
    return out.with_tail(-float(n), float(cfg.q - 1))


@functools.lru_cache(maxsize=32)
def pi_tilde(cfg: SpecialFnConfig) -> LaurentU:
    """Carlitz period; relative precision limited by P and by the product cutoff."""
    F = cfg.field
    q = cfg.q
    rel = min(cfg.P, (q - 1) * (q ** (cfg.J + 1) - 1))
    poly = np.zeros(rel, dtype=np.int64)
    poly[0] = 1
    for j in range(1, cfg.J + 1):
        s = (q - 1) * (q**j - 1)
        if s >= rel:
            break
        poly[s:] = (poly[s:] - poly[:-s]) % F.p
    data = np.zeros((rel, F.D), dtype=np.int64)
    data[:, 0] = poly
    inv = LaurentU(F, 0, data, rel).inverse()
    return -inv.shift(-q)


def theta_power_twist(field: FieldParams, h: int) -> LaurentU:
    """theta^(q^h)."""
    return LaurentU.theta(field).coeff_twist(h)


@functools.lru_cache(maxsize=32)
def beta(field: FieldParams, d: int) -> TSeries:
    """prod_{h<d} (t - theta^(q^h)), an exact polynomial."""
    if d < 1:
        raise ValueError("d must be positive")
    out = TSeries.constant(field, 1)
    t = TSeries.t(field)
    for h in range(d):
        out = out * (t - theta_power_twist(field, h))
    return out


@functools.lru_cache(maxsize=64)
def xi(n: int, d: int, cfg: SpecialFnConfig) -> TSeries:
    """sum_{l=1}^{n} d^l(beta) d^(n-l)(omega)."""
    if n < 1:
        raise ValueError("n must be positive")
    F = cfg.field
    b = beta(F, d)
    w = omega_small(cfg)
    total = None
    for l in range(1, n + 1):
        bl = b.hyperderive(l)
        if bl.is_exact_zero():
            continue
        term = bl * w.hyperderive(n - l)
        total = term if total is None else total + term
    if total is None:
        return TSeries.zero(F)
    return total


__all__ = [
    "SpecialFnConfig", "omega_big", "omega_small", "omega_big_power",
    "omega_small_power", "pi_tilde", "beta", "xi", "theta_power_twist",
]
