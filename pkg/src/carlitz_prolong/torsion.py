"""Root relations for omega and its hyperderivatives at roots of unity."""
from __future__ import annotations

from .base_arith import FieldElem
from .errors import ConfigError
from .laurent_u import LaurentU
from .rho_map import residual_report
from .special_fn import SpecialFnConfig, beta, omega_small, xi


def _degree(zeta: FieldElem, cfg: SpecialFnConfig) -> int:
    if zeta.field != cfg.field:
        raise ConfigError("zeta must lie in the configured field F_{q^d}")
    if not zeta:
        raise ConfigError("zeta must be nonzero")
    return zeta.degree_over_fq()


def omega_at(zeta: FieldElem, n: int, cfg: SpecialFnConfig) -> LaurentU:
    """d^n(omega) evaluated at t = zeta."""
    return omega_small(cfg).hyperderive(n).eval_at_zeta(zeta)


def omega_at_zeta_relation(zeta: FieldElem, cfg: SpecialFnConfig, beta_shift: int = 0) -> dict:
    """omega(zeta)^(q^d - 1) - beta(zeta); ``beta_shift`` perturbs beta for negative controls."""
    d = _degree(zeta, cfg)
    Q = cfg.q**d
    b = beta(cfg.field, d).eval_at_zeta(zeta) + beta_shift
    r = omega_at(zeta, 0, cfg) ** (Q - 1) - b
    out = residual_report(r)
    out["degree"] = d
    return out


def hyper_omega_at_zeta_relation(zeta: FieldElem, n: int, cfg: SpecialFnConfig) -> dict:
    """X^(q^d) - beta(zeta) X - xi_n(zeta) at X = d^n(omega)(zeta)."""
    if n < 1:
        raise ValueError("n must be positive")
    d = _degree(zeta, cfg)
    Q = cfg.q**d
    x = omega_at(zeta, n, cfg)
    b = beta(cfg.field, d).eval_at_zeta(zeta)
    r = x**Q - b * x - xi(n, d, cfg).eval_at_zeta(zeta)
    out = residual_report(r)
    out["degree"] = d
    return out


def additivity_check(zeta: FieldElem, n1: int, n2: int, c, cfg: SpecialFnConfig) -> dict:
    """L(X) = X^(q^d) - beta(zeta) X satisfies L(x + c y) = L(x) + c L(y) for c in F_q."""
    F = cfg.field
    c = F.element(c)
    if not c.in_fq():
        raise ValueError("c must lie in F_q")
    d = _degree(zeta, cfg)
    Q = cfg.q**d
    b = beta(F, d).eval_at_zeta(zeta)

    def L(v: LaurentU) -> LaurentU:
        return v**Q - b * v

    x, y = omega_at(zeta, n1, cfg), omega_at(zeta, n2, cfg)
    cc = LaurentU.constant(F, c)
    return residual_report(L(x + cc * y) - L(x) - cc * L(y))


__all__ = ["omega_at", "omega_at_zeta_relation", "hyper_omega_at_zeta_relation", "additivity_check"]
