import pytest

from carlitz_prolong.errors import ConfigError
from carlitz_prolong.laurent_u import LaurentU
from carlitz_prolong.special_fn import beta, omega_small
from carlitz_prolong.torsion import (
    additivity_check,
    hyper_omega_at_zeta_relation,
    omega_at,
    omega_at_zeta_relation,
)


def _nonzero(F):
    return [z for z in F.elements() if z]


@pytest.mark.parametrize("fix", ["cfg2", "cfg3", "cfg4"])
def test_omega_root_relation(fix, request):
    cfg = request.getfixturevalue(fix)
    for z in _nonzero(cfg.field):
        rep = omega_at_zeta_relation(z, cfg)
        assert rep["pass"] and rep["precision"] >= 96


def test_q3_square_relation(cfg3):
    F = cfg3.field
    for z in _nonzero(F):
        w = omega_at(z, 0, cfg3)
        assert w * w == LaurentU.constant(F, z) - LaurentU.theta(F)


def test_degree_two_zeta(cfg4):
    z = cfg4.field.gen()
    rep = omega_at_zeta_relation(z, cfg4)
    assert rep["degree"] == 2 and rep["pass"]


@pytest.mark.parametrize("fix", ["cfg2", "cfg3", "cfg4"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_hyper_relation(fix, n, request):
    cfg = request.getfixturevalue(fix)
    for z in _nonzero(cfg.field):
        rep = hyper_omega_at_zeta_relation(z, n, cfg)
        assert rep["pass"] and rep["precision"] >= 96


def test_negative_control(cfg2):
    z = cfg2.field.one()
    rep = omega_at_zeta_relation(z, cfg2, beta_shift=1)
    assert not rep["pass"] and rep["residual_valuation"] == 0


def test_additivity(cfg3, cfg4):
    for cfg in (cfg3, cfg4):
        z = _nonzero(cfg.field)[-1]
        for c in range(cfg.q):
            assert additivity_check(z, 1, 2, c, cfg)["pass"]


def test_zero_zeta_rejected(cfg2):
    with pytest.raises(ConfigError):
        omega_at_zeta_relation(cfg2.field.zero(), cfg2)


def test_evaluation_by_horner_oracle(cfg3):
    # summing the stored coefficients directly agrees with eval_at_zeta
    F = cfg3.field
    w = omega_small(cfg3)
    for z in _nonzero(F):
        acc = LaurentU.zero(F)
        for m in range(w.tprec):
            acc = acc + w.coeff(m) * LaurentU.constant(F, z**m)
        assert acc == omega_at(z, 0, cfg3)
    assert beta(F, 1).eval_at_zeta(F(1)) == 1 - LaurentU.theta(F)
