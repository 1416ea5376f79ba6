import pytest

from carlitz_prolong.base_arith import FieldParams
from carlitz_prolong.errors import ShapeMismatch
from carlitz_prolong.laurent_u import LaurentU
from carlitz_prolong.motives import (
    DualMotiveDesc,
    MotiveDesc,
    TModuleDesc,
    Trivialization,
    carlitz_motive,
    carlitz_psi,
    carlitz_tmodule,
    carlitz_upsilon,
    dual_carlitz_motive,
    is_nilpotent_shift,
    prolong_dual,
    prolong_motive,
    prolong_tmodule,
    prolong_trivialization,
    purity_prolong_check,
    transpose_duality_check,
    verify_trivialization,
)
from carlitz_prolong.rho_map import BlockMat, block_structure_check, rho
from carlitz_prolong.special_fn import omega_big_power, omega_small
from carlitz_prolong.t_series import TSeries

F2 = FieldParams.create(2)
F3 = FieldParams.create(3)


def test_prolong_motive_shapes():
    M = carlitz_motive(F3)
    assert prolong_motive(M, 0).theta == M.theta
    P = prolong_motive(M, 1)
    tt = TSeries.t_minus_theta(F3)
    assert P.rank == 2
    assert P.theta == BlockMat(F3, [[tt, TSeries.constant(F3, 1)], [TSeries.zero(F3), tt]])
    M2 = carlitz_motive(F3, 2)
    for k in range(4):
        assert prolong_motive(M2, k).rank == (k + 1) * M2.rank


@pytest.mark.parametrize("n,k", [(1, 2), (2, 1), (3, 3)])
def test_prolong_dual(n, k):
    D = prolong_dual(dual_carlitz_motive(F3, n), k)
    tt = TSeries.t_minus_theta(F3)
    assert D.theta_tilde == rho(tt, k) ** n
    assert D.theta_tilde.det() == tt ** (n * (k + 1))
    assert D.ell == n * (k + 1)
    assert block_structure_check(D.theta_tilde, 1, k, 0)["pass"]


def test_prolong_of_prolong_structure():
    D = prolong_dual(dual_carlitz_motive(F3, 2), 1)
    DD = prolong_dual(D, 2)
    assert block_structure_check(DD.theta_tilde, 2, 2, 1)["pass"]


@pytest.mark.parametrize("k", range(4))
def test_carlitz_tmodule_prolongation(k):
    E = prolong_tmodule(carlitz_tmodule(F3), k)
    th = LaurentU.theta(F3)
    for i in range(k + 1):
        for j in range(k + 1):
            a0, a1 = E.A[0][i, j], E.A[1][i, j]
            assert a0 == (th if i == j else -1 if i == j + 1 else 0)
            assert a1 == (1 if i == j else 0)
    assert is_nilpotent_shift(E.A[0])
    assert transpose_duality_check(carlitz_tmodule(F3), k)


def test_tensor_tmodule_prolongation():
    E = carlitz_tmodule(F2, 3)
    for k in range(3):
        P = prolong_tmodule(E, k)
        assert P.dim == 3 * (k + 1)
        assert is_nilpotent_shift(P.A[0])
        assert transpose_duality_check(E, k)
    assert prolong_tmodule(E, 0).A[0] == E.A[0]


def test_tmodule_rejects_non_nilpotent():
    bad = BlockMat(F3, [[LaurentU.constant(F3, 1)]])
    with pytest.raises(ValueError):
        TModuleDesc(1, (bad,))


@pytest.mark.parametrize("fix", ["cfg2", "cfg3"])
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_prolonged_trivializations(fix, n, k, request):
    cfg = request.getfixturevalue(fix)
    F = cfg.field
    a = verify_trivialization(prolong_motive(carlitz_motive(F, n), k),
                              prolong_trivialization(carlitz_upsilon(cfg, n), k))
    b = verify_trivialization(prolong_dual(dual_carlitz_motive(F, n), k),
                              prolong_trivialization(carlitz_psi(cfg, n), k))
    assert a["pass"] and b["pass"]
    assert min(a["precision"], b["precision"]) >= cfg.N


def test_upsilon_is_inverse_of_omega(cfg3):
    from carlitz_prolong.rho_map import residual_report

    ups = carlitz_upsilon(cfg3, 1).matrix[0, 0]
    assert residual_report(ups * omega_small(cfg3) - 1)["pass"]


def test_perturbed_psi_fails(cfg3):
    F = cfg3.field
    psi = omega_big_power(cfg3, 1)
    bump = TSeries.from_coeffs(F, [0, LaurentU.monomial(F, 3 * 5)])
    bad = Trivialization(BlockMat(F, [[psi + bump]]), "sigma")
    rep = verify_trivialization(dual_carlitz_motive(F), bad)
    assert not rep["pass"]
    assert isinstance(rep["residual_valuation"], int)


def test_trivialization_shape_errors(cfg3):
    F = cfg3.field
    with pytest.raises(ShapeMismatch):
        verify_trivialization(carlitz_motive(F), carlitz_psi(cfg3))
    with pytest.raises(ShapeMismatch):
        verify_trivialization(prolong_motive(carlitz_motive(F), 1), carlitz_upsilon(cfg3))
    with pytest.raises(ShapeMismatch):
        MotiveDesc(2, BlockMat.identity(F, 1))
    with pytest.raises(ShapeMismatch):
        DualMotiveDesc(3, BlockMat.identity(F, 2))


def test_prolong_trivialization_k0(cfg2):
    T = carlitz_psi(cfg2, 2)
    assert prolong_trivialization(T, 0).matrix == T.matrix


def _s_series(F, coeffs):
    return TSeries.from_coeffs(F, coeffs)


def test_purity_examples():
    one = BlockMat.identity(F3, 1)
    rep = purity_prolong_check(one, 1, 1, 2)
    assert rep["pass"] and rep["min_valuation"] == 0
    A = BlockMat(F3, [[_s_series(F3, [1, 2, LaurentU.theta(F3)]), _s_series(F3, [0, 1])],
                      [_s_series(F3, [2, 0, 1]), _s_series(F3, [1])]])
    assert purity_prolong_check(A, 3, 1, 2)["pass"]
    assert purity_prolong_check(A, 0, 1, 3)["pass"]


def test_purity_blocks_match_binomial_formula():
    # t^-u d^n(t^u s^j) = C(u - j, n) s^(j + n), against a direct expansion in t
    from carlitz_prolong.motives import _twisted_hyperderivative

    u, p = 2, 3
    for j in range(5):
        f = TSeries.monomial(F3, j)
        for n in range(4):
            off, g = _twisted_hyperderivative(f, u, n)
            # exponent of t in t^u s^j is u - j; falling factorial / n!
            num = 1
            for i in range(n):
                num *= (u - j) - i
            import math

            c = (num // math.factorial(n)) % p
            got = g.coeff(j).coeff(0) if g.coeff(j).valuation() == 0 else 0
            assert off == n and (int(got.coeffs[0]) if got else 0) == c


def test_purity_detects_singular_lattice_matrix():
    z = _s_series(F3, [0, 1])
    A = BlockMat(F3, [[z]])
    rep = purity_prolong_check(A, 1, 1, 1)
    assert not rep["invertible"] and not rep["pass"]
