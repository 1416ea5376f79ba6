import pytest
from hypothesis import given, strategies as st

from carlitz_prolong.base_arith import FieldParams
from carlitz_prolong.errors import InversionOfZero, ShapeMismatch
from carlitz_prolong.laurent_u import LaurentU
from carlitz_prolong.rho_map import BlockMat, block_structure_check, residual_report, rho, rho_mat
from carlitz_prolong.t_series import TSeries

from strategies import FIELDS, fid, polys, series

F3 = FieldParams.create(3)


def mats(F, n=2, gen=polys):
    return st.lists(gen(F), min_size=n * n, max_size=n * n).map(
        lambda xs: BlockMat(F, [xs[i * n : (i + 1) * n] for i in range(n)])
    )


def test_rho_examples():
    tt = TSeries.t_minus_theta(F3)
    f = TSeries.from_coeffs(F3, [1, 2, 1])
    assert rho(f, 0) == BlockMat(F3, [[f]])
    one, zero = TSeries.constant(F3, 1), TSeries.zero(F3)
    assert rho(tt, 1) == BlockMat(F3, [[tt, one], [zero, tt]])


def test_rho_entries_are_hyperderivatives():
    f = TSeries.from_coeffs(F3, [1, LaurentU.theta(F3), 2, 0, 1])
    R = rho(f, 4)
    for i in range(5):
        for j in range(5):
            expected = f.hyperderive(j - i) if j >= i else TSeries.zero(F3)
            assert R[i, j] == expected


@pytest.mark.parametrize("F", FIELDS, ids=fid)
@given(data=st.data(), k=st.integers(0, 4))
def test_rho_is_multiplicative(F, data, k):
    f, g = data.draw(polys(F)), data.draw(polys(F))
    assert rho(f * g, k) == rho(f, k) @ rho(g, k)
    assert rho(f + g, k) == rho(f, k) + rho(g, k)


@pytest.mark.parametrize("F", [FIELDS[0], FIELDS[1]], ids=fid)
@given(data=st.data(), k=st.integers(0, 3))
def test_rho_mat_is_multiplicative(F, data, k):
    A, B = data.draw(mats(F)), data.draw(mats(F))
    assert rho_mat(A @ B, k) == rho_mat(A, k) @ rho_mat(B, k)


@pytest.mark.parametrize("F", FIELDS, ids=fid)
@given(data=st.data(), k=st.integers(0, 3))
def test_rho_commutes_with_twists(F, data, k):
    A = data.draw(mats(F, gen=series))
    assert rho_mat(A.twist(1), k) == rho_mat(A, k).twist(1)
    B = A.twist(1)
    assert rho_mat(B.twist(-1), k) == rho_mat(B, k).twist(-1)


def test_rho_mat_consistency():
    f = TSeries.from_coeffs(F3, [2, 1, LaurentU.u(F3)])
    A = BlockMat(F3, [[f]])
    assert rho_mat(A, 0) == A
    for k in range(4):
        assert rho_mat(A, k) == rho(f, k)
        I = BlockMat.identity(F3, 2)
        assert rho_mat(I, k) == BlockMat.identity(F3, 2 * (k + 1))


@given(data=st.data(), k=st.integers(0, 3))
def test_scalar_consistency(data, k):
    c = data.draw(polys(F3, max_deg=2))
    A = data.draw(mats(F3))
    cA = A.map(lambda x: x * c)
    scal = rho_mat(BlockMat.scalar(c, 2), k)
    assert rho_mat(cA, k) == scal @ rho_mat(A, k)


@given(data=st.data(), k=st.integers(0, 4))
def test_det_of_rho_is_power(data, k):
    f = data.draw(polys(F3))
    assert rho(f, k).det() == f ** (k + 1)


@given(data=st.data())
def test_det_matches_expansion(data):
    A = data.draw(mats(F3, n=3, gen=lambda F: polys(F, max_deg=2)))
    r = A.rows
    expansion = (
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    )
    assert A.det() == expansion


@given(data=st.data())
def test_inverse(data):
    A = data.draw(mats(F3, gen=lambda F: series(F, rows=5)))
    try:
        Ai = A.inverse()
    except InversionOfZero:
        return
    I = BlockMat.identity(F3, 2)
    assert residual_report(A @ Ai - I)["pass"]


def test_inverse_needs_unit_pivot():
    z = TSeries.from_coeffs(F3, [0, 1], kind="series")
    with pytest.raises(InversionOfZero):
        BlockMat(F3, [[z, z], [z, z]]).inverse()


@pytest.mark.parametrize("k,l", [(1, 0), (3, 1), (2, 2), (3, 0), (3, 3)])
def test_block_structure(k, l):
    f = TSeries.from_coeffs(F3, [1, 2, LaurentU.theta(F3), 1])
    g = TSeries.from_coeffs(F3, [0, LaurentU.u(F3), 1, 2, 2])
    Th = BlockMat(F3, [[f, g], [g * g, f]])
    A = rho_mat(Th, k)
    rep = block_structure_check(A, 2, k, l)
    assert rep == {"sub": True, "quotient": True, "pass": True}
    if k == 1 and l == 0:
        assert A.block(0, 0, 2) == Th and A.block(1, 1, 2) == Th
    if k == l:
        assert A.submatrix(0, 0, A.size) == A


def test_block_structure_detects_tampering():
    f = TSeries.from_coeffs(F3, [1, 2, 1, 1])
    A = rho(f, 2)
    A.rows[2][2] = f + 1
    assert not block_structure_check(A, 1, 2, 0)["quotient"]
    with pytest.raises(ShapeMismatch):
        block_structure_check(A, 2, 2, 0)


def test_json_roundtrip():
    f = TSeries.from_coeffs(F3, [1, 2, LaurentU.u(F3)])
    A = rho(f, 2)
    assert BlockMat.from_json(F3, A.to_json()) == A
