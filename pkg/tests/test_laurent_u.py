import math

import pytest
from hypothesis import given, strategies as st

from carlitz_prolong.base_arith import FieldParams
from carlitz_prolong.errors import InversionOfZero, PrecisionLoss
from carlitz_prolong.laurent_u import INF, LaurentU

from strategies import FIELDS, laurent, fid

F4 = FieldParams.create(4)
F3 = FieldParams.create(3)


@pytest.mark.parametrize("F", FIELDS, ids=fid)
def test_theta_and_lambda(F):
    th, lam = LaurentU.theta(F), LaurentU.lam(F)
    q = F.q
    assert th.valuation() == -(q - 1)
    assert lam ** (q - 1) == -th
    assert th * th.inverse() == 1
    assert th.coeff_twist(1).valuation() == -q * (q - 1)
    # (lambda^q)^(q-1) = (-theta)^q
    assert lam.coeff_twist(1) ** (q - 1) == (-th).coeff_twist(1)
    assert lam.coeff_twist(1) == lam**q


def test_geometric_series():
    one_minus_u = LaurentU.from_coeffs(F3, 0, [1, -1])
    geo = LaurentU.from_coeffs(F3, 0, [1] * 50, prec=50)
    r = one_minus_u * geo
    assert r == 1 and r.prec == 50


def test_precision_rules():
    x = LaurentU.from_coeffs(F3, -2, [1, 1], prec=10)
    y = LaurentU.from_coeffs(F3, 3, [2], prec=20)
    assert (x + y).prec == 10
    assert (x * y).prec == min(10 + 3, 20 - 2)
    assert x.inverse().prec == 10 + 4
    assert x.inverse().valuation() == 2


def test_zero_and_inverse_errors():
    z = LaurentU.zero(F3, 12)
    assert z.valuation() == INF and z.is_zero() and not z.is_exact()
    with pytest.raises(InversionOfZero):
        z.inverse()
    with pytest.raises(ValueError):
        LaurentU.from_coeffs(F3, 0, [1, 1]).inverse()


def test_inverse_twist_rejects_non_powers():
    with pytest.raises(PrecisionLoss):
        LaurentU.u(F3).coeff_twist(-1)
    x = LaurentU.from_coeffs(F3, -3, [1, 0, 0, 2], prec=31)
    y = x.coeff_twist(-1)
    assert y.prec == math.ceil(31 / 3)
    assert y.coeff_twist(1) == x


@pytest.mark.parametrize("F", FIELDS, ids=fid)
@given(data=st.data())
def test_ring_axioms(F, data):
    x, y, z = (data.draw(laurent(F, exact=False)) for _ in range(3))
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@pytest.mark.parametrize("F", FIELDS, ids=fid)
@given(data=st.data())
def test_valuation_is_additive(F, data):
    x, y = data.draw(laurent(F)), data.draw(laurent(F))
    assert (x * y).valuation() == x.valuation() + y.valuation()


@pytest.mark.parametrize("F", FIELDS, ids=fid)
@given(data=st.data(), k=st.integers(1, 2))
def test_twist_is_a_ring_homomorphism(F, data, k):
    x, y = data.draw(laurent(F, exact=False)), data.draw(laurent(F, exact=False))
    assert (x * y).coeff_twist(k) == x.coeff_twist(k) * y.coeff_twist(k)
    assert (x + y).coeff_twist(k) == x.coeff_twist(k) + y.coeff_twist(k)
    assert x.coeff_twist(k).coeff_twist(-k) == x


@pytest.mark.parametrize("F", FIELDS, ids=fid)
@given(data=st.data())
def test_inverse_roundtrip(F, data):
    x = data.draw(laurent(F, exact=False))
    if x.is_zero():
        return
    assert x * x.inverse() == 1


@given(data=st.data())
def test_normalization_idempotent(data):
    x = data.draw(laurent(F4, exact=False))
    again = LaurentU(F4, x.lead, x.data, x.prec)
    assert again.lead == x.lead and (again.data == x.data).all() and again.prec == x.prec


@given(data=st.data())
def test_json_roundtrip(data):
    x = data.draw(laurent(F4, exact=False))
    y = LaurentU.from_json(F4, x.to_json())
    assert y == x and y.prec == x.prec
    obj = x.to_json()
    if x.prec != INF and not x.is_zero():
        assert len(obj["coeffs"]) == x.prec - x.lead
