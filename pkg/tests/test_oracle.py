import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pvqed import oracle
from pvqed.errors import DomainError
from pvqed.response import mt_response


@given(st.integers(-50, 50), st.floats(0.1, 10.0))
def test_matsubara_partner(k, beta):
    a = oracle.MatsubaraIndex(k, beta)
    assert a.partner().omega == pytest.approx(-a.omega)
    assert a.partner().partner() == a


def test_matsubara_domain():
    with pytest.raises(DomainError):
        oracle.MatsubaraIndex(1, 0.0)


@pytest.mark.parametrize("x", [0.1, 1.0, 3.0])
def test_tanh_partial_sum(x):
    K = 20000
    s = oracle.tanh_partial_sum(x, K)
    assert abs(s - x * math.tanh(x)) <= 2 * x * x / (math.pi**2 * K)


def test_tanh_domain():
    with pytest.raises(DomainError):
        oracle.tanh_partial_sum(1.0, 0)


def test_simpson():
    assert oracle.reference_quadrature(lambda x: x**3, 0, 2, 2) == pytest.approx(4.0, rel=1e-15)
    with pytest.raises(DomainError):
        oracle.reference_quadrature(lambda x: x, 0, 1, 3)


@pytest.mark.parametrize("q", [0.5, 2.0])
@pytest.mark.parametrize("beta", [0.5, 2.0])
def test_mt_oracle(s123, q, beta):
    assert mt_response(q, beta, s123) == pytest.approx(oracle.mt_oracle(q, beta, s123), rel=1e-6)


@pytest.mark.parametrize("q,beta", [(1.0, 1.0), (0.3, 3.0)])
def test_mt_k0_series(s123, q, beta):
    assert mt_response(q, beta, s123) == pytest.approx(oracle.mt_k0_series(q, beta, s123), rel=1e-8)


def test_mt_oracle_domain(s123):
    with pytest.raises(DomainError):
        oracle.mt_oracle(0.0, 1.0, s123)
