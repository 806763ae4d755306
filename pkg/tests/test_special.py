import math

import mpmath as mp
import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings
from hypothesis import strategies as st

from pvqed import special
from pvqed.errors import DomainError
from pvqed.series import SeriesPolicy


def mp_coth_m1(x, sub=False):
    with mp.workdps(50):
        x = mp.mpf(x)
        v = x * mp.coth(x) - 1
        if sub:
            v -= x * x / 3
        return float(v)


def mp_theta2(p):
    with mp.workdps(40):
        return float(mp.jtheta(2, 0, mp.exp(-mp.mpf(p))))


@pytest.mark.parametrize("x", [1e-8, 1e-4, 9.99e-3, 1e-2, 1.001e-2, 0.3, 1.0, 5.0, 30.0, 400.0])
def test_coth_m1_golden(x):
    assert special.coth_m1(x) == pytest.approx(mp_coth_m1(x), rel=1e-14)


@pytest.mark.parametrize("x", [1e-6, 1e-3, 0.5, 0.999, 1.0, 1.001, 3.0, 40.0])
def test_coth_m1_sub_golden(x):
    assert special.coth_m1_sub(x) == pytest.approx(mp_coth_m1(x, sub=True), rel=1e-13)


def test_coth_m1_crossover_continuous():
    x = np.nextafter(1e-2, [0.0, 1.0])
    v = special.coth_m1(x)
    assert abs(v[1] - v[0]) <= 1e-15 * abs(v[0])


def test_coth_m1_domain():
    assert special.coth_m1(0.0) == 0.0
    with pytest.raises(DomainError):
        special.coth_m1(-1.0)


def test_coth_m1_sub_even():
    assert special.coth_m1_sub(-0.7) == special.coth_m1_sub(0.7)


@pytest.mark.parametrize("p", [1e-4, 0.03, 0.5, 1.0, 2.0, 9.0, 10.0, 50.0, 200.0])
def test_theta2_golden(p):
    beta = 1.7
    s = p * beta**2 / (4 * math.pi**2)
    ref = mp_theta2(p)
    assert special.theta2(s, beta) == pytest.approx(ref, rel=1e-13)
    assert special.theta2_direct(s, beta) == pytest.approx(ref, rel=1e-13)
    assert special.theta2_poisson(s, beta) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("switch", [0.1, 1.0, 10.0])
def test_theta2_switch_irrelevant(switch):
    s = np.logspace(-4, 1, 40)
    a = special.theta2(s, 1.0, SeriesPolicy(theta_switch=switch))
    b = special.theta2(s, 1.0)
    np.testing.assert_allclose(a, b, rtol=1e-13)


def test_theta2_domain():
    with pytest.raises(DomainError):
        special.theta2(0.0, 1.0)
    with pytest.raises(DomainError):
        special.theta2(1.0, -1.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1e2), st.floats(0.1, 10.0))
def test_sprime_nonpositive(x, beta):
    s = x * beta * beta
    assert special.theta2_sprime(s, beta) <= 0.0


@pytest.mark.parametrize("p", [0.01, 0.2, 0.99, 1.01, 5.0, 30.0, 100.0])
def test_sprime_finite_difference(p):
    beta = 1.3
    s = p * beta**2 / (4 * math.pi**2)
    h = 1e-5 * s
    fd = (special.theta2(s + h, beta) - special.theta2(s - h, beta)) / (2 * h)
    assert special.theta2_sprime(s, beta) == pytest.approx(fd, rel=1e-7, abs=1e-300)


def test_modular_parameter():
    assert special.modular_parameter(1.0, 2.0 * math.pi) == pytest.approx(1.0)


@pytest.mark.parametrize("x", [1e-3, 0.1, 1.0, 2.5, 10.0, 50.0, 300.0])
@pytest.mark.parametrize("nu", [0, 1, 2])
def test_bessel_quadrature_vs_scipy(nu, x):
    assert special.bessel_k(nu, x) == pytest.approx(sc.kv(nu, x), rel=1e-10)


def test_bessel_array_vs_scipy():
    x = np.logspace(-6, np.log10(690.0), 400)
    for nu in (0, 1, 2):
        np.testing.assert_allclose(special.bessel_k_array(nu, x), sc.kv(nu, x), rtol=1e-13)


def test_bessel_array_near_underflow():
    # scipy flushes these to zero; compare with extended precision instead
    for x in (700.0, 705.0):
        for nu in (0, 1, 2):
            ref = float(mp.besselk(nu, x))
            assert special.bessel_k_array(nu, np.array([x]))[0] == pytest.approx(ref, rel=1e-12)


def test_bessel_decreasing_and_recurrence():
    x = np.linspace(0.05, 40, 300)
    for nu in (0, 1, 2):
        assert np.all(np.diff(special.bessel_k_array(nu, x)) < 0)
    k0, k1, k2 = (special.bessel_k_array(n, x) for n in (0, 1, 2))
    np.testing.assert_allclose(k2 - k0, 2 * k1 / x, rtol=1e-13)


def test_bessel_k0_at_one():
    assert special.bessel_k(0, 1.0) == pytest.approx(0.42102443824070834, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("inf"), float("nan")])
def test_bessel_domain(bad):
    with pytest.raises(DomainError):
        special.bessel_k(0, bad)


def test_bessel_order_domain():
    with pytest.raises(DomainError):
        special.bessel_k(3, 1.0)


@pytest.mark.parametrize("n", range(1, 7))
def test_fermi_dirac(n):
    with mp.workdps(30):
        ref = float(mp.quad(lambda x: x ** (2 * n - 1) / (mp.exp(x) + 1), [0, mp.inf]))
    assert special.fermi_dirac_integral(n) == pytest.approx(ref, rel=1e-13)
    assert special.fermi_dirac_quadrature(n) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("n", [0, 7, 1.5])
def test_fermi_dirac_domain(n):
    with pytest.raises(DomainError):
        special.fermi_dirac_integral(n)
