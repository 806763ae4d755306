import math

import numpy as np
import pytest

from pvqed import response as R
from pvqed.errors import DomainError
from pvqed.oracle import reference_quadrature
from pvqed.quadrature import QuadratureConfig

Q_GRID = np.logspace(-2, np.log10(50.0), 25)


def test_m0_at_zero(s123):
    assert R.m0_response(0.0, s123) == pytest.approx(2 * s123.log_lambda / (3 * math.pi), rel=1e-8)


def test_m0_endpoint_inequality(s123):
    m00 = R.m0_response(0.0, s123)
    vals = np.array([R.m0_response(q, s123) for q in Q_GRID])
    assert np.all(vals > 0) and np.all(vals <= m00)
    assert R.m0_response(1.0, s123) < m00


def test_m0_decays(s123):
    a, b = R.m0_response(1e3, s123), R.m0_response(1e4, s123)
    assert 0 < b < a < 1e-8
    # q^-4 tail from the second sum rule, up to a log q correction
    assert 3.9 < math.log10(a / b) < 4.3


def test_full_output(s123):
    r = R.m0_response(1.0, s123, full_output=True)
    assert r.converged and r.error_estimate >= 0


def test_negative_q(s123):
    with pytest.raises(DomainError):
        R.m0_response(-1.0, s123)


def test_g_zero(s123):
    assert R.g_zero(2.0, s123) == pytest.approx(4 * R.m0_response(2.0, s123) / (8 * math.pi), rel=1e-14)


def test_uehling_values():
    assert R.uehling(0.0) == 0.0
    ref = reference_quadrature(lambda z: (z * z - z**4 / 3) / (1 + (1 - z * z) / 4), 0.0, 1.0, 2000) / (4 * math.pi)
    assert R.uehling(1.0) == pytest.approx(ref, rel=1e-10)


def test_uehling_limit(s1_100_1000):
    m00 = 2 * s1_100_1000.log_lambda / (3 * math.pi)
    for q in np.linspace(0, 5, 11):
        assert abs(m00 - R.m0_response(q, s1_100_1000) - R.uehling(q)) <= 1e-2


def test_mt_finite_at_zero(s123):
    v = R.mt_response(0.0, 1.0, s123)
    assert math.isfinite(v) and v < 0


def test_mt_bound_constant(s123):
    k = 32 / (3 * math.sqrt(math.pi)) * (1 + 1.6 / math.sqrt(2) + 0.6 / math.sqrt(3))
    assert R.mt_bound_constant(s123) == pytest.approx(k, rel=1e-14)
    assert R.mt_bound(s123, 4.0) == pytest.approx(R.mt_bound(s123, 1.0) / 2, rel=1e-15)


@pytest.mark.parametrize("q", [0.0, 0.1, 1.0, 10.0])
def test_mt_large_lambda_negative(s1_100_1000, q):
    assert R.mt_response(q, 1.0, s1_100_1000) < 0


@pytest.mark.parametrize("q,beta", [(1.0, 1.0), (2.0, 0.5), (0.5, 2.0), (1.0, 0.1)])
def test_gt_representations(s123, q, beta):
    assert R.gt_bessel(q, beta, s123) == pytest.approx(R.gt_coshint(q, beta, s123), rel=1e-6)


def test_gt_sign_observed(s1_10_100):
    # recorded observation: the n = 1 term -c0 [K0(x) - x K1(x)] is positive at x ~ 1
    assert R.gt_bessel(1.0, 1.0, s1_10_100) > 0
    # while the b-average, which is what enters MT, stays negative
    assert R.mt_response(1.0, 1.0, s1_10_100) < 0


def test_gt_large_beta(s123):
    g = R.gt_bessel(1.0, 20.0, s123)
    assert abs(g) <= math.exp(-20.0)
    assert abs(R.gt_coshint(1.0, 60.0, s123)) < 1e-20


@pytest.mark.parametrize("q,beta", [(0.5, 0.3), (1.0, 1.0), (3.0, 2.0), (0.1, 10.0)])
def test_g_total_nonnegative(s123, q, beta):
    assert R.g_total(q, beta, s123) >= 0


def test_g_total_zero_temperature_limit(s123):
    assert R.g_total(1.0, 50.0, s123) == pytest.approx(R.g_zero(1.0, s123), rel=1e-4)


def test_response_point(s123):
    p = R.response_point(1.0, 1.0, s123)
    assert p.total == p.m0_value + p.mt_value and p.converged
    z = R.response_point(1.0, math.inf, s123)
    assert z.mt_value == 0.0 and z.total == z.m0_value


def test_fpv2_zero_profile(s123):
    assert R.fpv2(R.RadialSpectrum(lambda q: 0.0, 4.0), 1.0, s123) == 0.0


def test_fpv2_gaussian_oracle(s123):
    spec = R.RadialSpectrum(lambda q: math.exp(-q * q), 6.0)
    val = R.fpv2(spec, 1.0, s123)
    qs = np.linspace(0.0, 6.0, 241)
    ys = np.array([R.response_point(q, 1.0, s123).total * math.exp(-q * q) * q * q for q in qs])
    ref = 0.5 * reference_quadrature(lambda x: np.interp(x, qs, ys), 0.0, 6.0, 240)
    assert val > 0
    assert val == pytest.approx(ref, rel=1e-6)


def test_fpv2_linear(s123):
    f = lambda q: math.exp(-q * q)
    a = R.fpv2(R.RadialSpectrum(f, 4.0), 1.0, s123)
    b = R.fpv2(R.RadialSpectrum(lambda q: 2 * f(q), 4.0), 1.0, s123)
    assert b == pytest.approx(2 * a, rel=1e-12)


def test_spectrum_validation():
    with pytest.raises(DomainError):
        R.RadialSpectrum(lambda q: 1.0, 0.0)


def test_tighter_tolerance_consistent(s123):
    loose = R.mt_response(1.0, 1.0, s123, QuadratureConfig(rel_tol=1e-6))
    tight = R.mt_response(1.0, 1.0, s123, QuadratureConfig(rel_tol=1e-12))
    assert loose == pytest.approx(tight, rel=1e-6)
