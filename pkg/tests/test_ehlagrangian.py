import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvqed import ehlagrangian as eh
from pvqed.errors import DomainError
from pvqed.quadrature import QuadratureConfig, integrate_semiinf
from pvqed.series import SeriesPolicy

PI2 = math.pi**2


def test_zero_field(s123):
    assert eh.f0_pv(0.0, s123) == 0.0
    assert eh.f0_single(0.0, 1.0) == 0.0
    assert eh.ft_pv(0.0, 1.0, s123) == 0.0


def test_small_a_coefficient(s123):
    a = 1e-3
    ref = s123.log_lambda / (12 * PI2)
    assert eh.f0_pv(a, s123) / a**2 == pytest.approx(ref, rel=1e-4)


@pytest.mark.parametrize("a", [0.5, 1.0, 5.0])
def test_decomposition(s123, a, tight):
    rhs = math.fsum(c * eh.f0_single(a, m, tight) for c, m in zip(s123.coeffs, s123.masses))
    rhs += a * a * s123.log_lambda / (12 * PI2)
    assert eh.f0_pv(a, s123, tight) == pytest.approx(rhs, rel=1e-8)


def test_f0_single_small_a():
    a = 1e-2
    assert eh.f0_single(a, 1.0) == pytest.approx(-(a**4) / (360 * PI2), rel=1e-3)


def test_f0_single_monotone():
    assert eh.f0_single(2.0, 1.0) < eh.f0_single(1.0, 1.0) < 0.0
    vals = [eh.f0_single(a, 1.0) for a in np.linspace(0.1, 20, 25)]
    assert all(v <= 0 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_f0_even(s123):
    assert eh.f0_pv(-1.5, s123) == eh.f0_pv(1.5, s123)


def test_f0_single_mass_domain():
    with pytest.raises(DomainError):
        eh.f0_single(1.0, 0.0)


def test_ft_bessel_oracle(s123):
    from pvqed.oracle import ft_bessel_oracle

    assert eh.ft_pv(1.0, 1.0, s123) == pytest.approx(ft_bessel_oracle(1.0, 1.0, s123), rel=1e-6)


def test_ft_decreasing_with_beta(s123):
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-30)
    mags = [abs(eh.ft_pv(1.0, b, s123, cfg)) for b in (5.0, 10.0, 20.0, 30.0)]
    assert all(b < a for a, b in zip(mags, mags[1:]))
    assert mags[-1] <= 1e-10


def test_ft_infinite_beta(s123):
    assert eh.ft_pv(1.0, math.inf, s123) == 0.0


@pytest.mark.parametrize("switch", [0.25, 4.0])
def test_ft_switch_invariance(s123, switch):
    ref = eh.ft_pv(1.0, 1.0, s123)
    assert eh.ft_pv(1.0, 1.0, s123, policy=SeriesPolicy(theta_switch=switch)) == pytest.approx(ref, rel=1e-8)


def test_ft_domain(s123):
    with pytest.raises(DomainError):
        eh.ft_pv(1.0, 0.0, s123)


def test_vacuum_massless():
    assert eh.ft_vacuum_single(1.0, 0.0) == pytest.approx(-7 * PI2 / 180, rel=1e-10)
    assert eh.ft_vacuum_single(2.0, 0.0) == pytest.approx(eh.ft_vacuum_single(1.0, 0.0) / 16, rel=1e-14)


def test_vacuum_massless_from_proper_time():
    # independent route: integrate the proper-time kernel with m = 0
    from pvqed import kernels

    f = lambda s: kernels.alt_gauss_sum(0.25 / s, 1.0) / s**3
    val = integrate_semiinf(f, QuadratureConfig(rel_tol=1e-12), scale=0.25, exp_tail=True).value / (4 * PI2)
    assert val == pytest.approx(-7 * PI2 / 180, rel=1e-10)


def test_vacuum_continuity():
    assert abs(eh.ft_vacuum_single(1.0, 1e-3) + 7 * PI2 / 180) <= 1e-3


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(0.05, 5.0))
def test_vacuum_massive_matches_proper_time(beta, m):
    from pvqed import kernels

    f = lambda s: np.exp(-s * m * m) * kernels.alt_gauss_sum(0.25 * beta * beta / s, 1.0) / s**3
    ref = integrate_semiinf(f, QuadratureConfig(rel_tol=1e-11), scale=0.25 * beta * beta, exp_tail=True).value
    ref /= 4 * PI2
    assert eh.ft_vacuum_single(beta, m) == pytest.approx(ref, rel=1e-8)


def test_vacuum_domain():
    with pytest.raises(DomainError):
        eh.ft_vacuum_single(0.0, 1.0)
    with pytest.raises(DomainError):
        eh.ft_vacuum_single(1.0, -1.0)


def test_total_density(s123):
    p = eh.total_density(1.0, 1.0, s123)
    assert p.total == eh.f0_pv(1.0, s123) + eh.ft_pv(1.0, 1.0, s123)
    assert not p.extrapolated and p.converged
    z = eh.total_density(0.0, 1.0, s123)
    assert z.total == 0.0
    cold = eh.total_density(2.0, math.inf, s123)
    assert cold.total == eh.f0_pv(2.0, s123) and cold.ft == 0.0


def test_extrapolated_flag(s123):
    assert eh.total_density(10.0, 1.0, s123).extrapolated
