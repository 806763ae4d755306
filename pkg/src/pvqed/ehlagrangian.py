"""Euler-Heisenberg energy densities of a constant magnetic field.

All densities are functions of ``a = |B|`` (mass dimension two) and are even
in ``a``; negative inputs are folded to ``|a|``.  Proper-time integrands are

* ``f0_single``: ``(1/8pi^2) e^{-s m^2} (sa coth sa - 1 - (sa)^2/3) / s^3``
* ``f0_pv``: ``(1/8pi^2) E(s) (sa coth sa - 1) / s^3``
* ``ft_pv``: ``(1/4pi^2) E(s) (sa coth sa - 1) S(beta^2 / 4s) / s^3``

with ``E(s) = sum_j c_j e^{-s m_j^2}`` and
``S(x) = sum_{n>=1} (-1)^n e^{-x n^2}``.  The thermal part is a free-energy
density and is negative for the field-free massless gas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .pvscheme import PauliVillarsScheme
from .quadrature import QuadratureConfig, combine, integrate_semiinf
from .series import DEFAULT_POLICY, SeriesPolicy, alternating_sum

PI = math.pi
PI2 = PI * PI


@dataclass(frozen=True)
class DensityPoint:
    """Zero-temperature, thermal and total density at one field strength."""

    a: float
    beta: float
    f0: float
    ft: float
    total: float
    extrapolated: bool = False
    converged: bool = True


def _check_a(a: float) -> float:
    a = abs(float(a))
    if not math.isfinite(a):
        raise DomainError(f"field strength must be finite, got {a}")
    return a


def _scheme_args(scheme: PauliVillarsScheme):
    return (
        np.asarray(scheme.masses_sq),
        np.asarray(scheme.coeffs),
        scheme.moment4,
        scheme.moment6,
        scheme.moment8,
    )


def f0_single(
    a: float, m: float, cfg: QuadratureConfig | None = None, *, full_output: bool = False
):
    """Unregularised single-mass density, charge-renormalised by the ``(sa)^2/3`` subtraction.

    Nonpositive and decreasing in ``a``; ``-a^4 / (360 pi^2 m^4)`` for small ``a``.
    """
    a = _check_a(a)
    m = float(m)
    if not m > 0.0:
        raise DomainError(f"mass must be positive, got {m}")
    if a == 0.0:
        return 0.0
    m2 = m * m

    def f(s):
        return np.exp(-s * m2) * kernels.coth_m1_sub(s * a) / (s * s * s)

    res = integrate_semiinf(f, cfg, scale=1.0 / m2, points=[1.0 / a], exp_tail=True)
    res = combine([res], scale=1.0 / (8.0 * PI2))
    return res if full_output else res.value


def f0_pv(
    a: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    *,
    full_output: bool = False,
):
    """Pauli-Villars regularised zero-temperature density.

    Behaves as ``a^2 log(Lambda) / (12 pi^2)`` for small ``a``.
    """
    a = _check_a(a)
    if a == 0.0:
        return 0.0
    msq, c, m4, m6, m8 = _scheme_args(scheme)

    def f(s):
        return kernels.pv_exp_sum(s, msq, c, m4, m6, m8) * kernels.coth_m1(s * a) / (s * s * s)

    pts = [1.0 / a, 1.0 / msq[2], 1.0 / msq[1]]
    res = integrate_semiinf(f, cfg, scale=1.0 / msq[0], points=pts, exp_tail=True)
    res = combine([res], scale=1.0 / (8.0 * PI2))
    return res if full_output else res.value


def ft_pv(
    a: float,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    policy: SeriesPolicy = DEFAULT_POLICY,
    *,
    full_output: bool = False,
):
    """Thermal correction to the regularised density; ``0`` at ``beta = inf``.

    The alternating sum ``S(beta^2/4s)`` is summed directly when the modular
    parameter ``4 pi^2 s / beta^2`` is below ``policy.theta_switch`` and from
    its Poisson dual otherwise.
    """
    a = _check_a(a)
    beta = float(beta)
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    if a == 0.0 or math.isinf(beta):
        return 0.0
    msq, c, m4, m6, m8 = _scheme_args(scheme)
    b2 = 0.25 * beta * beta
    switch = policy.theta_switch

    def f(s):
        e = kernels.pv_exp_sum(s, msq, c, m4, m6, m8)
        return e * kernels.coth_m1(s * a) * kernels.alt_gauss_sum(b2 / s, switch) / (s * s * s)

    pts = [b2, 0.5 * beta / math.sqrt(msq[0]), 1.0 / a]
    res = integrate_semiinf(f, cfg, scale=b2, points=pts, exp_tail=True)
    res = combine([res], scale=1.0 / (4.0 * PI2))
    return res if full_output else res.value


def ft_vacuum_single(
    beta: float, m: float, cfg: QuadratureConfig | None = None,
    policy: SeriesPolicy = DEFAULT_POLICY,
) -> float:
    """Field-free thermal density of one Dirac field of mass ``m``.

    ``(2 m^2 / (pi^2 beta^2)) sum_{n>=1} (-1)^n K_2(m beta n) / n^2``; for
    ``m = 0`` each proper-time term integrates to ``16 / (beta n)^4``, giving
    ``(4 / (pi^2 beta^4)) sum (-1)^n n^-4``, which is ``-7 pi^2 / (180 beta^4)``.
    """
    beta = float(beta)
    m = float(m)
    if not beta > 0.0 or m < 0.0:
        raise DomainError(f"need beta > 0 and m >= 0, got beta={beta}, m={m}")
    if math.isinf(beta):
        return 0.0
    if m == 0.0:
        eta = float(alternating_sum(lambda n: n**-4.0, policy))
        return 4.0 / (PI2 * beta**4) * eta
    x = m * beta

    def term(n):
        y = x * n
        k0, k1 = kernels.bessel_k01(y)
        # n^-2 K_2(y) = n^-2 K_0 + 2 K_1 / (x n^3)
        return (k0 + 2.0 * k1 / y) / (n * n)

    s = float(alternating_sum(term, policy, decay=x))
    return 2.0 * m * m / (PI2 * beta * beta) * s


def extrapolated(a: float, scheme: PauliVillarsScheme) -> bool:
    """True when ``|a|`` exceeds the heaviest regulator mass squared."""
    return abs(a) > scheme.masses_sq[2]


def total_density(
    a: float,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    policy: SeriesPolicy = DEFAULT_POLICY,
) -> DensityPoint:
    """``f0_pv(a) + ft_pv(a, beta)``; ``beta = inf`` drops the thermal part."""
    a = _check_a(a)
    beta = float(beta)
    if a == 0.0:
        return DensityPoint(a, beta, 0.0, 0.0, 0.0, False, True)
    r0 = f0_pv(a, scheme, cfg, full_output=True)
    if math.isinf(beta):
        ft, ok_t = 0.0, True
    else:
        rt = ft_pv(a, beta, scheme, cfg, policy, full_output=True)
        ft, ok_t = rt.value, rt.converged
    return DensityPoint(
        a=a,
        beta=beta,
        f0=r0.value,
        ft=ft,
        total=r0.value + ft,
        extrapolated=extrapolated(a, scheme),
        converged=r0.converged and ok_t,
    )
