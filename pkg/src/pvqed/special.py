"""Cancellation-safe special functions.

Theta functions are parametrised by the proper time ``s`` and inverse
temperature ``beta`` through the modular parameter ``p = 4 pi^2 s / beta^2``;
``theta2(s, beta)`` means ``sum_n exp(-p (n - 1/2)^2)``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import DomainError
from .quadrature import QuadratureConfig, integrate_semiinf
from .series import DEFAULT_POLICY, SeriesPolicy

_FOUR_PI2 = 4.0 * math.pi**2

BERNOULLI = {
    2: Fraction(1, 6),
    4: Fraction(-1, 30),
    6: Fraction(1, 42),
    8: Fraction(-1, 30),
    10: Fraction(5, 66),
    12: Fraction(-691, 2730),
}


def _scalar_or_array(x, out):
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def coth_m1(x):
    """``x coth(x) - 1`` for ``x >= 0``.

    Uses the series ``x^2/3 - x^4/45 + 2x^6/945`` below ``x = 1e-2``.

    >>> coth_m1(0.0)
    0.0
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if np.any(arr < 0.0):
        raise DomainError("coth_m1 requires x >= 0")
    return _scalar_or_array(x, kernels.coth_m1(arr))


def coth_m1_sub(x):
    """``x coth(x) - 1 - x^2/3``, accurate down to ``x -> 0``."""
    arr = np.abs(np.atleast_1d(np.asarray(x, dtype=float)).ravel())
    return _scalar_or_array(x, kernels.coth_m1_sub(arr))


def modular_parameter(s, beta: float):
    """``p = 4 pi^2 s / beta^2``."""
    return _FOUR_PI2 * np.asarray(s, dtype=float) / (beta * beta)


def _check_s_beta(s, beta):
    arr = np.atleast_1d(np.asarray(s, dtype=float)).ravel()
    if not beta > 0.0 or np.any(~(arr > 0.0)):
        raise DomainError("theta functions need s > 0 and beta > 0")
    return arr


def theta2_direct(s, beta: float):
    """``theta2`` by its defining sum over half-integers."""
    arr = _check_s_beta(s, beta)
    return _scalar_or_array(s, kernels.theta2_direct(modular_parameter(arr, beta)))


def theta2_poisson(s, beta: float):
    """``theta2`` through its Poisson-resummed (integer-shift) representation.

    ``(beta/2) (pi s)^{-1/2} [1 + 2 sum_{n>=1} (-1)^n exp(-beta^2 n^2 / 4s)]``.
    """
    arr = _check_s_beta(s, beta)
    return _scalar_or_array(s, kernels.theta2_poisson(modular_parameter(arr, beta)))


def theta2(s, beta: float, policy: SeriesPolicy = DEFAULT_POLICY):
    """``theta2`` with the representation chosen by ``policy.theta_switch``."""
    arr = _check_s_beta(s, beta)
    p = modular_parameter(arr, beta)
    return _scalar_or_array(s, kernels.theta2(p, policy.theta_switch))


def theta2_sprime_p(p, beta: float, policy: SeriesPolicy = DEFAULT_POLICY):
    """``d theta2 / ds`` given the modular parameter array ``p``."""
    return kernels.theta2_dp(p, policy.theta_switch) * (_FOUR_PI2 / (beta * beta))


def theta2_sprime(s, beta: float, policy: SeriesPolicy = DEFAULT_POLICY):
    """Derivative of ``theta2`` with respect to ``s``; never positive."""
    arr = _check_s_beta(s, beta)
    p = modular_parameter(arr, beta)
    return _scalar_or_array(s, theta2_sprime_p(p, beta, policy))


def bessel_k(nu: int, x: float, cfg: QuadratureConfig | None = None) -> float:
    """Modified Bessel function ``K_nu(x)`` for ``nu`` in ``{0, 1, 2}``.

    Adaptive quadrature of ``int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt``
    rescaled by ``exp(-x)``; ``K_2`` follows from the recurrence.
    """
    if nu not in (0, 1, 2):
        raise DomainError(f"nu must be 0, 1 or 2, got {nu}")
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"bessel_k requires finite x > 0, got {x}")
    if nu == 2:
        return bessel_k(0, x, cfg) + 2.0 * bessel_k(1, x, cfg) / x

    def f(t):
        with np.errstate(over="ignore", invalid="ignore"):
            sh = np.sinh(0.5 * t)
            e = np.exp(-2.0 * x * sh * sh)
            if nu == 1:
                e = np.where(e > 0.0, e * np.cosh(t), 0.0)
        return e

    # the integrand turns over near sinh(t/2) ~ 1/sqrt(2x)
    scale = 2.0 * math.asinh(1.0 / math.sqrt(2.0 * x))
    res = integrate_semiinf(f, cfg, scale=scale, exp_tail=True)
    return res.value * math.exp(-x)


def bessel_k_array(nu: int, x) -> np.ndarray:
    """Vectorised ``K_nu`` via the trapezoidal kernel (fast path)."""
    x = np.asarray(x, dtype=float)
    k0, k1 = kernels.bessel_k01(x.ravel())
    if nu == 0:
        out = k0
    elif nu == 1:
        out = k1
    elif nu == 2:
        out = k0 + 2.0 * k1 / x.ravel()
    else:
        raise DomainError(f"nu must be 0, 1 or 2, got {nu}")
    return out.reshape(x.shape)


def fermi_dirac_integral(n: int) -> float:
    """Closed form of ``int_0^inf x^(2n-1) / (e^x + 1) dx`` for ``1 <= n <= 6``.

    Equals ``(1 - 2^(1-2n)) (2 pi)^(2n) |B_2n| / (4n)``.

    >>> round(fermi_dirac_integral(1), 6)
    0.822467
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= 6:
        raise DomainError(f"n must be an integer in 1..6, got {n!r}")
    b = abs(BERNOULLI[2 * n])
    return float(1 - Fraction(2) ** (1 - 2 * n)) * (2 * math.pi) ** (2 * n) * float(b) / (4 * n)


def fermi_dirac_quadrature(n: int, cfg: QuadratureConfig | None = None) -> float:
    """Numerical twin of :func:`fermi_dirac_integral`."""
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= 6:
        raise DomainError(f"n must be an integer in 1..6, got {n!r}")
    k = 2 * n - 1

    def f(x):
        e = np.exp(-x)
        return x**k * e / (1.0 + e)

    return integrate_semiinf(f, cfg, scale=float(k + 1)).value
