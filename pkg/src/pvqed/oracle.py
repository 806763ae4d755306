"""Slow, independent reference evaluators used by the tests and ``selftest``.

Nothing here goes through the adaptive engine in :mod:`pvqed.quadrature`
except :func:`mt_oracle`, whose outer ``b``-average is meant to exercise the
Bessel-series path of ``GT`` rather than the quadrature code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import DomainError
from .pvscheme import PauliVillarsScheme
from .quadrature import QuadratureConfig, integrate_finite
from .response import gt_bessel
from .series import DEFAULT_POLICY, SeriesPolicy

PI = math.pi


@dataclass(frozen=True)
class MatsubaraIndex:
    """Fermionic Matsubara frequency ``omega = (2k - 1) pi / beta``."""

    k: int
    beta: float

    def __post_init__(self):
        if not self.beta > 0.0:
            raise DomainError(f"beta must be positive, got {self.beta}")

    @property
    def omega(self) -> float:
        return (2 * self.k - 1) * PI / self.beta

    def partner(self) -> "MatsubaraIndex":
        """Index with the opposite frequency, ``1 - k``."""
        return MatsubaraIndex(1 - self.k, self.beta)


def tanh_partial_sum(x: float, K: int) -> float:
    """Symmetric partial sum of ``x tanh x = sum_k 4x^2 / ((2k-1)^2 pi^2 + 4x^2)``.

    Keeps the ``2K`` terms with ``|2k - 1| <= 2K - 1``; the neglected tail is
    below ``2 x^2 / (pi^2 K)``.
    """
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    x2 = 4.0 * float(x) ** 2
    if x2 == 0.0:
        return 0.0
    odd = (2.0 * np.arange(1, K + 1) - 1.0) ** 2 * PI**2
    terms = x2 / (odd + x2)
    return 2.0 * math.fsum(terms[::-1])


def reference_quadrature(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int) -> float:
    """Composite Simpson rule with ``n`` (even) subintervals."""
    if n < 2 or n % 2:
        raise DomainError(f"Simpson needs an even n >= 2, got {n}")
    x = np.linspace(a, b, n + 1)
    y = np.asarray(f(x), dtype=float)
    h = (b - a) / n
    return h / 3.0 * (y[0] + y[-1] + 4.0 * np.sum(y[1:-1:2]) + 2.0 * np.sum(y[2:-1:2]))


def mt_oracle(
    q: float,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    policy: SeriesPolicy = DEFAULT_POLICY,
) -> float:
    """``MT`` as the ``b``-average of the Bessel-series ``GT``.

    ``(8 pi / q^2) (1/beta) int_0^beta GT(q, b) db``.  ``GT`` tends to the
    finite limit ``-G0`` as ``b -> 0``, so the average is a proper integral.
    """
    q = float(q)
    if not q > 0.0:
        raise DomainError(f"mt_oracle needs q > 0, got {q}")
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta}")

    def f(b):
        return gt_bessel(q, float(b), scheme, cfg, policy)

    res = integrate_finite(f, 0.0, float(beta), cfg, vectorized=False)
    return 8.0 * PI / (q * q) * res.value / beta


def mt_k0_series(
    q: float, beta: float, scheme: PauliVillarsScheme, n_terms: int | None = None,
    n_u: int = 2000,
) -> float:
    """``MT = (8/pi) sum_n (-1)^n int_0^1 sum_j c_j K0(n beta mu_j) w du``.

    The ``b``-average of each Bessel term in closed form; brute-force partial
    sums and a fixed Simpson grid in ``u``.  Intended for moderate ``beta``;
    by default the sum stops once ``K0`` has decayed below ``e^-45``.
    """
    if n_terms is None:
        n_terms = int(math.ceil(45.0 / (beta * scheme.masses[0]))) + 1
    m2 = np.asarray(scheme.masses_sq)
    c = np.asarray(scheme.coeffs)
    u = np.linspace(0.0, 1.0, n_u + 1)
    w = u * (1.0 - u)
    mu = np.sqrt(m2[None, :] + (w * q * q)[:, None])
    total = np.zeros_like(u)
    for n in range(n_terms, 0, -1):
        k0, _ = kernels.bessel_k01((beta * n * mu).ravel())
        total += (-1) ** n * (k0.reshape(mu.shape) @ c)
    y = total * w
    h = 1.0 / n_u
    integral = h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())
    return 8.0 / PI * integral


def _i_nu(alpha: np.ndarray, gamma: np.ndarray, nu: int) -> np.ndarray:
    # int_0^inf s^(nu-1) exp(-gamma s - alpha/s) ds = 2 (alpha/gamma)^(nu/2) K_nu(2 sqrt(alpha gamma))
    z = 2.0 * np.sqrt(alpha * gamma)
    k0, k1 = kernels.bessel_k01(z.ravel())
    k0 = k0.reshape(z.shape)
    k1 = k1.reshape(z.shape)
    if abs(nu) == 1:
        k = k1
    elif abs(nu) == 2:
        k = k0 + 2.0 * k1 / z
    else:
        raise DomainError("only |nu| in {1, 2} is needed")
    return 2.0 * (alpha / gamma) ** (0.5 * nu) * k


def ft_bessel_oracle(
    a: float, beta: float, scheme: PauliVillarsScheme,
    n_max: int | None = None, l_max: int | None = None,
) -> float:
    """Termwise Bessel evaluation of the thermal density ``ft_pv``.

    Expands ``sa coth(sa) - 1 = (sa - 1) + 2 sa sum_{l>=1} e^{-2 l a s}`` and
    integrates each exponential against ``e^{-s m^2 - beta^2 n^2 / 4s} s^{-3}``
    in closed form.  Brute-force partial sums in ``n`` and ``l``, by default
    cut where the Bessel factors fall below ``e^-45``.
    """
    a = abs(float(a))
    if a == 0.0:
        return 0.0
    if n_max is None:
        n_max = int(math.ceil(45.0 / (beta * scheme.masses[0]))) + 1
    if l_max is None:
        l_max = int(math.ceil((45.0 / beta) ** 2 / (2.0 * a))) + 1
    n = np.arange(1, n_max + 1, dtype=float)
    sign = np.where(n % 2 == 1, -1.0, 1.0)
    alpha = 0.25 * beta * beta * n * n  # (n,)
    l = np.arange(1, l_max + 1, dtype=float)
    total = 0.0
    for cj, m2 in zip(scheme.coeffs, scheme.masses_sq):
        head = a * _i_nu(alpha, np.full_like(alpha, m2), -1) - _i_nu(alpha, np.full_like(alpha, m2), -2)
        gam = m2 + 2.0 * a * l  # (l,)
        tail = 2.0 * a * _i_nu(alpha[:, None], gam[None, :], -1)  # (n, l)
        per_n = head + tail[:, ::-1].sum(axis=1)
        total += cj * math.fsum((sign * per_n)[::-1])
    return total / (4.0 * PI * PI)
