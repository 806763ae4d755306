"""Second-order (linear) vacuum response in a magnetic field.

The quadratic part of the free energy is
``(1/8 pi) int (M0(q) + MT(q, beta)) |B^(q)|^2 dq`` with

* ``M0(q) = -(2/pi) int_0^1 sum_j c_j log(m_j^2 + w q^2) w du``
* ``MT(q, beta) = -(8/pi) int_0^1 int_0^inf sum_j c_j / (1 + exp(X_j cosh t)) dt w du``

where ``w = u(1-u)`` and ``X_j = beta sqrt(m_j^2 + w q^2)``.  The thermal
kernel here is the Fermi factor; it is what the ``b``-average of the ``G^T``
integrand produces, and it agrees with the Bessel-series route to machine
precision.  The ``G`` functions satisfy
``(1/beta) int_0^beta G(q, b) db = (q^2 / 8 pi)(M0 + MT)`` and
``G = G0 + GT`` with ``G0 = (q^2 / 8 pi) M0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import DomainError
from .quadrature import (
    DEFAULT_CONFIG,
    IntegralResult,
    QuadratureConfig,
    combine,
    integrate_finite,
    integrate_semiinf_vec,
)
from .pvscheme import PauliVillarsScheme
from .series import DEFAULT_POLICY, SeriesPolicy, alternating_sum
from .special import modular_parameter, theta2_sprime_p

PI = math.pi
# inner integrals run this much tighter than the outer one
_INNER = 0.05


@dataclass(frozen=True)
class ResponsePoint:
    """``M0``, ``MT`` and their sum at one momentum."""

    q: float
    m0_value: float
    mt_value: float
    total: float
    err: float
    converged: bool = True


@dataclass(frozen=True)
class RadialSpectrum:
    """Radially symmetric spectral density ``q -> |B^(q)|^2`` supported on ``[0, q_max]``."""

    profile: Callable[[float], float]
    q_max: float

    def __post_init__(self):
        if not self.q_max > 0.0:
            raise DomainError(f"q_max must be positive, got {self.q_max}")


def _w(u):
    return u * (1.0 - u)


def _check_q(q: float, strict: bool = False) -> float:
    q = float(q)
    if not (math.isfinite(q) and q >= 0.0) or (strict and q == 0.0):
        raise DomainError(f"need {'q > 0' if strict else 'finite q >= 0'}, got {q}")
    return q


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError(f"beta must be positive and finite, got {beta}")
    return beta


def _u_points(q: float, scheme: PauliVillarsScheme) -> list[float]:
    # u in (0, 1/2) where w q^2 crosses each m_j^2
    pts = []
    q2 = q * q
    for m2 in scheme.masses_sq:
        r = m2 / q2 if q2 > 0.0 else math.inf
        if r < 0.25:
            pts.append(0.5 * (1.0 - math.sqrt(1.0 - 4.0 * r)))
    return pts


def _half_u(f, q, scheme, cfg, extra=()):
    # integrand symmetric under u -> 1 - u
    res = integrate_finite(f, 0.0, 0.5, cfg, points=list(_u_points(q, scheme)) + list(extra))
    return res


def _scheme_args(scheme):
    return (
        np.asarray(scheme.masses_sq),
        np.asarray(scheme.coeffs),
        scheme.moment4,
        scheme.moment6,
        scheme.moment8,
    )


# -- zero temperature -------------------------------------------------------


def m0_response(
    q: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    *,
    full_output: bool = False,
):
    """Zero-temperature response ``M0(q)``.

    ``M0(0) = 2 log(Lambda) / (3 pi)`` and ``M0`` decays to 0 as ``q`` grows.
    """
    q = _check_q(q)
    msq, c, m4, m6, m8 = _scheme_args(scheme)
    q2 = q * q

    def f(u):
        w = _w(u)
        return kernels.pv_log_sum(w * q2, msq, c, m4, m6, m8) * w

    res = _half_u(f, q, scheme, cfg)
    res = combine([res], scale=-4.0 / PI)
    return res if full_output else res.value


def g_zero(q: float, scheme: PauliVillarsScheme, cfg: QuadratureConfig | None = None) -> float:
    """``G0(q) = q^2 M0(q) / (8 pi)``."""
    q = _check_q(q)
    return q * q * m0_response(q, scheme, cfg) / (8.0 * PI)


def uehling(q: float, cfg: QuadratureConfig | None = None) -> float:
    """Uehling function ``U(q) = (q^2/4pi) int_0^1 (z^2 - z^4/3) / (1 + q^2 (1-z^2)/4) dz``."""
    q = _check_q(q)
    if q == 0.0:
        return 0.0
    q2 = q * q

    def f(z):
        z2 = z * z
        return z2 * (1.0 - z2 / 3.0) / (1.0 + 0.25 * q2 * (1.0 - z2))

    return q2 / (4.0 * PI) * integrate_finite(f, 0.0, 1.0, cfg).value


# -- thermal part -------------------------------------------------------------


def _t_scale(x_min: float) -> float:
    # Fermi factors stay O(1) until X cosh t ~ 1, i.e. t ~ log(2/X)
    return max(1.0, math.log(2.0 / x_min) + 1.0) if x_min < 1.0 else 1.0


def _thermal_tu(kernel, q, beta, scheme, cfg):
    # int_0^1/2 w int_0^inf kernel(cosh t, X(u)) dt du, inner pass vectorised over u
    cfg = cfg or DEFAULT_CONFIG
    inner_cfg = cfg.tightened(_INNER)
    m = np.asarray(scheme.masses)
    c = np.asarray(scheme.coeffs)
    q2 = q * q
    msq = m * m
    state = {"ok": True}

    def outer(u):
        w = _w(u)
        xj = beta * np.sqrt(msq[None, :] + (w * q2)[:, None])  # (nu, 3)
        scale = _t_scale(float(np.min(xj)))

        def inner(t):
            ch = np.cosh(np.minimum(t, 700.0))
            out = np.empty((len(t), len(u)))
            for i in range(len(u)):
                out[:, i] = kernel(ch, xj[i], c)
            return out

        res = integrate_semiinf_vec(inner, inner_cfg, scale=scale, exp_tail=True)
        state["ok"] &= res.converged
        return res.value * w

    res = _half_u(outer, q, scheme, cfg)
    return IntegralResult(
        2.0 * res.value, 2.0 * res.error_estimate, res.panels_used,
        res.converged and state["ok"],
    )


def mt_response(
    q: float,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    *,
    full_output: bool = False,
):
    """Thermal response ``MT(q, beta)``; finite at ``q = 0``."""
    q = _check_q(q)
    beta = _check_beta(beta)
    res = _thermal_tu(kernels.pv_fermi, q, beta, scheme, cfg)
    res = combine([res], scale=-8.0 / PI)
    return res if full_output else res.value


def mt_bound_constant(scheme: PauliVillarsScheme) -> float:
    """``K = sum_j |c_j| 32 / (3 sqrt(pi m_j))``."""
    return math.fsum(
        abs(cj) * 32.0 / (3.0 * math.sqrt(PI * mj))
        for cj, mj in zip(scheme.coeffs, scheme.masses)
    )


def mt_bound(scheme: PauliVillarsScheme, beta: float) -> float:
    """Upper bound ``K / sqrt(beta)`` on ``|MT(q, beta)|``, uniform in ``q``."""
    beta = _check_beta(beta)
    return mt_bound_constant(scheme) / math.sqrt(beta)


def gt_coshint(
    q: float,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    *,
    full_output: bool = False,
):
    """``GT`` as the ``(t, u)`` double integral.

    ``-(q^2/pi^2) int int sum_j c_j e^{-Y}(1 - Y + e^{-Y}) / (1 + e^{-Y})^2 dt w du``
    with ``Y = X_j cosh t``.
    """
    q = _check_q(q, strict=True)
    beta = _check_beta(beta)
    res = _thermal_tu(kernels.pv_gt_cosh, q, beta, scheme, cfg)
    res = combine([res], scale=-(q * q) / PI**2)
    return res if full_output else res.value


def gt_bessel(
    q: float,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    policy: SeriesPolicy = DEFAULT_POLICY,
    *,
    full_output: bool = False,
):
    """``GT`` from its alternating Bessel series.

    ``(q^2/pi^2) sum_{n>=1} (-1)^n int_0^1 sum_j c_j [K0(n x_j) - n x_j K1(n x_j)] w du``
    with ``x_j = beta sqrt(m_j^2 + w q^2)``.  The ``n``-sum is taken at each
    ``u`` node; slowly decaying series (small ``beta``) are summed with CVZ
    acceleration unless ``policy.accelerate`` is off.

    Raises
    ------
    SeriesTruncation
        Direct summation exhausted ``policy.n_max``.
    """
    q = _check_q(q, strict=True)
    beta = _check_beta(beta)
    m = np.asarray(scheme.masses)
    c = np.asarray(scheme.coeffs)
    q2 = q * q
    decay = beta * scheme.masses[0]

    def f(u):
        w = _w(u)
        mu = np.sqrt(m[None, :] ** 2 + (w * q2)[:, None])  # (nu, 3)

        def term(n):
            x = beta * n[:, None, None] * mu[None, :, :]
            k0, k1 = kernels.bessel_k01(x.ravel())
            g = (k0 - x.ravel() * k1).reshape(x.shape)
            return g @ c  # (nn, nu)

        return alternating_sum(term, policy, decay=decay) * w

    res = _half_u(f, q, scheme, cfg)
    res = combine([res], scale=2.0 * q2 / PI**2)
    return res if full_output else res.value


def g_total(
    q: float,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    policy: SeriesPolicy = DEFAULT_POLICY,
    *,
    full_output: bool = False,
):
    """Full ``G(q, beta)`` from the proper-time integral over ``theta2'``.

    ``-(q^2 / (beta pi^{3/2})) int_0^1 int_0^inf theta2'(s) s^{1/2} E(s) e^{-s w q^2} ds w du``
    with ``E(s) = sum_j c_j exp(-s m_j^2)``.  Nonnegative.
    """
    q = _check_q(q, strict=True)
    beta = _check_beta(beta)
    cfg = cfg or DEFAULT_CONFIG
    inner_cfg = cfg.tightened(_INNER)
    msq, c, m4, m6, m8 = _scheme_args(scheme)
    q2 = q * q
    s_pts = sorted({beta * beta / (4.0 * PI**2) * policy.theta_switch,
                    1.0 / msq[2], 1.0 / msq[0]})
    state = {"ok": True}

    def outer(u):
        w = _w(u)

        def inner(s):
            p = modular_parameter(s, beta)
            th = theta2_sprime_p(p, beta, policy)
            e = kernels.pv_exp_sum(s, msq, c, m4, m6, m8)
            base = th * np.sqrt(s) * e
            # O(s) as s -> 0; drop nodes where p underflows
            base[p < 1e-250] = 0.0
            return base[:, None] * np.exp(-np.outer(s, w * q2))

        res = integrate_semiinf_vec(inner, inner_cfg, scale=1.0 / msq[0],
                                    points=s_pts, exp_tail=True)
        state["ok"] &= res.converged
        return res.value * w

    res = _half_u(outer, q, scheme, cfg)
    res = IntegralResult(res.value, res.error_estimate, res.panels_used,
                         res.converged and state["ok"])
    res = combine([res], scale=-2.0 * q2 / (beta * PI**1.5))
    return res if full_output else res.value


# -- assembled quantities ---------------------------------------------------


def response_point(
    q: float,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
) -> ResponsePoint:
    """``M0``, ``MT`` and their sum; ``beta = inf`` gives ``MT = 0``."""
    r0 = m0_response(q, scheme, cfg, full_output=True)
    if math.isinf(beta):
        rt = IntegralResult(0.0, 0.0, 0, True)
    else:
        rt = mt_response(q, beta, scheme, cfg, full_output=True)
    return ResponsePoint(
        q=abs(float(q)),
        m0_value=r0.value,
        mt_value=rt.value,
        total=r0.value + rt.value,
        err=r0.error_estimate + rt.error_estimate,
        converged=r0.converged and rt.converged,
    )


def fpv2(
    spectrum: RadialSpectrum,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
) -> float:
    """Quadratic form ``(1/8pi) int (M0 + MT)(|q|) |B^(q)|^2 d^3q`` for a radial spectrum.

    Reduces to ``(1/2) int_0^q_max (M0 + MT)(q) profile(q) q^2 dq``.
    """
    beta = float(beta)

    def f(q):
        prof = float(spectrum.profile(q))
        if prof < 0.0:
            raise DomainError(f"spectral density negative at q={q}: {prof}")
        if prof == 0.0 or q == 0.0:
            return 0.0
        return response_point(q, beta, scheme, cfg).total * prof * q * q

    res = integrate_finite(f, 0.0, spectrum.q_max, cfg, vectorized=False)
    return 0.5 * res.value
