"""Pure-numpy implementations of the hot integrand kernels.

Every function takes and returns contiguous 1-D ``float64`` arrays and has a
twin with the same signature in the compiled ``_ckernels`` module.  Scalars
(masses, coefficients, thresholds) are passed explicitly so the kernels stay
independent of the scheme objects.
"""

from __future__ import annotations

import math

import numpy as np

PI = math.pi
PI2 = PI * PI
SQRT_PI = math.sqrt(PI)

# x*coth(x) = sum_n COTH_SERIES[n] * x**(2n); 2^(2n) B_2n / (2n)!
COTH_SERIES = (
    1.0,
    0.3333333333333333,
    -0.022222222222222223,
    0.0021164021164021165,
    -0.00021164021164021165,
    2.1377799155576935e-05,
    -2.1644042808063972e-06,
    2.1925947851873778e-07,
    -2.2214608789979678e-08,
    2.2507846516808994e-09,
    -2.2805151204592183e-10,
    2.3106432599002624e-11,
    -2.3411706819824882e-12,
    2.3721017400233653e-13,
    -2.4034415333307705e-14,
    2.4351954029183367e-15,
    -2.4673688045172075e-16,
)

COTH_SERIES_CUT = 1e-2
COTH_SUB_SERIES_CUT = 1.0
# moment expansions are used below this value of s m_2^2 (or m_2^2 / x)
PV_MOMENT_CUT = 1e-5
PV_PHI_CUT = 1.0
# e^{-x} - 1 + x = sum_{k>=2} PHI_SERIES[k-2] x^k, enough terms for x <= 1
PHI_SERIES = tuple((-1.0) ** k / math.factorial(k) for k in range(2, 21))
# log1p(y) - y = sum_{k>=2} PSI_SERIES[k-2] y^k, enough terms for y <= PSI_SERIES_CUT
PSI_SERIES_CUT = 0.1
PSI_SERIES = tuple((-1.0) ** (k + 1) / k for k in range(2, 19))
# exponent beyond which exp(-y) is dropped from sums
TAIL_EXPONENT = 41.0


def _arr(x) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=np.float64)


def coth_m1(x):
    """``x coth x - 1`` for ``x >= 0``.

    Short series below ``COTH_SERIES_CUT``, the full Bernoulli series up to
    ``COTH_SUB_SERIES_CUT`` (the closed form cancels there), closed form above.
    """
    x = _arr(x)
    out = np.empty_like(x)
    small = x < COTH_SERIES_CUT
    xs = x[small] * x[small]
    out[small] = xs * (1.0 / 3.0 + xs * (-1.0 / 45.0 + xs * (2.0 / 945.0)))
    mid = (~small) & (x < COTH_SUB_SERIES_CUT)
    xm = x[mid]
    out[mid] = xm * xm / 3.0 + coth_m1_sub(xm)
    xl = x[~(small | mid)]
    out[~(small | mid)] = xl / np.tanh(xl) - 1.0
    return out


def coth_m1_sub(x):
    """``x coth x - 1 - x^2/3``, cancellation-free for small ``x``."""
    x = _arr(x)
    out = np.empty_like(x)
    small = x < COTH_SUB_SERIES_CUT
    xs = x[small] * x[small]
    acc = np.zeros_like(xs)
    for coef in COTH_SERIES[:1:-1]:
        acc = acc * xs + coef
    out[small] = acc * xs * xs
    xl = x[~small]
    out[~small] = xl / np.tanh(xl) - 1.0 - xl * xl / 3.0
    return out


def _phi(x):
    # e^{-x} - 1 + x for 0 <= x <= PV_PHI_CUT
    acc = np.zeros_like(x)
    for coef in PHI_SERIES[::-1]:
        acc = acc * x + coef
    return acc * x * x


def pv_exp_sum(s, msq, c, m4, m6, m8):
    """``sum_j c_j exp(-s m_j^2)``.

    Moment expansion for tiny ``s``; while ``s m_2^2 < PV_PHI_CUT`` the two
    sum rules are used to rewrite it as ``sum_j c_j (e^{-x_j} - 1 + x_j)``,
    which removes the cancellation; plain exponentials beyond.
    """
    s = _arr(s)
    out = np.empty_like(s)
    small = s * msq[2] < PV_MOMENT_CUT
    ss = s[small]
    out[small] = ss * ss * (0.5 * m4 - ss * (m6 / 6.0 - ss * (m8 / 24.0)))
    mid = (~small) & (s * msq[2] < PV_PHI_CUT)
    sm = s[mid]
    out[mid] = c[0] * _phi(sm * msq[0]) + c[1] * _phi(sm * msq[1]) + c[2] * _phi(sm * msq[2])
    small |= mid
    sl = s[~small]
    out[~small] = (
        c[0] * np.exp(-sl * msq[0])
        + c[1] * np.exp(-sl * msq[1])
        + c[2] * np.exp(-sl * msq[2])
    )
    return out


def _psi(y):
    # log1p(y) - y for 0 <= y <= 1
    out = np.empty_like(y)
    small = y < PSI_SERIES_CUT
    ys = y[small]
    acc = np.zeros_like(ys)
    for coef in PSI_SERIES[::-1]:
        acc = acc * ys + coef
    out[small] = acc * ys * ys
    yl = y[~small]
    out[~small] = np.log1p(yl) - yl
    return out


def pv_log_sum(x, msq, c, m4, m6, m8):
    """``sum_j c_j log(m_j^2 + x)`` for ``x >= 0``.

    The ``log x`` parts cancel by the first sum rule.  Above the heaviest mass
    the second sum rule turns the rest into ``sum_j c_j (log1p(y_j) - y_j)``
    with ``y_j = m_j^2 / x``, and far above it into the moment expansion.
    """
    x = _arr(x)
    out = np.empty_like(x)
    large = msq[2] < PV_MOMENT_CUT * x
    xl = 1.0 / x[large]
    out[large] = -xl * xl * (0.5 * m4 - xl * (m6 / 3.0 - xl * (m8 / 4.0)))
    high = (~large) & (x >= msq[2])
    xh = x[high]
    out[high] = c[0] * _psi(msq[0] / xh) + c[1] * _psi(msq[1] / xh) + c[2] * _psi(msq[2] / xh)
    mid = (~(large | high)) & (x >= msq[0])
    xm = x[mid]
    out[mid] = (
        c[0] * np.log1p(msq[0] / xm)
        + c[1] * np.log1p(msq[1] / xm)
        + c[2] * np.log1p(msq[2] / xm)
    )
    low = ~(large | high | mid)
    xs = x[low]
    out[low] = (
        c[0] * np.log(msq[0] + xs)
        + c[1] * np.log(msq[1] + xs)
        + c[2] * np.log(msq[2] + xs)
    )
    return out


def _half_integer_terms(p):
    # sum_{n>=1} exp(-p (n - 1/2)^2) and sum (n-1/2)^2 exp(...) over a 2-D grid
    pmin = float(np.min(p))
    nmax = int(math.ceil(0.5 + math.sqrt(TAIL_EXPONENT / pmin))) + 1
    k = np.arange(nmax, dtype=np.float64) + 0.5
    k2 = k * k
    e = np.exp(-np.outer(p, k2))
    return e, k2


def theta2_direct(p):
    """``sum_{n in Z} exp(-p (n - 1/2)^2)`` summed termwise."""
    p = _arr(p)
    if p.size == 0:
        return p.copy()
    e, _ = _half_integer_terms(p)
    return 2.0 * np.sum(e[:, ::-1], axis=1)


def _alt_square_sum(a):
    # sum_{n>=1} (-1)^n exp(-a n^2) and sum (-1)^n n^2 exp(-a n^2), direct
    amin = float(np.min(a))
    nmax = int(math.ceil(math.sqrt(TAIL_EXPONENT / amin))) + 1
    n = np.arange(1, nmax + 1, dtype=np.float64)
    sign = np.where(n % 2 == 1, -1.0, 1.0)
    e = np.exp(-np.outer(a, n * n)) * sign
    return np.sum(e[:, ::-1], axis=1), np.sum((e * (n * n))[:, ::-1], axis=1)


def _theta4_product(a):
    # 1 + 2 sum_{n>=1} (-1)^n exp(-a n^2) by the Jacobi triple product
    out = np.empty_like(a)
    for i, ai in enumerate(a):
        kmax = int(math.ceil(TAIL_EXPONENT / ai)) + 1
        k = np.arange(1, kmax + 1, dtype=np.float64)
        logs = np.log(-np.expm1(-ai * k))
        # factors (1 - q^{2n}) for even k, (1 - q^{2n-1})^2 for odd k
        weights = np.where(k % 2 == 0, 1.0, 2.0)
        out[i] = math.exp(math.fsum(weights * logs))
    return out


def theta2_poisson(p):
    """Poisson-resummed ``theta2``: ``sqrt(pi/p) [1 + 2 sum (-1)^n e^{-pi^2 n^2/p}]``.

    When the bracket would lose digits to cancellation (``p > pi^2``) it is
    evaluated through its product representation instead of the sum.
    """
    p = _arr(p)
    out = np.empty_like(p)
    if p.size == 0:
        return out
    a = PI2 / p
    summed = p <= PI2
    if np.any(summed):
        s, _ = _alt_square_sum(a[summed])
        out[summed] = np.sqrt(PI / p[summed]) * (1.0 + 2.0 * s)
    if np.any(~summed):
        out[~summed] = np.sqrt(PI / p[~summed]) * _theta4_product(a[~summed])
    return out


def theta2(p, switch):
    """``theta2`` choosing the direct sum for ``p >= switch``, Poisson below."""
    p = _arr(p)
    out = np.empty_like(p)
    hi = p >= switch
    if np.any(hi):
        out[hi] = theta2_direct(p[hi])
    if np.any(~hi):
        out[~hi] = theta2_poisson(p[~hi])
    return out


def theta2_dp(p, switch):
    """Derivative of ``theta2`` with respect to the modular parameter ``p``."""
    p = _arr(p)
    out = np.empty_like(p)
    hi = p >= switch
    if np.any(hi):
        e, k2 = _half_integer_terms(p[hi])
        out[hi] = -2.0 * np.sum((e * k2)[:, ::-1], axis=1)
    if np.any(~hi):
        pl = p[~hi]
        a = PI2 / pl
        s, s2 = _alt_square_sum(a)
        out[~hi] = SQRT_PI * (
            -0.5 * pl**-1.5 * (1.0 + 2.0 * s) + 2.0 * pl**-2.5 * PI2 * s2
        )
    return out


def alt_gauss_sum(a, switch):
    """``sum_{n>=1} (-1)^n exp(-a n^2)``.

    Summed directly for ``a >= pi^2/switch``; otherwise through the dual
    series ``-1/2 + sqrt(pi/a) sum_{k>=1} exp(-pi^2 (k-1/2)^2 / a)``.
    """
    a = _arr(a)
    out = np.empty_like(a)
    direct = a * switch >= PI2
    if np.any(direct):
        out[direct], _ = _alt_square_sum(a[direct])
    if np.any(~direct):
        ad = a[~direct]
        e, _ = _half_integer_terms(PI2 / ad)
        out[~direct] = -0.5 + np.sqrt(PI / ad) * np.sum(e[:, ::-1], axis=1)
    return out


def _fermi(y):
    # 1 / (1 + e^y) for y >= 0
    e = np.exp(-y)
    return e / (1.0 + e)


def pv_fermi(ch, xj, c):
    """``sum_j c_j / (1 + exp(X_j ch))`` for ``X_j >= 0``."""
    ch = _arr(ch)
    return (
        c[0] * _fermi(xj[0] * ch)
        + c[1] * _fermi(xj[1] * ch)
        + c[2] * _fermi(xj[2] * ch)
    )


def _gt_term(y):
    e = np.exp(-y)
    d = 1.0 + e
    return e * (1.0 - y + e) / (d * d)


def pv_gt_cosh(ch, xj, c):
    """``sum_j c_j e^{-Y}(1 - Y + e^{-Y}) / (1 + e^{-Y})^2`` with ``Y = X_j ch``."""
    ch = _arr(ch)
    return (
        c[0] * _gt_term(xj[0] * ch)
        + c[1] * _gt_term(xj[1] * ch)
        + c[2] * _gt_term(xj[2] * ch)
    )


def _bessel_step(x):
    return np.minimum(0.25, 0.5 / np.sqrt(x))


def bessel_k01_scaled(x):
    """``exp(x) K_0(x)`` and ``exp(x) K_1(x)`` for ``x > 0``.

    Trapezoidal rule on the Sommerfeld integrand
    ``exp(-x (cosh t - 1)) cosh(nu t)``, which is even and analytic in a strip
    around the real axis, so the rule converges geometrically in ``1/h``.
    """
    x = _arr(x)
    out0 = np.empty_like(x)
    out1 = np.empty_like(x)
    if x.size == 0:
        return out0, out1
    h = _bessel_step(x)
    tmax = 2.0 * np.arcsinh(np.sqrt(TAIL_EXPONENT / (2.0 * x)))
    nsteps = np.ceil(tmax / h).astype(np.int64)
    # group by node count to keep the 2-D work bounded
    for n in np.unique(nsteps):
        sel = nsteps == n
        k = np.arange(n + 1, dtype=np.float64)
        t = np.outer(h[sel], k)
        sh = np.sinh(0.5 * t)
        f = np.exp(-2.0 * x[sel, None] * sh * sh)
        f[:, 0] *= 0.5
        ch = np.cosh(t)
        out0[sel] = h[sel] * np.sum(f[:, ::-1], axis=1)
        out1[sel] = h[sel] * np.sum((f * ch)[:, ::-1], axis=1)
    return out0, out1


def bessel_k01(x):
    """``K_0(x)`` and ``K_1(x)``; values below the double range flush to 0."""
    x = _arr(x)
    k0, k1 = bessel_k01_scaled(x)
    with np.errstate(under="ignore"):
        scale = np.exp(-x)
    return k0 * scale, k1 * scale
