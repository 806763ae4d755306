# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_kernels_py``.

Same signatures, same branch thresholds; loops run element by element in C so
no temporary 2-D arrays are formed.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport (exp, expm1, log, log1p, sqrt, tanh, sinh, cosh,
                        asinh, ceil, fmin, fabs, M_PI)

cnp.import_array()

from ._kernels_py import (COTH_SERIES, COTH_SERIES_CUT, COTH_SUB_SERIES_CUT,
                          PHI_SERIES, PSI_SERIES, PSI_SERIES_CUT, PV_MOMENT_CUT,
                          PV_PHI_CUT, TAIL_EXPONENT)

cdef double PI2 = M_PI * M_PI
cdef double SQRT_PI = sqrt(M_PI)
cdef double _TAIL = TAIL_EXPONENT
cdef double _CUT = COTH_SERIES_CUT
cdef double _SUB_CUT = COTH_SUB_SERIES_CUT
cdef double _MOMENT_CUT = PV_MOMENT_CUT
cdef double _PSI_CUT = PSI_SERIES_CUT
cdef double _PHI_CUT = PV_PHI_CUT
cdef double _COEF[17]
cdef double _PHI[19]
cdef double _PSI[17]
cdef int _i
for _i in range(17):
    _COEF[_i] = COTH_SERIES[_i]
for _i in range(19):
    _PHI[_i] = PHI_SERIES[_i]
for _i in range(17):
    _PSI[_i] = PSI_SERIES[_i]


def _arr(x):
    return np.ascontiguousarray(x, dtype=np.float64)


cdef inline double _coth_m1_sub(double x) nogil:
    cdef double xs, acc
    cdef int k
    if x < _SUB_CUT:
        xs = x * x
        acc = 0.0
        for k in range(16, 1, -1):
            acc = acc * xs + _COEF[k]
        return acc * xs * xs
    return x / tanh(x) - 1.0 - x * x / 3.0


cdef inline double _coth_m1(double x) nogil:
    cdef double xs
    if x < _CUT:
        xs = x * x
        return xs * (1.0 / 3.0 + xs * (-1.0 / 45.0 + xs * (2.0 / 945.0)))
    if x < _SUB_CUT:
        return x * x / 3.0 + _coth_m1_sub(x)
    return x / tanh(x) - 1.0


def coth_m1(x):
    cdef double[::1] xv = _arr(x)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        ov[i] = _coth_m1(xv[i])
    return out


def coth_m1_sub(x):
    cdef double[::1] xv = _arr(x)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        ov[i] = _coth_m1_sub(xv[i])
    return out


cdef inline double _psi(double y) nogil:
    cdef double acc = 0.0
    cdef int k
    if y >= _PSI_CUT:
        return log1p(y) - y
    for k in range(16, -1, -1):
        acc = acc * y + _PSI[k]
    return acc * y * y


cdef inline double _phi(double x) nogil:
    cdef double acc = 0.0
    cdef int k
    for k in range(18, -1, -1):
        acc = acc * x + _PHI[k]
    return acc * x * x


def pv_exp_sum(s, msq, c, double m4, double m6, double m8):
    cdef double[::1] sv = _arr(s)
    out = np.empty(sv.shape[0])
    cdef double[::1] ov = out
    cdef double a0 = msq[0], a1 = msq[1], a2 = msq[2]
    cdef double c0 = c[0], c1 = c[1], c2 = c[2]
    cdef double si
    cdef Py_ssize_t i
    for i in range(sv.shape[0]):
        si = sv[i]
        if si * a2 < _MOMENT_CUT:
            ov[i] = si * si * (0.5 * m4 - si * (m6 / 6.0 - si * (m8 / 24.0)))
        elif si * a2 < _PHI_CUT:
            ov[i] = c0 * _phi(si * a0) + c1 * _phi(si * a1) + c2 * _phi(si * a2)
        else:
            ov[i] = c0 * exp(-si * a0) + c1 * exp(-si * a1) + c2 * exp(-si * a2)
    return out


def pv_log_sum(x, msq, c, double m4, double m6, double m8):
    cdef double[::1] xv = _arr(x)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef double a0 = msq[0], a1 = msq[1], a2 = msq[2]
    cdef double c0 = c[0], c1 = c[1], c2 = c[2]
    cdef double xi, r
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        xi = xv[i]
        if a2 < _MOMENT_CUT * xi:
            r = 1.0 / xi
            ov[i] = -r * r * (0.5 * m4 - r * (m6 / 3.0 - r * (m8 / 4.0)))
        elif xi >= a2:
            ov[i] = c0 * _psi(a0 / xi) + c1 * _psi(a1 / xi) + c2 * _psi(a2 / xi)
        elif xi >= a0:
            ov[i] = c0 * log1p(a0 / xi) + c1 * log1p(a1 / xi) + c2 * log1p(a2 / xi)
        else:
            ov[i] = c0 * log(a0 + xi) + c1 * log(a1 + xi) + c2 * log(a2 + xi)
    return out


cdef inline int _nmax_half(double p) nogil:
    return <int>ceil(0.5 + sqrt(_TAIL / p)) + 1


cdef inline int _nmax_int(double a) nogil:
    return <int>ceil(sqrt(_TAIL / a)) + 1


cdef double _theta2_direct(double p) nogil:
    cdef int n = _nmax_half(p)
    cdef int k
    cdef double acc = 0.0, h
    for k in range(n - 1, -1, -1):
        h = k + 0.5
        acc += exp(-p * h * h)
    return 2.0 * acc


cdef double _theta2_direct_dp(double p) nogil:
    cdef int n = _nmax_half(p)
    cdef int k
    cdef double acc = 0.0, h2
    for k in range(n - 1, -1, -1):
        h2 = (k + 0.5) * (k + 0.5)
        acc += h2 * exp(-p * h2)
    return -2.0 * acc


cdef void _alt_square(double a, double* s0, double* s2) nogil:
    cdef int n = _nmax_int(a)
    cdef int k
    cdef double e, acc0 = 0.0, acc2 = 0.0
    for k in range(n, 0, -1):
        e = exp(-a * k * k)
        if k % 2 == 1:
            e = -e
        acc0 += e
        acc2 += e * k * k
    s0[0] = acc0
    s2[0] = acc2


cdef double _theta4_product(double a) nogil:
    cdef int kmax = <int>ceil(_TAIL / a) + 1
    cdef int k
    cdef double acc = 0.0, comp = 0.0, lg, t
    # Neumaier summation: the log-sum is large and long for small a
    for k in range(1, kmax + 1):
        lg = log(-expm1(-a * k))
        if k % 2 == 1:
            lg = 2.0 * lg
        t = acc + lg
        if fabs(acc) >= fabs(lg):
            comp += (acc - t) + lg
        else:
            comp += (lg - t) + acc
        acc = t
    return exp(acc + comp)


cdef double _theta2_poisson(double p) nogil:
    cdef double a = PI2 / p
    cdef double s0, s2
    if p <= PI2:
        _alt_square(a, &s0, &s2)
        return sqrt(M_PI / p) * (1.0 + 2.0 * s0)
    return sqrt(M_PI / p) * _theta4_product(a)


def theta2_direct(p):
    cdef double[::1] pv = _arr(p)
    out = np.empty(pv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(pv.shape[0]):
        ov[i] = _theta2_direct(pv[i])
    return out


def theta2_poisson(p):
    cdef double[::1] pv = _arr(p)
    out = np.empty(pv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(pv.shape[0]):
        ov[i] = _theta2_poisson(pv[i])
    return out


def theta2(p, double switch):
    cdef double[::1] pv = _arr(p)
    out = np.empty(pv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(pv.shape[0]):
        if pv[i] >= switch:
            ov[i] = _theta2_direct(pv[i])
        else:
            ov[i] = _theta2_poisson(pv[i])
    return out


def theta2_dp(p, double switch):
    cdef double[::1] pv = _arr(p)
    out = np.empty(pv.shape[0])
    cdef double[::1] ov = out
    cdef double pi_, s0, s2, r
    cdef Py_ssize_t i
    for i in range(pv.shape[0]):
        pi_ = pv[i]
        if pi_ >= switch:
            ov[i] = _theta2_direct_dp(pi_)
        else:
            _alt_square(PI2 / pi_, &s0, &s2)
            r = 1.0 / (pi_ * sqrt(pi_))
            ov[i] = SQRT_PI * r * (-0.5 * (1.0 + 2.0 * s0) + 2.0 * PI2 * s2 / pi_)
    return out


def alt_gauss_sum(a, double switch):
    cdef double[::1] av = _arr(a)
    out = np.empty(av.shape[0])
    cdef double[::1] ov = out
    cdef double ai, s0, s2
    cdef Py_ssize_t i
    for i in range(av.shape[0]):
        ai = av[i]
        if ai * switch >= PI2:
            _alt_square(ai, &s0, &s2)
            ov[i] = s0
        else:
            ov[i] = -0.5 + sqrt(M_PI / ai) * 0.5 * _theta2_direct(PI2 / ai)
    return out


cdef inline double _fermi(double y) nogil:
    cdef double e = exp(-y)
    return e / (1.0 + e)


cdef inline double _gt_term(double y) nogil:
    cdef double e = exp(-y)
    cdef double d = 1.0 + e
    return e * (1.0 - y + e) / (d * d)


def pv_fermi(ch, xj, c):
    cdef double[::1] cv = _arr(ch)
    out = np.empty(cv.shape[0])
    cdef double[::1] ov = out
    cdef double x0 = xj[0], x1 = xj[1], x2 = xj[2]
    cdef double c0 = c[0], c1 = c[1], c2 = c[2]
    cdef double t
    cdef Py_ssize_t i
    for i in range(cv.shape[0]):
        t = cv[i]
        ov[i] = c0 * _fermi(x0 * t) + c1 * _fermi(x1 * t) + c2 * _fermi(x2 * t)
    return out


def pv_gt_cosh(ch, xj, c):
    cdef double[::1] cv = _arr(ch)
    out = np.empty(cv.shape[0])
    cdef double[::1] ov = out
    cdef double x0 = xj[0], x1 = xj[1], x2 = xj[2]
    cdef double c0 = c[0], c1 = c[1], c2 = c[2]
    cdef double t
    cdef Py_ssize_t i
    for i in range(cv.shape[0]):
        t = cv[i]
        ov[i] = c0 * _gt_term(x0 * t) + c1 * _gt_term(x1 * t) + c2 * _gt_term(x2 * t)
    return out


cdef void _bessel_scaled(double x, double* k0, double* k1) nogil:
    cdef double h = fmin(0.25, 0.5 / sqrt(x))
    cdef double tmax = 2.0 * asinh(sqrt(_TAIL / (2.0 * x)))
    cdef int n = <int>ceil(tmax / h)
    cdef int k
    cdef double sh, chh, s1, c1, tmp, f, a0 = 0.0, a1 = 0.0
    # sinh(k h / 2), cosh(k h / 2) by rotation, resynchronised every 16 steps
    s1 = sinh(0.5 * h)
    c1 = cosh(0.5 * h)
    sh = 0.0
    chh = 1.0
    for k in range(1, n + 1):
        if k % 16 == 0:
            sh = sinh(0.5 * k * h)
            chh = cosh(0.5 * k * h)
        else:
            tmp = sh * c1 + chh * s1
            chh = chh * c1 + sh * s1
            sh = tmp
        f = exp(-2.0 * x * sh * sh)
        a0 += f
        a1 += f * (1.0 + 2.0 * sh * sh)
    k0[0] = h * (a0 + 0.5)
    k1[0] = h * (a1 + 0.5)


def bessel_k01_scaled(x):
    cdef double[::1] xv = _arr(x)
    o0 = np.empty(xv.shape[0])
    o1 = np.empty(xv.shape[0])
    cdef double[::1] v0 = o0
    cdef double[::1] v1 = o1
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        _bessel_scaled(xv[i], &v0[i], &v1[i])
    return o0, o1


def bessel_k01(x):
    cdef double[::1] xv = _arr(x)
    o0 = np.empty(xv.shape[0])
    o1 = np.empty(xv.shape[0])
    cdef double[::1] v0 = o0
    cdef double[::1] v1 = o1
    cdef double a, b, sc
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        _bessel_scaled(xv[i], &a, &b)
        sc = exp(-xv[i])
        v0[i] = a * sc
        v1[i] = b * sc
    return o0, o1
