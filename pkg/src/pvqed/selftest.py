"""Identity and oracle checks run by ``pvqed selftest``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .quadrature import QuadratureConfig, integrate_finite


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    oracle: float
    tol: float

    @property
    def rel_diff(self) -> float:
        if self.value == self.oracle:
            return 0.0
        return abs(self.value - self.oracle) / max(abs(self.oracle), 1e-300)

    @property
    def passed(self) -> bool:
        return self.rel_diff <= self.tol


def _checks(cfg: QuadratureConfig) -> Iterator[tuple[str, Callable[[], tuple[float, float]], float]]:
    from . import ehlagrangian as eh
    from . import oracle, response, special
    from .pvscheme import make_scheme

    s123 = make_scheme(1.0, 2.0, 3.0)

    yield "sum_rule_c", lambda: (1.0 + math.fsum(s123.coeffs), 1.0), 1e-12
    yield "lambda_scaling", lambda: (make_scheme(7.0, 14.0, 21.0).lam, s123.lam), 1e-12
    yield "theta2_poisson", lambda: (special.theta2_poisson(0.37, 1.3),
                                     special.theta2_direct(0.37, 1.3)), 1e-10
    yield "bessel_k0_1", lambda: (special.bessel_k(0, 1.0, cfg), 0.42102443824070834), 1e-12
    for n in (1, 2, 3):
        yield (f"fermi_dirac_{n}",
               (lambda n=n: (special.fermi_dirac_quadrature(n, cfg), special.fermi_dirac_integral(n))),
               1e-10)
    yield "m0_at_zero", lambda: (response.m0_response(0.0, s123, cfg),
                                 2.0 * s123.log_lambda / (3.0 * math.pi)), 1e-8
    yield "gt_bessel_vs_coshint", lambda: (response.gt_bessel(1.0, 1.0, s123, cfg),
                                           response.gt_coshint(1.0, 1.0, s123, cfg)), 1e-6
    yield "mt_vs_oracle", lambda: (response.mt_response(1.0, 1.0, s123, cfg),
                                   oracle.mt_oracle(1.0, 1.0, s123, cfg)), 1e-6

    def g_average():
        avg = integrate_finite(lambda b: response.g_total(1.0, float(b), s123, cfg),
                               0.0, 1.0, cfg, vectorized=False).value
        rhs = (response.m0_response(1.0, s123, cfg)
               + response.mt_response(1.0, 1.0, s123, cfg)) / (8.0 * math.pi)
        return avg, rhs

    yield "g_average", g_average, 1e-6
    yield "ft_vs_bessel_oracle", lambda: (eh.ft_pv(1.0, 1.0, s123, cfg),
                                          oracle.ft_bessel_oracle(1.0, 1.0, s123)), 1e-6
    yield "ft_vacuum_massless_limit", lambda: (eh.ft_vacuum_single(1.0, 1e-3, cfg),
                                               -7.0 * math.pi**2 / 180.0), 1e-3

    def decomposition():
        a = 1.0
        rhs = math.fsum(c * eh.f0_single(a, m, cfg) for c, m in zip(s123.coeffs, s123.masses))
        rhs += a * a * s123.log_lambda / (12.0 * math.pi**2)
        return eh.f0_pv(a, s123, cfg), rhs

    yield "f0_decomposition", decomposition, 1e-8
    yield "tanh_matsubara", lambda: (oracle.tanh_partial_sum(1.0, 10_000) + 2.0 / (math.pi**2 * 10_000),
                                     math.tanh(1.0)), 1e-8
    yield "simpson_cubic", lambda: (oracle.reference_quadrature(lambda x: x**3 + x**2, 0.0, 1.0, 2),
                                    7.0 / 12.0), 1e-14


def run_checks(cfg: QuadratureConfig | None = None) -> Iterator[Check]:
    """Evaluate every check lazily, in a fixed order."""
    cfg = cfg or QuadratureConfig()
    for name, fn, tol in _checks(cfg):
        value, ref = fn()
        yield Check(name, float(np.asarray(value)), float(ref), tol)
