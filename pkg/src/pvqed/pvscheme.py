"""Pauli-Villars mass/coefficient schemes with two auxiliary fields.

All quantities are dimensionless numbers in natural units (hbar = c = k = e = 1).
Masses, momenta and temperatures carry mass dimension one, field strengths
``|B|`` and proper times ``1/s`` carry mass dimension two.  Choosing
``m0 = 1`` measures everything in units of the electron mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegenerateMasses


@dataclass(frozen=True)
class PauliVillarsScheme:
    """Masses ``m0 < m1 < m2`` and coefficients obeying both sum rules.

    Build instances with :func:`make_scheme`; the coefficients and cached
    moments are derived, not free parameters.
    """

    masses: tuple[float, float, float]
    coeffs: tuple[float, float, float]
    lam: float
    moment4: float
    moment6: float
    moment8: float
    masses_sq: tuple[float, float, float] = field(repr=False)

    @property
    def log_lambda(self) -> float:
        return math.log(self.lam)

    def sum_rule_residuals(self) -> tuple[float, float]:
        """Relative residuals of ``sum c_j`` and ``sum c_j m_j^2``."""
        c, m2 = self.coeffs, self.masses_sq
        r0 = math.fsum(c) / math.fsum(abs(x) for x in c)
        terms = [cj * mj for cj, mj in zip(c, m2)]
        r2 = math.fsum(terms) / math.fsum(abs(t) for t in terms)
        return abs(r0), abs(r2)


def make_scheme(m0: float, m1: float, m2: float) -> PauliVillarsScheme:
    """Construct the unique two-regulator scheme for the given masses.

    Raises
    ------
    DegenerateMasses
        Unless ``0 < m0 < m1 < m2``.
    """
    m0, m1, m2 = float(m0), float(m1), float(m2)
    if not (math.isfinite(m2) and 0.0 < m0 < m1 < m2):
        raise DegenerateMasses(
            f"need 0 < m0 < m1 < m2, got ({m0!r}, {m1!r}, {m2!r})"
        )
    s0, s1, s2 = m0 * m0, m1 * m1, m2 * m2
    denom = s2 - s1
    if denom <= 0.0:
        raise DegenerateMasses(f"m1 and m2 coincide in floating point: {m1!r}")
    c1 = (s0 - s2) / denom
    c2 = (s1 - s0) / denom
    coeffs = (1.0, c1, c2)
    msq = (s0, s1, s2)
    log_lam2 = -math.fsum(c * math.log(s) for c, s in zip(coeffs, msq))
    return PauliVillarsScheme(
        masses=(m0, m1, m2),
        coeffs=coeffs,
        lam=math.exp(0.5 * log_lam2),
        moment4=math.fsum(c * s**2 for c, s in zip(coeffs, msq)),
        moment6=math.fsum(c * s**3 for c, s in zip(coeffs, msq)),
        moment8=math.fsum(c * s**4 for c, s in zip(coeffs, msq)),
        masses_sq=msq,
    )


def averaged_cutoff(scheme: PauliVillarsScheme) -> float:
    """Averaged ultraviolet cutoff, ``log(Lambda^2) = -sum c_j log(m_j^2)``."""
    return scheme.lam
