"""Backend selection for the hot integrand kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementation in ``_kernels_py`` is loaded.  Setting the environment
variable ``PVQED_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

_FORCE_PY = os.environ.get("PVQED_PURE_PYTHON", "").strip() not in ("", "0")

if _FORCE_PY:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernels_py
        BACKEND = "python"

KERNEL_NAMES = (
    "coth_m1",
    "coth_m1_sub",
    "pv_exp_sum",
    "pv_log_sum",
    "theta2_direct",
    "theta2_poisson",
    "theta2",
    "theta2_dp",
    "alt_gauss_sum",
    "pv_fermi",
    "pv_gt_cosh",
    "bessel_k01_scaled",
    "bessel_k01",
)

coth_m1 = _impl.coth_m1
coth_m1_sub = _impl.coth_m1_sub
pv_exp_sum = _impl.pv_exp_sum
pv_log_sum = _impl.pv_log_sum
theta2_direct = _impl.theta2_direct
theta2_poisson = _impl.theta2_poisson
theta2 = _impl.theta2
theta2_dp = _impl.theta2_dp
alt_gauss_sum = _impl.alt_gauss_sum
pv_fermi = _impl.pv_fermi
pv_gt_cosh = _impl.pv_gt_cosh
bessel_k01_scaled = _impl.bessel_k01_scaled
bessel_k01 = _impl.bessel_k01


def backend_module(name: str):
    """Return the kernel module for ``name`` in ``{"python", "cython"}``."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")
