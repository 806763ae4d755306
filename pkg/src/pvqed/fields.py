"""Sampled magnetic fields and their local-density free energy.

A :class:`FieldGrid` holds ``B`` at the points ``origin + h * (i, j, k)``;
each sample stands for a cube of volume ``h^3``.  The energy is the midpoint
sum ``h^3 sum f(|B|)`` with ``f = f0_pv + ft_pv``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
from scipy.interpolate import BarycentricInterpolator
from scipy.ndimage import map_coordinates

from .ehlagrangian import total_density
from .errors import (
    DomainError,
    GridTooSmall,
    IncompleteGrid,
    NonUniformGrid,
    ParseError,
    ResampleError,
)
from .pvscheme import PauliVillarsScheme
from .quadrature import QuadratureConfig
from .series import DEFAULT_POLICY, SeriesPolicy

HEADER = ("x", "y", "z", "Bx", "By", "Bz")
_UNIFORM_RTOL = 1e-9


@dataclass(frozen=True)
class FieldGrid:
    """Uniform 3-D grid of field vectors; ``values`` has shape ``(nx, ny, nz, 3)``."""

    origin: tuple[float, float, float]
    spacing: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.spacing > 0.0:
            raise DomainError(f"spacing must be positive, got {self.spacing}")
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 4 or v.shape[3] != 3 or min(v.shape[:3]) < 1:
            raise DomainError(f"values must have shape (nx, ny, nz, 3), got {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(int(n) for n in self.values.shape[:3])

    @property
    def cell_volume(self) -> float:
        return self.spacing**3

    @property
    def volume(self) -> float:
        return self.cell_volume * int(np.prod(self.dims))

    def magnitude(self) -> np.ndarray:
        """``|B|`` at every sample."""
        return np.sqrt(np.sum(self.values**2, axis=-1))

    def axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(o + self.spacing * np.arange(n) for o, n in zip(self.origin, self.dims))

    def boundary_max(self) -> float:
        """Largest ``|B|`` on the outer faces, a proxy for truncated tails."""
        b = self.magnitude()
        faces = [b[0], b[-1], b[:, 0], b[:, -1], b[:, :, 0], b[:, :, -1]]
        return float(max(np.max(f) for f in faces))


@dataclass(frozen=True)
class EnergyReport:
    """Local-density energy of a grid and its ``epsilon``-rescaled value."""

    energy: float
    epsilon: float
    scaled_energy: float
    cells_clipped: int
    resampled_energy: float | None = None


# -- input -------------------------------------------------------------------


def _uniform_axis(values: np.ndarray, name: str) -> tuple[float, float | None]:
    u = np.unique(values)
    if len(u) == 1:
        return float(u[0]), None
    d = np.diff(u)
    h = (u[-1] - u[0]) / (len(u) - 1)
    if np.max(np.abs(d - h)) > _UNIFORM_RTOL * abs(h):
        raise NonUniformGrid(f"{name} coordinates are not uniformly spaced")
    return float(u[0]), float(h)


def load_field(path: str | Path) -> FieldGrid:
    """Read a grid from CSV with header ``x,y,z,Bx,By,Bz``.

    Rows may come in any order but must cover every point of the bounding
    box exactly once.

    Raises
    ------
    ParseError
        Wrong header, wrong column count, a non-numeric entry or duplicates.
    NonUniformGrid
        Spacing differs along or between axes.
    IncompleteGrid
        Some grid point has no row.
    """
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != HEADER:
            raise ParseError(f"{path}: expected header {','.join(HEADER)}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 6:
                raise ParseError(f"{path}:{lineno}: expected 6 columns, got {len(row)}")
            try:
                vals = [float(c) for c in row]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            if not all(math.isfinite(v) for v in vals):
                raise ParseError(f"{path}:{lineno}: non-finite value")
            rows.append(vals)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    data = np.asarray(rows)

    origin, steps = [], []
    for k, name in enumerate("xyz"):
        o, h = _uniform_axis(data[:, k], name)
        origin.append(o)
        steps.append(h)
    known = [h for h in steps if h is not None]
    if not known:
        raise ParseError(f"{path}: cannot infer spacing from a single point")
    h = known[0]
    if any(abs(s - h) > _UNIFORM_RTOL * h for s in known):
        raise NonUniformGrid(f"{path}: axis spacings differ: {known}")

    idx = np.rint((data[:, :3] - np.asarray(origin)) / h).astype(np.int64)
    dims = idx.max(axis=0) + 1
    flat = np.ravel_multi_index(idx.T, dims)
    if len(np.unique(flat)) != len(flat):
        raise ParseError(f"{path}: duplicate grid points")
    if len(flat) != int(np.prod(dims)):
        raise IncompleteGrid(
            f"{path}: {len(flat)} rows for a {dims[0]}x{dims[1]}x{dims[2]} grid"
        )
    values = np.empty((int(np.prod(dims)), 3))
    values[flat] = data[:, 3:]
    return FieldGrid(tuple(origin), h, values.reshape(tuple(dims) + (3,)))


def write_field(grid: FieldGrid, path: str | Path) -> None:
    """Write ``grid`` in the format read by :func:`load_field` (z fastest)."""
    xs, ys, zs = np.meshgrid(*grid.axes(), indexing="ij")
    table = np.column_stack([xs.ravel(), ys.ravel(), zs.ravel(), grid.values.reshape(-1, 3)])
    with Path(path).open("w", newline="") as fh:
        fh.write(",".join(HEADER) + "\n")
        for row in table:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


# -- analysis ----------------------------------------------------------------


def divergence(grid: FieldGrid) -> np.ndarray:
    """Central-difference ``div B`` on interior samples."""
    if min(grid.dims) < 3:
        raise GridTooSmall(f"need at least 3 samples per axis, got {grid.dims}")
    v = grid.values
    h2 = 2.0 * grid.spacing
    return (
        (v[2:, 1:-1, 1:-1, 0] - v[:-2, 1:-1, 1:-1, 0])
        + (v[1:-1, 2:, 1:-1, 1] - v[1:-1, :-2, 1:-1, 1])
        + (v[1:-1, 1:-1, 2:, 2] - v[1:-1, 1:-1, :-2, 2])
    ) / h2


def divergence_check(grid: FieldGrid) -> float:
    """Largest interior ``|div B|``."""
    return float(np.max(np.abs(divergence(grid))))


def make_test_field(
    kind: Literal["constant", "gaussian_loop"],
    *,
    n: int = 32,
    spacing: float = 0.25,
    b0: tuple[float, float, float] = (0.0, 0.0, 1.0),
    amplitude: float = 0.1,
    sigma: float = 1.0,
) -> FieldGrid:
    """Analytic divergence-free test fields on an ``n^3`` grid centred at 0.

    ``constant`` is ``B = b0`` everywhere.  ``gaussian_loop`` is
    ``B = curl(psi z^)`` with ``psi = A exp(-r^2 / 2 sigma^2)``, scaled so
    the largest ``|B|`` is ``amplitude``.
    """
    if n < 1 or not spacing > 0.0:
        raise DomainError(f"need n >= 1 and spacing > 0, got n={n}, spacing={spacing}")
    half = 0.5 * (n - 1) * spacing
    origin = (-half, -half, -half)
    if kind == "constant":
        b0 = np.asarray(b0, dtype=float)
        if b0.shape != (3,) or not np.all(np.isfinite(b0)):
            raise DomainError(f"b0 must be a finite 3-vector, got {b0}")
        values = np.broadcast_to(b0, (n, n, n, 3)).copy()
        return FieldGrid(origin, spacing, values)
    if kind == "gaussian_loop":
        if not sigma > 0.0 or not math.isfinite(amplitude) or amplitude < 0.0:
            raise DomainError(f"need sigma > 0 and amplitude >= 0, got {sigma}, {amplitude}")
        ax = origin[0] + spacing * np.arange(n)
        x, y, z = np.meshgrid(ax, ax, ax, indexing="ij")
        # peak of |grad psi| is A e^{-1/2} / sigma, at rho = sigma in z = 0
        a = amplitude * sigma * math.exp(0.5)
        psi = a * np.exp(-(x * x + y * y + z * z) / (2.0 * sigma * sigma))
        s2 = sigma * sigma
        values = np.stack([-y / s2 * psi, x / s2 * psi, np.zeros_like(psi)], axis=-1)
        return FieldGrid(origin, spacing, values)
    raise DomainError(f"unknown test field kind {kind!r}")


# -- energy ------------------------------------------------------------------


def _lobatto(n: int, a_max: float) -> np.ndarray:
    return 0.5 * a_max * (1.0 - np.cos(np.pi * np.arange(n + 1) / n))


class DensityTable:
    """Chebyshev-Lobatto interpolant of ``a -> f0_pv(a) + ft_pv(a, beta)`` on ``[0, a_max]``.

    The node count doubles until successive interpolants agree to ``tol``
    relative to the largest tabulated value.  Both endpoints are nodes, so
    ``f(0)`` and ``f(a_max)`` are reproduced exactly.
    """

    def __init__(self, a_max, beta, scheme, cfg=None, policy=DEFAULT_POLICY,
                 *, tol: float = 1e-10, n_start: int = 16, n_limit: int = 1024):
        self.a_max = float(a_max)
        self.converged = True
        self.extrapolated = False
        if self.a_max == 0.0:
            self._interp = None
            return

        def dens(a):
            p = total_density(float(a), beta, scheme, cfg, policy)
            self.converged &= p.converged
            self.extrapolated |= p.extrapolated
            return p.total

        n = n_start
        nodes = _lobatto(n, self.a_max)
        vals = np.array([dens(a) for a in nodes])
        while True:
            fine = _lobatto(2 * n, self.a_max)
            new = fine[1::2]
            new_vals = np.array([dens(a) for a in new])
            pred = BarycentricInterpolator(nodes, vals)(new)
            merged = np.empty(2 * n + 1)
            merged[0::2] = vals
            merged[1::2] = new_vals
            nodes, vals, n = fine, merged, 2 * n
            scale = max(np.max(np.abs(vals)), 1e-300)
            if np.max(np.abs(pred - new_vals)) <= tol * scale:
                break
            if n >= n_limit:
                self.converged = False
                break
        self.nodes = nodes
        self.vals = vals
        self._interp = BarycentricInterpolator(nodes, vals)

    def __call__(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        if self._interp is None:
            return np.zeros_like(a)
        out = self._interp(a)
        # exact values at the tabulated endpoints and nodes
        out = np.where(a == 0.0, 0.0, out)
        out = np.where(a == self.a_max, self.vals[-1], out)
        return out


def _energy(mags, cell_volume, beta, scheme, cfg, policy, method):
    a_max = float(np.max(mags)) if mags.size else 0.0
    if method == "table":
        f = DensityTable(a_max, beta, scheme, cfg, policy)(mags.ravel())
    elif method == "direct":
        f = np.array([total_density(a, beta, scheme, cfg, policy).total if a > 0 else 0.0
                      for a in mags.ravel()])
    else:
        raise DomainError(f"unknown energy method {method!r}")
    return cell_volume * math.fsum(f)


def cells_clipped(grid: FieldGrid, scheme: PauliVillarsScheme) -> int:
    """Samples whose ``|B|`` exceeds the heaviest regulator mass squared."""
    return int(np.count_nonzero(grid.magnitude() > scheme.masses_sq[2]))


def local_energy(
    grid: FieldGrid,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    policy: SeriesPolicy = DEFAULT_POLICY,
    *,
    method: Literal["table", "direct"] = "table",
) -> float:
    """Midpoint sum ``h^3 sum_cells (f0_pv + ft_pv)(|B|)``.

    ``method="direct"`` evaluates the density at every sample; the default
    tabulates it once on ``[0, max |B|]`` and interpolates.
    """
    return _energy(grid.magnitude(), grid.cell_volume, beta, scheme, cfg, policy, method)


def resample(grid: FieldGrid, epsilon: float) -> FieldGrid:
    """Grid for ``x -> B(epsilon x)`` at the original spacing.

    The physical extent grows by ``1/epsilon``; values come from cubic-spline
    interpolation of the samples, with zero outside the original box.
    """
    if not epsilon > 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    h = grid.spacing
    dims = grid.dims
    new_dims = []
    for n in dims:
        m = int(math.floor((n - 1) / epsilon + 1e-9)) + 1
        if m < 3:
            raise ResampleError(f"epsilon={epsilon} leaves {m} samples on an axis of {n}")
        new_dims.append(m)
    new_origin = tuple(o / epsilon for o in grid.origin)
    # sample epsilon * y for y on the new grid, as fractional source indices
    coords = [
        (epsilon * (no + h * np.arange(m)) - o) / h
        for no, m, o in zip(new_origin, new_dims, grid.origin)
    ]
    mesh = np.meshgrid(*coords, indexing="ij")
    out = np.empty(tuple(new_dims) + (3,))
    for c in range(3):
        out[..., c] = map_coordinates(grid.values[..., c], mesh, order=3, mode="constant", cval=0.0)
    return FieldGrid(new_origin, h, out)


def scaled_energy(
    grid: FieldGrid,
    epsilon: float,
    beta: float,
    scheme: PauliVillarsScheme,
    cfg: QuadratureConfig | None = None,
    policy: SeriesPolicy = DEFAULT_POLICY,
    *,
    verify: bool = True,
) -> EnergyReport:
    """Local-density energy of ``B(epsilon x)`` predicted as ``epsilon^-3`` times that of ``B``.

    With ``verify`` the resampled grid from :func:`resample` is also summed
    directly and reported as ``resampled_energy``.

    Raises
    ------
    ResampleError
        ``verify`` is set and the resampled grid has fewer than 3 samples on an axis.
    """
    if not epsilon > 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    energy = local_energy(grid, beta, scheme, cfg, policy)
    resampled = None
    if verify:
        if epsilon == 1.0:
            resampled = energy
        else:
            resampled = local_energy(resample(grid, epsilon), beta, scheme, cfg, policy)
    return EnergyReport(
        energy=energy,
        epsilon=float(epsilon),
        scaled_energy=energy / epsilon**3,
        cells_clipped=cells_clipped(grid, scheme),
        resampled_energy=resampled,
    )
