"""Command-line interface: CSV tables of schemes, responses, densities and field energies.

Exit codes: 0 success, 2 usage error, 3 invalid input (domain), 4 a
quadrature or series failed to converge (rows are still written, flagged in
a trailing ``converged`` column) or a self-test check failed, 5 I/O error.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .errors import (
    DomainError,
    GridTooSmall,
    IncompleteGrid,
    NonFiniteEvaluation,
    NonUniformGrid,
    ParseError,
    ResampleError,
    SeriesTruncation,
)
from .quadrature import QuadratureConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4
EXIT_IO = 5

THREADS_ENV = "PVQED_THREADS"
UNITS_NOTE = "natural units hbar=c=k=e=1"


@dataclass
class RunConfig:
    """Validated command-line options."""

    subcommand: str
    masses: tuple[float, float, float] | None = None
    beta: float | None = None
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    out: Path | None = None
    threads: int = 1
    grid: dict = field(default_factory=dict)

    @property
    def quad(self) -> QuadratureConfig:
        return QuadratureConfig(rel_tol=self.rel_tol, abs_tol=self.abs_tol)


# -- parsing -----------------------------------------------------------------


def _masses(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if len(parts) != 3 or not all(math.isfinite(p) for p in parts):
        raise argparse.ArgumentTypeError(f"need three finite masses m0,m1,m2, got {text!r}")
    return parts


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def _nonneg(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v >= 0.0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be finite and >= 0, got {text!r}")
    return v


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text!r}")
    return v


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvqed",
        description="Pauli-Villars regularised QED vacuum energy in magnetic fields "
        f"({UNITS_NOTE}).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rel-tol", type=_positive, default=1e-10)
    common.add_argument("--abs-tol", type=_nonneg, default=1e-14)
    common.add_argument("--out", type=Path, default=None, help="output CSV (default stdout)")
    common.add_argument(
        "--threads", type=_count, default=_default_threads(),
        help=f"worker processes (default ${THREADS_ENV} or 1)",
    )

    masses = argparse.ArgumentParser(add_help=False)
    masses.add_argument("--masses", type=_masses, required=True, metavar="M0,M1,M2")

    thermal = argparse.ArgumentParser(add_help=False)
    group = thermal.add_mutually_exclusive_group(required=True)
    group.add_argument("--beta", type=_positive, help="inverse temperature (inf allowed)")
    group.add_argument("--temperature", type=_nonneg, help="temperature T, beta = 1/T")

    sub.add_parser("scheme", parents=[masses, common], help="PV coefficients and cutoff")

    p = sub.add_parser("response", parents=[masses, thermal, common], help="M0, MT table")
    p.add_argument("--q-min", type=_nonneg, required=True)
    p.add_argument("--q-max", type=_nonneg, required=True)
    p.add_argument("--q-steps", type=_count, required=True)
    p.add_argument("--q-log", action="store_true", help="log-spaced q grid")

    p = sub.add_parser("lagrangian", parents=[masses, thermal, common], help="f0, fT table")
    p.add_argument("--a-min", type=_nonneg, required=True)
    p.add_argument("--a-max", type=_nonneg, required=True)
    p.add_argument("--a-steps", type=_count, required=True)
    p.add_argument("--a-log", action="store_true", help="log-spaced a grid")

    p = sub.add_parser("density", parents=[masses, thermal, common], help="field energy")
    p.add_argument("--field", type=Path, required=True)
    p.add_argument("--epsilon", type=_positive, default=1.0)
    p.add_argument("--max-divergence", type=_nonneg, default=None,
                   help="refuse grids whose interior |div B| exceeds this")
    p.add_argument("--verify", action="store_true",
                   help="also sum the resampled grid and report it on stderr")

    sub.add_parser("selftest", parents=[common], help="run the oracle identity checks")
    return parser


def _grid_values(lo: float, hi: float, n: int, log: bool, flag: str, parser) -> np.ndarray:
    if hi < lo:
        parser.error(f"--{flag}-max must be >= --{flag}-min")
    if log:
        if lo <= 0.0:
            parser.error(f"--{flag}-log needs --{flag}-min > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    """Parse and validate ``argv``; usage errors exit with status 2."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    beta = None
    if getattr(ns, "beta", None) is not None:
        beta = ns.beta
    elif getattr(ns, "temperature", None) is not None:
        beta = math.inf if ns.temperature == 0.0 else 1.0 / ns.temperature
    grid: dict = {}
    if ns.subcommand == "response":
        grid["q"] = _grid_values(ns.q_min, ns.q_max, ns.q_steps, ns.q_log, "q", parser)
    elif ns.subcommand == "lagrangian":
        grid["a"] = _grid_values(ns.a_min, ns.a_max, ns.a_steps, ns.a_log, "a", parser)
    elif ns.subcommand == "density":
        grid.update(field=ns.field, epsilon=ns.epsilon, max_divergence=ns.max_divergence,
                    verify=ns.verify)
    return RunConfig(
        subcommand=ns.subcommand,
        masses=getattr(ns, "masses", None),
        beta=beta,
        rel_tol=ns.rel_tol,
        abs_tol=ns.abs_tol,
        out=ns.out,
        threads=ns.threads,
        grid=grid,
    )


# -- output ------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def _header_line(cfg: RunConfig) -> str:
    parts = [f"pvqed {__version__}", cfg.subcommand]
    if cfg.masses is not None:
        parts.append("masses=" + ",".join(_fmt(m) for m in cfg.masses))
    if cfg.beta is not None:
        parts.append(f"beta={_fmt(cfg.beta)}")
    parts += [f"rel_tol={_fmt(cfg.rel_tol)}", f"abs_tol={_fmt(cfg.abs_tol)}", UNITS_NOTE]
    return "# " + "; ".join(parts) + "\n"


def render_csv(cfg: RunConfig, columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(_header_line(cfg))
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_atomic(path: Path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        write_atomic(cfg.out, text)


# -- workers (top level so they pickle) ----------------------------------------


def _response_row(args):
    from .pvscheme import make_scheme
    from .response import response_point

    q, beta, masses, rel_tol, abs_tol = args
    p = response_point(q, beta, make_scheme(*masses), QuadratureConfig(rel_tol, abs_tol))
    return (p.q, p.m0_value, p.mt_value, p.total, p.err), p.converged


def _lagrangian_row(args):
    from .ehlagrangian import total_density
    from .pvscheme import make_scheme

    a, beta, masses, rel_tol, abs_tol = args
    p = total_density(a, beta, make_scheme(*masses), QuadratureConfig(rel_tol, abs_tol))
    return (p.a, p.f0, p.ft, p.total, p.extrapolated), p.converged


def _sweep(fn: Callable, tasks: list, threads: int) -> list:
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
        # map preserves input order, so output does not depend on scheduling
        return list(pool.map(fn, tasks))


def _table(cfg: RunConfig, columns, results) -> tuple[str, int]:
    rows = [r for r, _ in results]
    flags = [ok for _, ok in results]
    code = EXIT_OK
    if not all(flags):
        columns = list(columns) + ["converged"]
        rows = [tuple(r) + (ok,) for r, ok in zip(rows, flags)]
        code = EXIT_CONVERGENCE
    return render_csv(cfg, columns, rows), code


# -- subcommands -------------------------------------------------------------


def _run_scheme(cfg: RunConfig) -> int:
    from .pvscheme import make_scheme

    s = make_scheme(*cfg.masses)
    r0, r2 = s.sum_rule_residuals()
    cols = ["m0", "m1", "m2", "c0", "c1", "c2", "lambda", "residual_sum_c", "residual_sum_cm2"]
    _emit(cfg, render_csv(cfg, cols, [(*s.masses, *s.coeffs, s.lam, r0, r2)]))
    return EXIT_OK


def _run_response(cfg: RunConfig) -> int:
    from .pvscheme import make_scheme

    make_scheme(*cfg.masses)  # fail fast on a bad scheme
    tasks = [(float(q), cfg.beta, cfg.masses, cfg.rel_tol, cfg.abs_tol) for q in cfg.grid["q"]]
    text, code = _table(cfg, ["q", "M0", "MT", "Mtotal", "err"],
                        _sweep(_response_row, tasks, cfg.threads))
    _emit(cfg, text)
    return code


def _run_lagrangian(cfg: RunConfig) -> int:
    from .pvscheme import make_scheme

    make_scheme(*cfg.masses)
    tasks = [(float(a), cfg.beta, cfg.masses, cfg.rel_tol, cfg.abs_tol) for a in cfg.grid["a"]]
    text, code = _table(cfg, ["a", "f0", "ft", "total", "extrapolated"],
                        _sweep(_lagrangian_row, tasks, cfg.threads))
    _emit(cfg, text)
    return code


def _run_density(cfg: RunConfig) -> int:
    from .fields import DensityTable, cells_clipped, divergence_check, load_field, resample
    from .pvscheme import make_scheme

    scheme = make_scheme(*cfg.masses)
    grid = load_field(cfg.grid["field"])
    div = divergence_check(grid)
    limit = cfg.grid["max_divergence"]
    if limit is not None and div > limit:
        raise DomainError(f"max interior |div B| = {div:g} exceeds --max-divergence {limit:g}")
    print(f"boundary max |B| = {grid.boundary_max()!r}", file=sys.stderr)

    eps = cfg.grid["epsilon"]
    mags = grid.magnitude()
    table = DensityTable(float(np.max(mags)), cfg.beta, scheme, cfg.quad)
    energy = grid.cell_volume * math.fsum(table(mags.ravel()))
    ok = table.converged
    if cfg.grid["verify"]:
        rg = resample(grid, eps)
        rmags = rg.magnitude()
        rtable = DensityTable(float(np.max(rmags)), cfg.beta, scheme, cfg.quad)
        resampled = rg.cell_volume * math.fsum(rtable(rmags.ravel()))
        print(f"resampled energy = {resampled!r}", file=sys.stderr)
    row = (energy, eps, energy / eps**3, cells_clipped(grid, scheme), div)
    text, code = _table(cfg, ["energy", "epsilon", "scaled_energy", "cells_clipped",
                              "max_divergence"], [(row, ok)])
    _emit(cfg, text)
    return code


def _run_selftest(cfg: RunConfig) -> int:
    from .selftest import run_checks

    rows = []
    failed = False
    for check in run_checks(cfg.quad):
        rows.append((check.name, check.value, check.oracle, check.rel_diff))
        if not check.passed:
            failed = True
            break
    _emit(cfg, render_csv(cfg, ["check", "value", "oracle", "rel_diff"], rows))
    if failed:
        print(f"selftest failed: {rows[-1][0]}", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


_RUNNERS = {
    "scheme": _run_scheme,
    "response": _run_response,
    "lagrangian": _run_lagrangian,
    "density": _run_density,
    "selftest": _run_selftest,
}


def run(cfg: RunConfig) -> int:
    """Execute ``cfg`` and map library errors onto exit codes."""
    try:
        return _RUNNERS[cfg.subcommand](cfg)
    except (DomainError, ResampleError, GridTooSmall, ParseError, NonUniformGrid,
            IncompleteGrid) as exc:
        print(f"pvqed: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (SeriesTruncation, NonFiniteEvaluation) as exc:
        print(f"pvqed: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"pvqed: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
