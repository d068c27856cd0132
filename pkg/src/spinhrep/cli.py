"""Command-line front end.

Exit codes: 0 success, 2 usage, 3 data validation, 4 numerical consistency.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import dynamics, hrep, tomo, xkernel
from .formats import FRAME_COLUMNS, H_COLUMNS, MEANS_COLUMNS, TOMO_COLUMNS, SchemaError, read_csv, write_csv
from .quad import QuadratureError, grid_for_spin, make_grid, min_sizes_for_spin, sphere_grid_for_spin
from .selftest import run_checks
from .spincore import DensityError, Spin, density_from_json, random_density

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

NEGATIVE_WARN = -1e-9
ROUNDTRIP_TOL = 1e-10
ROUNDTRIP_TOL_LARGE_J = 1e-9


class DataError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def _load_state(path: str):
    try:
        return density_from_json(_read(path))
    except DensityError as exc:
        raise DataError(f"{path}: {exc}") from exc


def _h_grid(spin: Spin, n_xy, n_theta):
    try:
        return grid_for_spin(spin, n_xy, n_theta)
    except QuadratureError as exc:
        raise DataError(str(exc)) from exc


def _check_negative(w: np.ndarray) -> None:
    lowest = float(np.min(w))
    if lowest < NEGATIVE_WARN:
        print(f"warning: H-distribution sample {lowest:.3e} below {NEGATIVE_WARN:g}", file=sys.stderr)


def cmd_selftest(args) -> int:
    start = time.perf_counter()
    if args.inject_fault == "quantizer":
        with hrep.corrupted_quantizer():
            results = run_checks(quick=args.quick)
    else:
        results = run_checks(quick=args.quick)
    width = max(len(name) for name, _, _ in results)
    for name, ok, detail in results:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    failed = [name for name, ok, _ in results if not ok]
    elapsed = time.perf_counter() - start
    if failed:
        print(f"FAILED: {', '.join(failed)} ({elapsed:.1f} s)")
        return EXIT_NUMERIC
    print(f"all {len(results)} checks passed ({elapsed:.1f} s)")
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    spin = Spin(args.twice_j)
    grid = _h_grid(spin, args.n_xy, args.n_theta)
    rho = random_density(spin, args.seed)
    back = hrep.reconstruct_density(spin, hrep.h_distribution_on_grid(rho, grid), grid)
    err = float(np.max(np.abs(back.entries - rho.entries)))
    tol = ROUNDTRIP_TOL if spin.twice_j < 6 else ROUNDTRIP_TOL_LARGE_J
    report = {
        "twice_j": spin.twice_j,
        "seed": args.seed,
        "n_xy": grid.n_xy,
        "n_theta": grid.n_theta,
        "max_abs_error": err,
        "tolerance": tol,
        "passed": err < tol,
    }
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if err < tol else EXIT_NUMERIC


def cmd_hdist(args) -> int:
    rho = _load_state(args.state)
    spin = rho.spin
    if args.grid == "quad":
        grid = _h_grid(spin, args.n_xy, args.n_theta)
        xs = ys = grid.xy_nodes
        thetas = grid.theta_nodes
    else:
        if args.points < 2 or args.extent <= 0:
            raise DataError("regular grid needs --points >= 2 and --extent > 0")
        xs = ys = np.linspace(-args.extent, args.extent, args.points)
        n_theta = args.n_theta if args.n_theta is not None else 16
        thetas = 2 * np.pi * np.arange(n_theta) / n_theta
    w = hrep.h_distribution_values(rho, xs[:, None, None], ys[None, :, None], thetas[None, None, :])
    _check_negative(w)
    rows = (
        (xs[i], ys[k], thetas[l], w[i, k, l])
        for i in range(len(xs))
        for k in range(len(ys))
        for l in range(len(thetas))
    )
    _emit(write_csv(H_COLUMNS, rows), args.out)
    return EXIT_OK


def _parse_axes(text: str, spin: Spin):
    try:
        n_alpha, n_beta = (int(v) for v in text.split(","))
    except ValueError:
        raise DataError(f"--axes expects N_ALPHA,N_BETA, got {text!r}") from None
    try:
        return sphere_grid_for_spin(spin, n_alpha, n_beta)
    except QuadratureError as exc:
        raise DataError(str(exc)) from exc


def _default_axes(spin: Spin):
    return sphere_grid_for_spin(spin)


def cmd_tomogram(args) -> int:
    rho = _load_state(args.state)
    sphere = _parse_axes(args.axes, rho.spin) if args.axes else _default_axes(rho.spin)
    tg = tomo.tomogram_on_grid(rho, sphere)
    _emit(write_csv(TOMO_COLUMNS, tg.records()), args.out)
    return EXIT_OK


def _h_samples_from_records(records):
    """Recover the quadrature grid and the sample array from x,y,theta,w rows."""
    xs = np.unique([r["x"] for r in records])
    thetas = np.unique([r["theta"] for r in records])
    grid = make_grid(len(xs), len(thetas))
    if np.max(np.abs(xs - grid.xy_nodes)) > 1e-12 or np.max(np.abs(thetas - grid.theta_nodes)) > 1e-12:
        raise DataError("H samples are not on a Gauss-Hermite x uniform-theta quadrature grid")
    ix = {float(v): i for i, v in enumerate(xs)}
    it = {float(v): i for i, v in enumerate(thetas)}
    vals = np.full((grid.n_xy, grid.n_xy, grid.n_theta), np.nan)
    for r in records:
        try:
            vals[ix[r["x"]], ix[r["y"]], it[r["theta"]]] = r["w"]
        except KeyError:
            raise DataError(f"sample at ({r['x']}, {r['y']}, {r['theta']}) is off the grid") from None
    if np.any(np.isnan(vals)):
        raise DataError("H samples do not cover the quadrature grid")
    return grid, vals


def cmd_kernel(args) -> int:
    spin = Spin(args.twice_j)
    text = _read(args.input)
    try:
        if args.direction == "th":
            grid, vals = _h_samples_from_records(read_csv(text, H_COLUMNS))
            nmin, tmin = min_sizes_for_spin(spin)
            if grid.n_xy < nmin or grid.n_theta < tmin:
                raise DataError(f"H sample grid ({grid.n_xy}, {grid.n_theta}) too small for {spin}")
            sphere = _parse_axes(args.axes, spin) if args.axes else _default_axes(spin)
            tg = xkernel.tomogram_from_hdist_grid(spin, vals, grid, sphere)
            _emit(write_csv(TOMO_COLUMNS, tg.records()), args.out)
        else:
            tg = tomo.tomogram_from_records(spin, read_csv(text, TOMO_COLUMNS))
            grid = _h_grid(spin, args.n_xy, args.n_theta)
            x, y, t = grid.mesh()
            w = np.broadcast_to(xkernel.hdist_from_tomogram_values(tg, x, y, t), (grid.n_xy, grid.n_xy, grid.n_theta))
            _check_negative(w)
            rows = (
                (grid.xy_nodes[i], grid.xy_nodes[k], grid.theta_nodes[l], w[i, k, l])
                for i in range(grid.n_xy)
                for k in range(grid.n_xy)
                for l in range(grid.n_theta)
            )
            _emit(write_csv(H_COLUMNS, rows), args.out)
    except (SchemaError, QuadratureError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    return EXIT_OK


def cmd_larmor(args) -> int:
    if args.steps < 1:
        raise DataError("--steps must be at least 1")
    try:
        params = dynamics.LarmorParams(args.omega, np.linspace(0, args.tmax, args.steps + 1))
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    grid = grid_for_spin(0.5)
    if args.frames:
        axis = np.linspace(-args.extent, args.extent, args.points)
        thetas = 2 * np.pi * np.arange(8) / 8
        rows = []
        for t in params.times:
            w = dynamics.h_distribution_t(params, t, axis[:, None, None], axis[None, :, None], thetas)
            rows.extend(
                (t, axis[i], axis[k], thetas[l], w[i, k, l])
                for i in range(len(axis))
                for k in range(len(axis))
                for l in range(len(thetas))
            )
        _emit(write_csv(FRAME_COLUMNS, rows), args.out)
        return EXIT_OK
    rows = [(t, *dynamics.spin_means_t(params, t, grid)) for t in params.times]
    _emit(write_csv(MEANS_COLUMNS, rows), args.out)
    return EXIT_OK


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinhrep", description="Hermite-polynomial representation of spin states")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("selftest", help="run the invariant suite")
    p.add_argument("--quick", action="store_true", help="reduced sample sets")
    p.add_argument("--inject-fault", choices=["quantizer"], help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)

    def grid_flags(p):
        p.add_argument("--n-xy", type=int, default=None, help="Gauss-Hermite nodes per axis")
        p.add_argument("--n-theta", type=int, default=None, help="uniform theta nodes")

    p = sub.add_parser("roundtrip", help="random rho -> H-distribution -> rho")
    p.add_argument("--twice-j", type=_nonneg_int, required=True)
    p.add_argument("--seed", type=int, default=1)
    grid_flags(p)
    p.add_argument("--out", default=None, help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("hdist", help="sample the H-distribution of a state")
    p.add_argument("--state", required=True, help="density-matrix JSON")
    p.add_argument("--grid", choices=["quad", "regular"], default="quad")
    grid_flags(p)
    p.add_argument("--extent", type=float, default=4.0, help="regular grid half-width")
    p.add_argument("--points", type=int, default=41, help="regular grid points per axis")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_hdist)

    p = sub.add_parser("tomogram", help="sample the spin tomogram of a state")
    p.add_argument("--state", required=True)
    p.add_argument("--axes", default=None, help="N_ALPHA,N_BETA angular rule")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tomogram)

    p = sub.add_parser("kernel", help="convert between H-distribution and tomogram samples")
    p.add_argument("--direction", choices=["th", "ht"], required=True,
                   help="th: H samples -> tomogram; ht: tomogram -> H samples")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--twice-j", type=_nonneg_int, default=1)
    p.add_argument("--axes", default=None)
    grid_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("larmor", help="spin-1/2 rotation in a field along Ox")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--tmax", type=float, default=2 * math.pi)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--frames", action="store_true", help="emit t,x,y,theta,w instead of means")
    p.add_argument("--extent", type=float, default=3.0)
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_larmor)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
