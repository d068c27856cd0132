"""Invariant checks run by ``spinhrep selftest``.

Each check returns (passed, detail). ``quick`` shrinks the sampled sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import dynamics, hrep, tomo, xkernel
from .frames import h_quantizer_coefficients_lstsq, tomo_canonical_dual
from .quad import gauss_hermite_rule, grid_for_spin, sphere_grid_for_spin
from .spincore import Spin, angular_momentum_matrices, random_density, random_hermitian, rotation_matrix
from .specfun import clebsch_gordan, hermite_eval, triple_hermite_integral

__all__ = ["Check", "CHECKS", "run_checks"]


@dataclass(frozen=True)
class Check:
    name: str
    func: Callable[[bool], tuple[bool, str]]
    quick: bool = True


def _spins(max_twice: int) -> list[Spin]:
    return [Spin(t) for t in range(1, max_twice + 1)]


def check_hermite(quick: bool):
    nodes, weights = gauss_hermite_rule(13)
    worst = 0.0
    for n in range(13):
        for k in range(13):
            q = np.sum(weights * hermite_eval(n, nodes) * hermite_eval(k, nodes))
            exact = 2.0**n * math.factorial(n) * math.sqrt(math.pi) if n == k else 0.0
            scale = 2.0 ** max(n, k) * math.factorial(max(n, k)) * math.sqrt(math.pi)
            worst = max(worst, abs(q - exact) / scale)
    return worst < 1e-9, f"max rel err {worst:.2e}"


def check_busbridge(quick: bool):
    nodes, weights = gauss_hermite_rule(20)
    worst = 0.0
    for p in range(9):
        for n in range(9):
            for k in range(9):
                q = np.sum(weights * hermite_eval(p, nodes) * hermite_eval(n, nodes) * hermite_eval(k, nodes))
                c = triple_hermite_integral(p, n, k)
                scale = max(abs(c), math.sqrt(math.pi) * 2.0**12 * math.factorial(8))
                worst = max(worst, abs(q - c) / (abs(c) if c else scale))
    return worst < 1e-9, f"max rel err {worst:.2e}"


def check_d_unitarity(quick: bool):
    worst = 0.0
    for spin in _spins(6):
        for beta in (0.3, 1.7, 2.9):
            d = np.asarray(rotation_matrix(spin, 0.0, beta, 0.0).entries)
            worst = max(worst, np.max(np.abs(d @ d.T - np.eye(spin.dim))))
    return worst < 1e-10, f"max dev {worst:.2e}"


def check_cg_unitarity(quick: bool):
    worst = 0.0
    for tj1 in range(5):
        for tj2 in range(5):
            j1, j2 = tj1 / 2, tj2 / 2
            m1s = [j1 - i for i in range(tj1 + 1)]
            m2s = [j2 - i for i in range(tj2 + 1)]
            pairs = [(a, b) for a in m1s for b in m2s]
            jvals = [abs(j1 - j2) + i for i in range(int(round(j1 + j2 - abs(j1 - j2))) + 1)]
            mat = np.array(
                [[clebsch_gordan(j1, a, j2, b, J, M) for J in jvals for M in [J - i for i in range(int(2 * J) + 1)]] for a, b in pairs]
            )
            worst = max(worst, np.max(np.abs(mat @ mat.T - np.eye(len(pairs)))))
    return worst < 1e-10, f"max dev {worst:.2e}"


def check_commutators(quick: bool):
    worst = 0.0
    for spin in _spins(8):
        jx, jy, jz, _ = (np.asarray(a.entries) for a in angular_momentum_matrices(spin))
        for a, b, c in ((jx, jy, jz), (jy, jz, jx), (jz, jx, jy)):
            worst = max(worst, np.max(np.abs(a @ b - b @ a - 1j * c)))
    return worst < 1e-12, f"max dev {worst:.2e}"


def check_h_roundtrip(quick: bool):
    worst = 0.0
    seeds = range(3 if quick else 20)
    for spin in _spins(2 if quick else 6):
        grid = grid_for_spin(spin)
        for seed in seeds:
            rho = random_density(spin, seed)
            back = hrep.reconstruct_density(spin, hrep.h_distribution_on_grid(rho, grid), grid)
            worst = max(worst, np.max(np.abs(back.entries - rho.entries)))
    return worst < 1e-10, f"max entry err {worst:.2e}"


def check_normalization(quick: bool):
    worst = 0.0
    for spin in _spins(2 if quick else 6):
        grid = grid_for_spin(spin)
        for seed in range(3 if quick else 10):
            rho = random_density(spin, 100 + seed)
            for theta in np.linspace(0, 2 * np.pi, 8, endpoint=False):
                worst = max(worst, hrep.normalization_defect(rho, theta, grid))
    return worst < 1e-11, f"max defect {worst:.2e}"


def check_nonnegativity(quick: bool):
    axis = np.linspace(-4, 4, 41)
    thetas = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    lowest = np.inf
    for spin in _spins(4):
        for seed in range(3 if quick else 10):
            w = hrep.h_distribution_values(random_density(spin, 200 + seed), axis[:, None, None], axis[None, :, None], thetas)
            lowest = min(lowest, float(w.min()))
    return lowest >= -1e-12, f"min w {lowest:.2e}"


def check_completeness(quick: bool):
    worst = 0.0
    for spin in _spins(6):
        grid = grid_for_spin(spin)
        for theta in (0.0, 1.3, 4.4):
            worst = max(worst, hrep.completeness_defect(spin, theta, grid))
    return worst < 1e-10, f"max defect {worst:.2e}"


def check_half_closed_forms(quick: bool):
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(50 if quick else 1000):
        x, y = rng.normal(size=2) * 1.5
        t = rng.uniform(0, 2 * np.pi)
        g = math.exp(-(x * x + y * y))
        e = np.exp(1j * t)
        u = 2 / np.pi * g * np.array([[x * x, x * y * e], [x * y / e, y * y]])
        d = np.array([[2 * x * x - 1, 4 * x * y * e], [4 * x * y / e, 2 * y * y - 1]]) / (4 * np.pi)
        worst = max(
            worst,
            np.max(np.abs(hrep.h_dequantizer(0.5, (x, y, t)).entries - u)),
            np.max(np.abs(hrep.h_quantizer(0.5, (x, y, t)).entries - d)),
        )
    return worst < 1e-13, f"max dev {worst:.2e}"


def check_h_dual_frame(quick: bool):
    worst = 0.0
    for spin in _spins(2):
        grid = grid_for_spin(spin)
        fitted = h_quantizer_coefficients_lstsq(spin, grid)
        analytic = np.exp(hrep._quantizer_log_coef(spin))
        worst = max(worst, np.max(np.abs(fitted - analytic) / analytic))
    return worst < 1e-8, f"max rel dev {worst:.2e}"


def check_tomo_roundtrip(quick: bool):
    worst = 0.0
    for spin in _spins(2 if quick else 4):
        grid = sphere_grid_for_spin(spin)
        for seed in range(2 if quick else 20):
            rho = random_density(spin, 300 + seed)
            back = tomo.reconstruct_from_tomogram(tomo.tomogram_on_grid(rho, grid))
            worst = max(worst, np.max(np.abs(back.entries - rho.entries)))
    return worst < 1e-9, f"max entry err {worst:.2e}"


def check_tomo_dual_frame(quick: bool):
    spin = Spin(2)
    grid = sphere_grid_for_spin(spin, 7, 4)
    rng = np.random.default_rng(11)
    pts = [
        tomo.TomogramPoint(m, rng.uniform(0, 2 * np.pi), rng.uniform(0, np.pi))
        for m in spin.projections()
        for _ in range(4)
    ]
    dual = tomo_canonical_dual(spin, grid, pts)
    analytic = np.array([tomo.tomo_quantizer_analytic(spin, p).entries for p in pts])
    worst = float(np.max(np.abs(dual - analytic)))
    return worst < 1e-8, f"max dev {worst:.2e}"


def check_kernels(quick: bool):
    rng = np.random.default_rng(8)
    th, ht = xkernel.tomo_to_h_pair(), xkernel.h_to_tomo_pair()
    worst = 0.0
    for _ in range(100 if quick else 2000):
        m = rng.choice([0.5, -0.5])
        a, t = rng.uniform(0, 2 * np.pi, 2)
        b = rng.uniform(0, np.pi)
        x, y = rng.normal(size=2) * 1.5
        kt = xkernel.kernel(th, tomo.TomogramPoint(m, a, b), (x, y, t))
        kh = xkernel.kernel(ht, (x, y, t), tomo.TomogramPoint(m, a, b))
        worst = max(
            worst,
            abs(kt - xkernel.k_th_closed(m, a, b, x, y, t)),
            abs(kh - xkernel.k_ht_closed(x, y, t, m, a, b)),
        )
    return worst < 1e-12, f"max dev {worst:.2e}"


def check_two_path(quick: bool):
    grid = grid_for_spin(0.5)
    sphere = sphere_grid_for_spin(0.5, 4, 3)
    worst = 0.0
    for seed in range(3 if quick else 20):
        rho = random_density(0.5, 400 + seed)
        w_h = hrep.h_distribution_on_grid(rho, grid)
        via = xkernel.tomogram_from_hdist_grid(0.5, w_h, grid, sphere)
        direct = tomo.tomogram_on_grid(rho, sphere)
        worst = max(worst, np.max(np.abs(via.values - direct.values)))
        x, y, t = grid.mesh()
        back = xkernel.hdist_from_tomogram_values(direct, x, y, t)
        worst = max(worst, np.max(np.abs(back - w_h)))
    return worst < 1e-10, f"max dev {worst:.2e}"


def check_larmor(quick: bool):
    params = dynamics.LarmorParams(1.0)
    grid = grid_for_spin(0.5)
    worst = 0.0
    for t in np.linspace(0, 2 * np.pi, 10 if quick else 100):
        sx, sy, sz = dynamics.spin_means_t(params, t, grid)
        worst = max(worst, abs(sx), abs(sy + 0.5 * math.sin(t)), abs(sz - 0.5 * math.cos(t)))
    return worst < 1e-10, f"max dev {worst:.2e}"


def check_duality(quick: bool):
    worst = 0.0
    for spin in _spins(2 if quick else 6):
        grid = grid_for_spin(spin)
        for seed in range(3 if quick else 50):
            a = random_hermitian(spin, 500 + seed)
            rho = random_density(spin, 600 + seed)
            exact = np.trace(rho.entries @ a.entries).real
            worst = max(worst, abs(hrep.expectation(a, rho, grid) - exact))
    return worst < 1e-10, f"max dev {worst:.2e}"


CHECKS = [
    Check("hermite-orthogonality", check_hermite),
    Check("busbridge", check_busbridge),
    Check("d-unitarity", check_d_unitarity),
    Check("cg-unitarity", check_cg_unitarity),
    Check("commutators", check_commutators),
    Check("round-trip", check_h_roundtrip),
    Check("normalization", check_normalization),
    Check("nonnegativity", check_nonnegativity),
    Check("completeness", check_completeness),
    Check("half-closed-forms", check_half_closed_forms),
    Check("h-dual-frame", check_h_dual_frame),
    Check("tomogram-round-trip", check_tomo_roundtrip),
    Check("tomogram-dual-frame", check_tomo_dual_frame, quick=False),
    Check("kernels", check_kernels),
    Check("two-path", check_two_path),
    Check("larmor", check_larmor),
    Check("duality", check_duality),
]


def run_checks(quick: bool = False) -> list[tuple[str, bool, str]]:
    results = []
    for check in CHECKS:
        if quick and not check.quick:
            continue
        try:
            ok, detail = check.func(quick)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((check.name, bool(ok), detail))
    return results
