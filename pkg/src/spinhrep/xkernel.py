"""Kernels between star-product schemes, K_ab(x, y) = tr(U_a(x) D_b(y)).

Closed forms are given for spin 1/2 between the tomogram (T) and the
H-representation (H); the generic trace path works for any spin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from . import hrep, tomo
from .quad import QuadratureGrid, SphereGrid
from .spincore import Spin, SpinOperator
from .specfun import HalfLike, half

__all__ = [
    "SchemePair",
    "kernel",
    "tomo_to_h_pair",
    "h_to_tomo_pair",
    "k_th_closed",
    "k_ht_closed",
    "tomogram_from_hdist",
    "hdist_from_tomogram",
    "tomogram_from_hdist_grid",
    "hdist_from_tomogram_values",
]


@dataclass(frozen=True)
class SchemePair:
    """Dequantizer of scheme a with the quantizer (and measure) of scheme b."""

    dequantizer_a: Callable[[Any], SpinOperator]
    quantizer_b: Callable[[Any], SpinOperator]
    measure_b: Optional[Any] = None


def kernel(pair: SchemePair, point_a, point_b) -> complex:
    u = np.asarray(pair.dequantizer_a(point_a))
    d = np.asarray(pair.quantizer_b(point_b))
    if u.shape != d.shape:
        raise ValueError(f"dimension mismatch: dequantizer {u.shape} vs quantizer {d.shape}")
    return complex(np.einsum("ab,ba->", u, d))


def tomo_to_h_pair(spin: "Spin | HalfLike" = 0.5, grid: QuadratureGrid | None = None) -> SchemePair:
    """Pair generating K_TH: tomographic dequantizer, H quantizer."""
    spin = Spin.of(spin)
    return SchemePair(
        lambda p: tomo.tomo_dequantizer(spin, p),
        lambda p: hrep.h_quantizer(spin, p),
        grid,
    )


def h_to_tomo_pair(spin: "Spin | HalfLike" = 0.5, grid: SphereGrid | None = None) -> SchemePair:
    """Pair generating K_HT: H dequantizer, tomographic quantizer."""
    spin = Spin.of(spin)
    return SchemePair(
        lambda p: hrep.h_dequantizer(spin, p),
        lambda p: tomo.tomo_quantizer_analytic(spin, p),
        grid,
    )


def _half_m(m: HalfLike) -> float:
    m = half(m)
    if abs(m.twice_value) != 1:
        raise ValueError(f"closed-form kernels need m = +-1/2, got {m}")
    return float(m)


def k_th_closed(m, alpha, beta, x, y, theta):
    m = _half_m(m)
    bracket = (x**2 - y**2) * np.cos(beta) - 4 * x * y * np.sin(beta) * np.cos(alpha - theta)
    return (x**2 + y**2 - 1 + 2 * m * bracket) / (4 * math.pi)


def k_ht_closed(x, y, theta, m, alpha, beta):
    m = _half_m(m)
    bracket = (x**2 - y**2) * np.cos(beta) - 2 * x * y * np.sin(beta) * np.cos(alpha - theta)
    return np.exp(-(x**2 + y**2)) * (x**2 + y**2 + 6 * m * bracket) / math.pi


def tomogram_from_hdist(w_h, grid: QuadratureGrid, point_t, *, gaussian_included: bool = True) -> float:
    """Spin-1/2 tomogram value from the H-distribution via the K_TH kernel."""
    p = tomo._as_point(point_t)
    vals = hrep._stripped_samples(w_h, grid, gaussian_included)
    x, y, t = grid.mesh()
    k = k_th_closed(p.m, p.alpha, p.beta, x, y, t)
    return float(np.sum(grid.weights() * k * vals))


def tomogram_from_hdist_grid(
    spin: "Spin | HalfLike", w_h, grid: QuadratureGrid, sphere: SphereGrid, *, gaussian_included: bool = True
) -> tomo.Tomogram:
    """Tomogram on ``sphere`` from H-samples, any spin, via the generic kernel.

    Uses w_T(m, n) = integral tr(U_T(m, n) D_H(p)) w_H(p) dp; closed form at j = 1/2.
    """
    spin = Spin.of(spin)
    vals = hrep._stripped_samples(w_h, grid, gaussian_included) * grid.weights()
    x, y, t = grid.mesh()
    ms = spin.projections()
    out = np.empty((sphere.n_alpha, sphere.n_beta, spin.dim))
    if spin.twice_j == 1:
        for a_i, a in enumerate(sphere.alpha_nodes):
            for b_i, b in enumerate(sphere.beta_nodes):
                for i, m in enumerate(ms):
                    out[a_i, b_i, i] = np.sum(k_th_closed(m, a, b, x, y, t) * vals)
        return tomo.Tomogram(spin, sphere, out)
    dq = hrep.quantizer_values(spin, x, y, t)
    # integral of w_H D_H, then the tomographic dequantizer trace per axis
    rho = np.einsum("abc,abcij->ij", vals, dq)
    for a_i, a in enumerate(sphere.alpha_nodes):
        for b_i, b in enumerate(sphere.beta_nodes):
            for i, m in enumerate(ms):
                u = tomo.tomo_dequantizer(spin, tomo.TomogramPoint(m, float(a), float(b))).entries
                out[a_i, b_i, i] = np.einsum("ab,ba->", u, rho).real
    return tomo.Tomogram(spin, sphere, out)


def hdist_from_tomogram(w_t: tomo.Tomogram, point_h) -> float:
    """Spin-1/2 H-distribution value from tomogram samples via the K_HT kernel."""
    p = hrep._as_point(point_h)
    return float(hdist_from_tomogram_values(w_t, p.x, p.y, p.theta))


def hdist_from_tomogram_values(w_t: tomo.Tomogram, x, y, theta):
    """(1/4pi) sum over the angular rule and m of K_HT w_T; broadcasts over (x, y, theta).

    Spins other than 1/2 have no closed kernel here; the same integral is
    taken by reconstructing rho from the tomogram and applying the H-map.
    """
    spin, sphere = w_t.spin, w_t.grid
    x, y, theta = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, theta)))
    total = np.zeros(x.shape)
    ms = spin.projections()
    if spin.twice_j == 1:
        for a_i, a in enumerate(sphere.alpha_nodes):
            for b_i, b in enumerate(sphere.beta_nodes):
                wt = sphere.weights[a_i, b_i] / (4 * math.pi)
                for i, m in enumerate(ms):
                    total += wt * w_t.values[a_i, b_i, i] * k_ht_closed(x, y, theta, m, a, b)
        return total
    rho = tomo.reconstruct_from_tomogram(w_t)
    return hrep.h_distribution_values(rho, x, y, theta)
