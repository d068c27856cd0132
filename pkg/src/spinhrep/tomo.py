"""Spin-tomogram representation.

The tomogram w(m, alpha, beta) is the probability of spin projection m along
the quantization axis labelled by the Euler angles (alpha, beta). Its
dequantizer is the eigenprojector R |jm><jm| R^dagger with
R = exp(i alpha Jz) exp(i beta Jy); for j = 1/2 this is

    1/2 + m [[cos b, -e^{i a} sin b], [-e^{-i a} sin b, -cos b]].

The quantizer is the Clebsch-Gordan multipole sum; for j = 1/2 it is the
same matrix with the traceless part multiplied by 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .quad import QuadratureError, SphereGrid, make_sphere_grid, sphere_min_sizes
from .spincore import DensityMatrix, Spin, SpinOperator, rotation_matrix
from .specfun import HalfInteger, HalfLike, clebsch_gordan, half, wigner_small_d

__all__ = [
    "TomogramPoint",
    "Tomogram",
    "tomo_dequantizer",
    "tomo_dequantizer_half",
    "tomogram_value",
    "tomogram_on_grid",
    "tomo_quantizer_analytic",
    "tomo_quantizer_half",
    "reconstruct_from_tomogram",
    "tomogram_from_records",
    "axis_direction",
]


@dataclass(frozen=True)
class TomogramPoint:
    m: HalfInteger
    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "m", half(self.m))
        if not 0.0 <= self.beta <= math.pi:
            raise ValueError(f"beta must lie in [0, pi], got {self.beta}")


def _as_point(point) -> TomogramPoint:
    return point if isinstance(point, TomogramPoint) else TomogramPoint(*point)


@dataclass(frozen=True)
class Tomogram:
    """Tomogram samples on a product angular grid.

    ``values[a, b, i]`` is w(m_i, alpha_a, beta_b) with m_i in descending order.
    """

    spin: Spin
    grid: SphereGrid
    values: np.ndarray

    def records(self) -> Iterable[tuple[float, float, float, float]]:
        ms = self.spin.m_values()
        for a_i, a in enumerate(self.grid.alpha_nodes):
            for b_i, b in enumerate(self.grid.beta_nodes):
                for i, m in enumerate(ms):
                    yield float(m), float(a), float(b), float(self.values[a_i, b_i, i])


def axis_direction(alpha: float, beta: float) -> np.ndarray:
    """Unit vector n with (n . J) tomo_dequantizer = m tomo_dequantizer."""
    return np.array([-math.cos(alpha) * math.sin(beta), math.sin(alpha) * math.sin(beta), math.cos(beta)])


def _frame_rotation(spin: Spin, alpha: float, beta: float) -> np.ndarray:
    # exp(i alpha Jz) exp(i beta Jy): Euler angle alpha sits in the gamma slot
    return np.asarray(rotation_matrix(spin, 0.0, beta, alpha).entries)


def tomo_dequantizer(spin: "Spin | HalfLike", point) -> SpinOperator:
    spin = Spin.of(spin)
    p = _as_point(point)
    col = _frame_rotation(spin, p.alpha, p.beta)[:, spin.index(p.m)]
    return SpinOperator(spin, np.outer(col, col.conj()))


def _half_matrix(alpha: float, beta: float) -> np.ndarray:
    s = math.sin(beta)
    return np.array(
        [[math.cos(beta), -np.exp(1j * alpha) * s], [-np.exp(-1j * alpha) * s, -math.cos(beta)]]
    )


def tomo_dequantizer_half(m: HalfLike, alpha: float, beta: float) -> SpinOperator:
    """Closed-form spin-1/2 dequantizer."""
    mval = float(_checked_half_m(m))
    return SpinOperator(Spin(1), 0.5 * np.eye(2) + mval * _half_matrix(alpha, beta))


def tomo_quantizer_half(m: HalfLike, alpha: float, beta: float) -> SpinOperator:
    """Closed-form spin-1/2 quantizer."""
    mval = float(_checked_half_m(m))
    return SpinOperator(Spin(1), 0.5 * np.eye(2) + 3 * mval * _half_matrix(alpha, beta))


def _checked_half_m(m: HalfLike) -> HalfInteger:
    m = half(m)
    if abs(m.twice_value) != 1:
        raise ValueError(f"spin-1/2 projection must be +-1/2, got {m}")
    return m


def tomogram_value(rho, point) -> float:
    mat = np.asarray(rho.entries if isinstance(rho, SpinOperator) else rho, dtype=complex)
    spin = Spin(mat.shape[0] - 1)
    p = _as_point(point)
    col = _frame_rotation(spin, p.alpha, p.beta)[:, spin.index(p.m)]
    return float(np.vdot(col, mat @ col).real)


def tomogram_on_grid(rho, grid: SphereGrid) -> Tomogram:
    """All w(m, alpha, beta) at the nodes of ``grid``."""
    mat = np.asarray(rho.entries if isinstance(rho, SpinOperator) else rho, dtype=complex)
    spin = Spin(mat.shape[0] - 1)
    values = np.empty((grid.n_alpha, grid.n_beta, spin.dim))
    for a_i, a in enumerate(grid.alpha_nodes):
        for b_i, b in enumerate(grid.beta_nodes):
            r = _frame_rotation(spin, a, b)
            values[a_i, b_i] = np.einsum("ai,ab,bi->i", r.conj(), mat, r).real
    return Tomogram(spin, grid, values)


@lru_cache(maxsize=None)
def _quantizer_coefficients(twice_j: int) -> dict:
    """CG products (2j'+1) <jm;j-m|j'0><jm1;j-m2|j'm'> keyed by (i_m, i_m1, i_m2)."""
    spin = Spin(twice_j)
    j = spin.j
    ms = spin.projections()
    table = {}
    for im, m in enumerate(ms):
        for i1, m1 in enumerate(ms):
            for i2, m2 in enumerate(ms):
                mp = m1 - m2
                terms = []
                for jp2 in range(abs(mp.twice_value), 2 * twice_j + 1, 2):
                    jp = HalfInteger(jp2)
                    c = (
                        (jp2 + 1)
                        * clebsch_gordan(j, m, j, -m, jp, 0)
                        * clebsch_gordan(j, m1, j, -m2, jp, mp)
                    )
                    if c != 0.0:
                        terms.append((jp, c))
                sign = -1 if int(m - m1) % 2 else 1
                table[im, i1, i2] = (mp, sign, terms)
    return table


def _quantizer_stack(spin: Spin, alpha: float, beta: float) -> np.ndarray:
    """Quantizers for every m at one axis, shape (d, d, d) indexed [m, m1, m2]."""
    table = _quantizer_coefficients(spin.twice_j)
    d = spin.dim
    small_d = {}
    out = np.zeros((d, d, d), dtype=complex)
    for (im, i1, i2), (mp, sign, terms) in table.items():
        acc = 0.0
        for jp, c in terms:
            key = (jp.twice_value, mp.twice_value)
            if key not in small_d:
                small_d[key] = wigner_small_d(jp, 0, mp, beta)
            acc += c * small_d[key]
        out[im, i1, i2] = sign * acc * np.exp(1j * float(mp) * alpha)
    return out


def tomo_quantizer_analytic(spin: "Spin | HalfLike", point) -> SpinOperator:
    """Quantizer from the Clebsch-Gordan multipole expansion.

    D_{m1m2} = (-1)^{m-m1} sum_{j'} (2j'+1) <jm;j-m|j'0><jm1;j-m2|j'm'>
               exp(i m' alpha) d^{(j')}_{0m'}(beta),   m' = m1 - m2.
    """
    spin = Spin.of(spin)
    p = _as_point(point)
    im = spin.index(p.m)
    return SpinOperator(spin, _quantizer_stack(spin, p.alpha, p.beta)[im])


def reconstruct_from_tomogram(tomogram: Tomogram) -> DensityMatrix:
    """rho = (1/4pi) sum over the angular rule and m of w(m, alpha, beta) D(m, alpha, beta)."""
    spin, grid = tomogram.spin, tomogram.grid
    amin, bmin = sphere_min_sizes(spin)
    if grid.n_alpha < amin or grid.n_beta < bmin:
        raise QuadratureError(
            f"angular grid ({grid.n_alpha}, {grid.n_beta}) too small for {spin}: "
            f"need at least ({amin}, {bmin})"
        )
    rho = np.zeros((spin.dim, spin.dim), dtype=complex)
    for a_i, a in enumerate(grid.alpha_nodes):
        for b_i, b in enumerate(grid.beta_nodes):
            wt = grid.weights[a_i, b_i] / (4 * math.pi)
            stack = _quantizer_stack(spin, float(a), float(b))
            rho += wt * np.einsum("i,ikl->kl", tomogram.values[a_i, b_i], stack)
    return DensityMatrix(spin, rho)


def _match_nodes(found: np.ndarray, expected: np.ndarray, label: str) -> dict:
    if len(found) != len(expected) or np.max(np.abs(np.sort(found) - np.sort(expected))) > 1e-12:
        raise QuadratureError(f"{label} samples do not form the {len(expected)}-node quadrature axis")
    return {float(v): int(np.argmin(np.abs(expected - v))) for v in found}


def tomogram_from_records(spin: "Spin | HalfLike", records: Iterable[Mapping[str, float]]) -> Tomogram:
    """Assemble a Tomogram from ``{m, alpha, beta, w}`` records.

    The angles must be exactly the nodes of a product angular rule (uniform
    alpha, Gauss-Legendre in cos beta) and every m must be present.
    """
    spin = Spin.of(spin)
    rows = [(float(r["m"]), float(r["alpha"]), float(r["beta"]), float(r["w"])) for r in records]
    if not rows:
        raise ValueError("no tomogram samples")
    alphas = np.unique([r[1] for r in rows])
    betas = np.unique([r[2] for r in rows])
    grid = make_sphere_grid(len(alphas), len(betas))
    amap = _match_nodes(alphas, grid.alpha_nodes, "alpha")
    bmap = _match_nodes(betas, grid.beta_nodes, "beta")
    values = np.full((grid.n_alpha, grid.n_beta, spin.dim), np.nan)
    for m, a, b, w in rows:
        values[amap[a], bmap[b], spin.index(m)] = w
    if np.any(np.isnan(values)):
        raise ValueError("tomogram samples are incomplete for the angular grid")
    return Tomogram(spin, grid, values)
