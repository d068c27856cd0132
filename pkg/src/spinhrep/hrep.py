"""Hermite-polynomial (H-) representation of spin states.

A spin-j state is mapped to the function w(x, y, theta) = <x,y,theta|rho|x,y,theta>
where the unnormalized vectors |x,y,theta> have components

    exp(-(x^2+y^2)/2) exp(i m theta) H_{j+m}(x) H_{j-m}(y) / (2^j sqrt(pi) sqrt((j+m)!(j-m)!))

in the |jm> basis. The map is inverted by integrating w against the quantizer
D(x, y, theta) over theta in [0, 2pi) and the (x, y) plane.

Vectorised helpers take numpy arrays for x, y and theta that broadcast against
each other; matrix indices are appended as trailing axes.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .quad import QuadratureError, QuadratureGrid
from .spincore import DensityMatrix, Spin, SpinOperator, SpinState
from .specfun import hermite_table, log_factorial

__all__ = [
    "HPoint",
    "HDistributionSample",
    "h_state",
    "h_dequantizer",
    "h_quantizer",
    "h_distribution",
    "h_distribution_pure",
    "h_distribution_values",
    "h_distribution_on_grid",
    "reconstruct_density",
    "dual_symbol",
    "dual_symbol_values",
    "expectation",
    "normalization_defect",
    "completeness_defect",
    "joint_distribution",
    "amplitude_poly",
    "quantizer_values",
]

TWO_PI = 2 * np.pi

# multiplies every quantizer entry; only the self-test fault hook changes it
_quantizer_scale = 1.0


@contextlib.contextmanager
def corrupted_quantizer(scale: float = 1.01):
    """Temporarily rescale the quantizer (used to exercise failure reporting)."""
    global _quantizer_scale
    old = _quantizer_scale
    _quantizer_scale = scale
    try:
        yield
    finally:
        _quantizer_scale = old


@dataclass(frozen=True)
class HPoint:
    x: float
    y: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.theta)):
            raise ValueError(f"non-finite phase-space point ({self.x}, {self.y}, {self.theta})")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)


@dataclass(frozen=True)
class HDistributionSample:
    point: HPoint
    value: float


def _as_point(point) -> HPoint:
    return point if isinstance(point, HPoint) else HPoint(*point)


def _amp_log_norm(spin: Spin) -> np.ndarray:
    tj = spin.twice_j
    i = np.arange(spin.dim)
    lf = np.array([log_factorial(k) for k in range(tj + 1)])
    return -(tj / 2) * math.log(2) - 0.5 * math.log(math.pi) - 0.5 * (lf[tj - i] + lf[i])


def amplitude_poly(spin: "Spin | float", x, y, theta) -> np.ndarray:
    """Components of |x,y,theta> without the factor exp(-(x^2+y^2)/2)."""
    spin = Spin.of(spin)
    tj = spin.twice_j
    x, y, theta = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, theta)))
    hx = hermite_table(tj, x)
    hy = hermite_table(tj, y)
    i = np.arange(spin.dim)
    m = spin.m_values()
    coef = np.exp(_amp_log_norm(spin))
    herm = np.moveaxis(hx[tj - i] * hy[i], 0, -1)
    return coef * np.exp(1j * theta[..., None] * m) * herm


def _quantizer_log_coef(spin: Spin) -> np.ndarray:
    tj = spin.twice_j
    lf = np.array([log_factorial(k) for k in range(2 * tj + 1)])
    i = np.arange(spin.dim)
    ii, kk = np.meshgrid(i, i, indexing="ij")
    # j+m = tj-i, j-m = i, 2j+m+m' = 2tj-i-i', 2j-m-m' = i+i'
    return (
        0.5 * (lf[tj - ii] + lf[tj - kk] + lf[ii] + lf[kk])
        - lf[2 * tj - ii - kk]
        - lf[ii + kk]
        - (tj + 1) * math.log(2)
        - math.log(math.pi)
    )


def quantizer_values(spin: "Spin | float", x, y, theta) -> np.ndarray:
    """Quantizer matrices D(x, y, theta), shape broadcast(x, y, theta) + (d, d)."""
    spin = Spin.of(spin)
    tj = spin.twice_j
    x, y, theta = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, theta)))
    hx = hermite_table(2 * tj, x)
    hy = hermite_table(2 * tj, y)
    i = np.arange(spin.dim)
    ii, kk = np.meshgrid(i, i, indexing="ij")
    herm = np.moveaxis(hx[2 * tj - ii - kk] * hy[ii + kk], (0, 1), (-2, -1))
    m = spin.m_values()
    phase = np.exp(1j * theta[..., None, None] * (m[:, None] - m[None, :]))
    return _quantizer_scale * np.exp(_quantizer_log_coef(spin)) * phase * herm


def h_state(spin: "Spin | float", point) -> SpinState:
    spin = Spin.of(spin)
    p = _as_point(point)
    amps = math.exp(-(p.x**2 + p.y**2) / 2) * amplitude_poly(spin, p.x, p.y, p.theta)
    return SpinState(spin, amps, normalized=False)


def h_dequantizer(spin: "Spin | float", point) -> SpinOperator:
    v = h_state(spin, point).amplitudes
    return SpinOperator(Spin.of(spin), np.outer(v, v.conj()))


def h_quantizer(spin: "Spin | float", point) -> SpinOperator:
    p = _as_point(point)
    spin = Spin.of(spin)
    return SpinOperator(spin, quantizer_values(spin, p.x, p.y, p.theta))


def _matrix(rho) -> np.ndarray:
    return np.asarray(rho.entries if isinstance(rho, SpinOperator) else rho, dtype=complex)


def h_distribution_values(rho, x, y, theta, *, gaussian: bool = True) -> np.ndarray:
    """w = <x,y,theta|rho|x,y,theta> on broadcast arrays.

    With ``gaussian=False`` the factor exp(-(x^2+y^2)) is left off.
    """
    mat = _matrix(rho)
    spin = Spin(mat.shape[0] - 1)
    v = amplitude_poly(spin, x, y, theta)
    w = np.einsum("...a,ab,...b->...", v.conj(), mat, v).real
    if gaussian:
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        w = w * np.exp(-(x**2 + y**2))
    return w


def h_distribution(rho, point) -> float:
    p = _as_point(point)
    return float(h_distribution_values(rho, p.x, p.y, p.theta))


def h_distribution_pure(psi: SpinState, point) -> float:
    p = _as_point(point)
    v = h_state(psi.spin, p).amplitudes
    return float(abs(np.vdot(psi.amplitudes, v)) ** 2)


def h_distribution_on_grid(rho, grid: QuadratureGrid, *, gaussian: bool = True) -> np.ndarray:
    x, y, t = grid.mesh()
    return h_distribution_values(rho, x, y, t, gaussian=gaussian)


WInput = Union[Callable, np.ndarray]


def _stripped_samples(w: WInput, grid: QuadratureGrid, gaussian_included: bool) -> np.ndarray:
    x, y, t = grid.mesh()
    shape = (grid.n_xy, grid.n_xy, grid.n_theta)
    if callable(w):
        vals = np.broadcast_to(np.asarray(w(x, y, t), dtype=float), shape)
    else:
        vals = np.asarray(w, dtype=float)
        if vals.shape != shape:
            raise QuadratureError(f"sample array has shape {vals.shape}, grid needs {shape}")
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i, k, l = np.argwhere(bad)[0]
        raise QuadratureError(
            f"non-finite w at x={grid.xy_nodes[i]!r}, y={grid.xy_nodes[k]!r}, theta={grid.theta_nodes[l]!r}"
        )
    if gaussian_included:
        vals = vals * np.exp(x**2 + y**2)
    return vals


def reconstruct_density(
    spin: "Spin | float", w: WInput, grid: QuadratureGrid, *, gaussian_included: bool = True
) -> DensityMatrix:
    """Invert the H-map: rho = integral of w(x,y,theta) D(x,y,theta).

    ``w`` is either a callable evaluated on broadcast (x, y, theta) arrays or a
    sample array of shape (n_xy, n_xy, n_theta) on ``grid``. The result is not
    validated; pass it to ``validate_density`` to check that w was consistent.
    """
    spin = Spin.of(spin)
    vals = _stripped_samples(w, grid, gaussian_included)
    x, y, t = grid.mesh()
    dq = quantizer_values(spin, x, y, t)
    rho = np.einsum("abc,abcij->ij", vals * grid.weights(), dq)
    return DensityMatrix(spin, rho)


def dual_symbol_values(op, x, y, theta) -> np.ndarray:
    mat = _matrix(op)
    spin = Spin(mat.shape[0] - 1)
    dq = quantizer_values(spin, x, y, theta)
    return np.einsum("ab,...ba->...", mat, dq)


def dual_symbol(op, point) -> complex:
    """tr(A D(x, y, theta))."""
    p = _as_point(point)
    return complex(dual_symbol_values(op, p.x, p.y, p.theta))


def expectation(op, rho, grid: QuadratureGrid) -> float:
    """Mean value as the phase-space integral of dual symbol times w."""
    x, y, t = grid.mesh()
    f = dual_symbol_values(op, x, y, t)
    w = h_distribution_values(rho, x, y, t, gaussian=False)
    return float(np.sum(grid.weights() * f * w).real)


def _xy_weights(grid: QuadratureGrid) -> np.ndarray:
    return grid.xy_weights[:, None] * grid.xy_weights[None, :]


def normalization_defect(rho, theta: float, grid: QuadratureGrid) -> float:
    """|integral of w(x, y, theta) dx dy - 1| at fixed theta."""
    x = grid.xy_nodes[:, None]
    y = grid.xy_nodes[None, :]
    w = h_distribution_values(rho, x, y, theta, gaussian=False)
    return abs(float(np.sum(_xy_weights(grid) * w)) - 1.0)


def completeness_defect(spin: "Spin | float", theta: float, grid: QuadratureGrid) -> float:
    """Max-norm of (integral of |x,y,theta><x,y,theta| dx dy) - identity."""
    spin = Spin.of(spin)
    x = grid.xy_nodes[:, None]
    y = grid.xy_nodes[None, :]
    v = amplitude_poly(spin, x, y, theta)
    total = np.einsum("ab,abi,abk->ik", _xy_weights(grid), v, v.conj())
    return float(np.max(np.abs(total - np.eye(spin.dim))))


PRIOR_TOL = 1e-8


def joint_distribution(w: Callable, prior: Callable, grid: QuadratureGrid) -> Callable:
    """P(x, y, theta) = prior(theta) * w(x, y | theta).

    The prior is checked on the theta nodes of ``grid``: nonnegative, and
    integrating to 1 over [0, 2pi) within 1e-8.
    """
    p = np.broadcast_to(np.asarray(prior(grid.theta_nodes), dtype=float), grid.theta_nodes.shape)
    if np.any(p < 0):
        k = int(np.argmax(p < 0))
        raise ValueError(f"prior is negative at theta={grid.theta_nodes[k]!r}")
    mass = float(np.sum(p) * grid.theta_weight)
    if abs(mass - 1.0) > PRIOR_TOL:
        raise ValueError(f"prior integrates to {mass!r}, not 1")

    def joint(x, y, theta):
        return np.asarray(prior(theta), dtype=float) * w(x, y, theta)

    return joint
