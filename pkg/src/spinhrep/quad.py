"""Quadrature grids for the phase-space integrals over (x, y, theta) and the
angular integrals over the sphere.

Every integrand handled by the package is a Gaussian exp(-(x^2+y^2)) times a
polynomial in (x, y), times a trigonometric polynomial in theta, so a
Gauss-Hermite x Gauss-Hermite x uniform-theta product rule of the right size
is exact up to roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .spincore import Spin

__all__ = [
    "QuadratureGrid",
    "SphereGrid",
    "QuadratureError",
    "gauss_hermite_rule",
    "min_sizes_for_spin",
    "grid_for_spin",
    "make_grid",
    "integrate_phase_space",
    "sphere_grid_for_spin",
    "make_sphere_grid",
    "SAFETY_FACTOR",
]

MAX_NODES = 200
SAFETY_FACTOR = 1.5


class QuadratureError(ValueError):
    pass


def gauss_hermite_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point rule for weight exp(-z^2)."""
    if not 1 <= n <= MAX_NODES:
        raise QuadratureError(f"Gauss-Hermite order must be in [1, {MAX_NODES}], got {n}")
    nodes, weights = np.polynomial.hermite.hermgauss(n)
    # enforce exact mirror symmetry of the rule
    nodes = (nodes - nodes[::-1]) / 2
    weights = (weights + weights[::-1]) / 2
    return nodes, weights


@dataclass(frozen=True)
class QuadratureGrid:
    xy_nodes: np.ndarray
    xy_weights: np.ndarray
    theta_nodes: np.ndarray
    theta_weight: float

    @property
    def n_xy(self) -> int:
        return len(self.xy_nodes)

    @property
    def n_theta(self) -> int:
        return len(self.theta_nodes)

    @property
    def size(self) -> int:
        return self.n_xy * self.n_xy * self.n_theta

    def mesh(self):
        """Broadcastable (x, y, theta) arrays of shape (n, n, N)."""
        x = self.xy_nodes[:, None, None]
        y = self.xy_nodes[None, :, None]
        t = self.theta_nodes[None, None, :]
        return x, y, t

    def weights(self) -> np.ndarray:
        """Product weights for the Gaussian-stripped integrand, shape (n, n, N)."""
        w = self.xy_weights[:, None] * self.xy_weights[None, :]
        return w[:, :, None] * np.full(self.n_theta, self.theta_weight)[None, None, :]


def min_sizes_for_spin(spin: "Spin | float") -> tuple[int, int]:
    """Smallest exact (n_xy, n_theta) for the integrands generated at this spin.

    Polynomial degree in x (or y) reaches 8j, so 2n - 1 >= 8j; theta harmonics
    reach |k| = 4j, so N >= 4j + 1.
    """
    spin = Spin.of(spin)
    four_j = 2 * spin.twice_j
    return four_j + 1, four_j + 1


def make_grid(n_xy: int, n_theta: int) -> QuadratureGrid:
    if n_theta < 1:
        raise QuadratureError(f"theta grid needs at least one node, got {n_theta}")
    nodes, weights = gauss_hermite_rule(n_xy)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    return QuadratureGrid(nodes, weights, theta, 2 * np.pi / n_theta)


def grid_for_spin(spin: "Spin | float", n_xy: int | None = None, n_theta: int | None = None) -> QuadratureGrid:
    """Exact grid for ``spin``; defaults are the minimal sizes times 1.5.

    Explicit overrides below the minimal exact sizes are rejected.
    """
    spin = Spin.of(spin)
    nmin, tmin = min_sizes_for_spin(spin)
    if n_xy is None:
        n_xy = math.ceil(SAFETY_FACTOR * nmin)
    if n_theta is None:
        n_theta = math.ceil(SAFETY_FACTOR * tmin)
    if n_xy < nmin or n_theta < tmin:
        raise QuadratureError(
            f"grid ({n_xy}, {n_theta}) is below the exact minimum ({nmin}, {tmin}) for {spin}"
        )
    return make_grid(n_xy, n_theta)


def integrate_phase_space(
    f: Callable, grid: QuadratureGrid, *, gaussian_included: bool = True
) -> complex:
    """Integrate f over theta in [0, 2pi) and (x, y) in R^2.

    With ``gaussian_included`` (the default) f is the full integrand and the
    factor exp(-(x^2+y^2)) is divided out at the nodes. Otherwise f is the
    smooth part only and the Gaussian weight is implied, which avoids the
    exp(+x^2) growth at outer nodes. f is called once with broadcast arrays.
    """
    x, y, t = grid.mesh()
    vals = np.broadcast_to(np.asarray(f(x, y, t)), (grid.n_xy, grid.n_xy, grid.n_theta))
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i, k, l = np.argwhere(bad)[0]
        raise QuadratureError(
            f"non-finite integrand at x={grid.xy_nodes[i]!r}, y={grid.xy_nodes[k]!r}, "
            f"theta={grid.theta_nodes[l]!r}"
        )
    if gaussian_included:
        vals = vals * np.exp(x**2 + y**2)
    total = np.sum(vals * grid.weights())
    if np.iscomplexobj(total):
        return complex(total)
    return complex(float(total))


@dataclass(frozen=True)
class SphereGrid:
    """Product rule on the sphere: Gauss-Legendre in cos(beta) times uniform alpha.

    Weights sum to 4 pi and integrate against sin(beta) d(beta) d(alpha).
    """

    alpha_nodes: np.ndarray
    beta_nodes: np.ndarray
    weights: np.ndarray  # shape (n_alpha, n_beta)

    @property
    def n_alpha(self) -> int:
        return len(self.alpha_nodes)

    @property
    def n_beta(self) -> int:
        return len(self.beta_nodes)

    def points(self):
        """Iterate (alpha, beta, weight) in a fixed order."""
        for a_i, a in enumerate(self.alpha_nodes):
            for b_i, b in enumerate(self.beta_nodes):
                yield float(a), float(b), float(self.weights[a_i, b_i])


def make_sphere_grid(n_alpha: int, n_beta: int) -> SphereGrid:
    if n_alpha < 1 or n_beta < 1:
        raise QuadratureError("sphere grid needs at least one node per axis")
    u, wu = np.polynomial.legendre.leggauss(n_beta)
    beta = np.arccos(u)
    alpha = 2 * np.pi * np.arange(n_alpha) / n_alpha
    weights = (2 * np.pi / n_alpha) * np.broadcast_to(wu, (n_alpha, n_beta))
    return SphereGrid(alpha, beta, np.array(weights))


def sphere_min_sizes(spin: "Spin | float") -> tuple[int, int]:
    """Minimal exact (n_alpha, n_beta): products of multipoles up to degree 2j."""
    spin = Spin.of(spin)
    return 2 * spin.twice_j + 1, spin.twice_j + 1


def sphere_grid_for_spin(spin: "Spin | float", n_alpha: int | None = None, n_beta: int | None = None) -> SphereGrid:
    spin = Spin.of(spin)
    amin, bmin = sphere_min_sizes(spin)
    n_alpha = amin if n_alpha is None else n_alpha
    n_beta = bmin if n_beta is None else n_beta
    if n_alpha < amin or n_beta < bmin:
        raise QuadratureError(
            f"angular grid ({n_alpha}, {n_beta}) too small for {spin}: need at least ({amin}, {bmin})"
        )
    return make_sphere_grid(n_alpha, n_beta)
