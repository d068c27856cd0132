"""Spin-1/2 magnetic moment in a constant field along Ox.

H = (omega_c / 2) sigma_x with hbar = 1; the spin starts along +Oz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import hrep
from .quad import QuadratureGrid
from .spincore import DensityMatrix, Spin, SpinOperator, angular_momentum_matrices

__all__ = [
    "LarmorParams",
    "larmor_hamiltonian",
    "evolution_operator",
    "propagator",
    "psi_t",
    "rho_t",
    "h_distribution_t",
    "spin_means_t",
]

HALF = Spin(1)


@dataclass(frozen=True)
class LarmorParams:
    omega_c: float
    times: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if not math.isfinite(self.omega_c) or self.omega_c < 0:
            raise ValueError(f"omega_c must be finite and nonnegative, got {self.omega_c}")
        times = np.asarray(self.times, dtype=float)
        if not np.all(np.isfinite(times)):
            raise ValueError("sample times must be finite")
        object.__setattr__(self, "times", times)


def larmor_hamiltonian(spin: "Spin | float", omega_c: float) -> SpinOperator:
    """omega_c * Jx, which is (omega_c/2) sigma_x at spin 1/2."""
    jx = angular_momentum_matrices(spin)[0]
    return SpinOperator(jx.spin, omega_c * jx.entries)


def propagator(hamiltonian: SpinOperator, t: float) -> SpinOperator:
    """exp(-i H t) for a constant Hermitian H, by eigendecomposition."""
    evals, evecs = np.linalg.eigh(np.asarray(hamiltonian.entries))
    u = (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T
    return SpinOperator(hamiltonian.spin, u)


def evolution_operator(params: LarmorParams, t: float) -> SpinOperator:
    c = math.cos(params.omega_c * t / 2)
    s = math.sin(params.omega_c * t / 2)
    return SpinOperator(HALF, [[c, -1j * s], [-1j * s, c]])


def psi_t(params: LarmorParams, t: float) -> np.ndarray:
    return np.asarray(evolution_operator(params, t).entries)[:, 0]


def rho_t(params: LarmorParams, t: float) -> DensityMatrix:
    c = math.cos(params.omega_c * t / 2)
    s = math.sin(params.omega_c * t / 2)
    return DensityMatrix(HALF, [[c * c, 1j * s * c], [-1j * s * c, s * s]])


def h_distribution_t(params: LarmorParams, t, x, y, theta):
    """Closed-form H-distribution of the evolving state; broadcasts over arguments."""
    wt = params.omega_c * np.asarray(t, dtype=float)
    r2 = x**2 + y**2
    return np.exp(-r2) * (r2 + (x**2 - y**2) * np.cos(wt) + 2 * x * y * np.sin(wt) * np.sin(theta)) / math.pi


def spin_means_t(params: LarmorParams, t: float, grid: QuadratureGrid) -> tuple[float, float, float]:
    """(<Sx>, <Sy>, <Sz>) from dual symbols integrated against the H-distribution."""
    rho = rho_t(params, t)
    jx, jy, jz, _ = angular_momentum_matrices(HALF)
    return tuple(hrep.expectation(op, rho, grid) for op in (jx, jy, jz))
