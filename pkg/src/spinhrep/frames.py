"""Numerical dual frames, used to cross-check closed-form quantizers.

Given a dequantizer family sampled at quadrature nodes with weights mu_k,
the canonical dual is D_k = S^{-1} U_k with the frame superoperator
S = sum_k mu_k |U_k>><<U_k|. Any exact dual satisfies
rho = sum_k mu_k tr(rho U_k) D_k.
"""

from __future__ import annotations

import math

import numpy as np

from .quad import QuadratureGrid, SphereGrid
from .spincore import Spin
from .hrep import amplitude_poly
from .specfun import hermite_table
from .tomo import TomogramPoint, tomo_dequantizer

__all__ = ["frame_operator", "canonical_dual", "tomo_canonical_dual", "h_quantizer_coefficients_lstsq"]


def frame_operator(elements: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """S = sum_k w_k vec(U_k) vec(U_k)^dagger for elements of shape (K, d, d)."""
    k = elements.shape[0]
    vecs = elements.reshape(k, -1)
    return np.einsum("k,ka,kb->ab", weights, vecs, vecs.conj())


def canonical_dual(frame: np.ndarray, elements: np.ndarray) -> np.ndarray:
    """Apply S^{-1} to each element of shape (..., d, d)."""
    d = elements.shape[-1]
    vecs = elements.reshape(-1, d * d)
    duals = np.linalg.solve(frame, vecs.T).T
    return duals.reshape(elements.shape)


def tomo_canonical_dual(spin: "Spin | float", grid: SphereGrid, points) -> np.ndarray:
    """Canonical dual of the tomographic frame, evaluated at ``points``.

    The frame measure is (1/4pi) sin(beta) d(beta) d(alpha) summed over m.
    """
    spin = Spin.of(spin)
    elems, wts = [], []
    for a, b, w in grid.points():
        for m in spin.projections():
            elems.append(tomo_dequantizer(spin, TomogramPoint(m, a, b)).entries)
            wts.append(w / (4 * math.pi))
    s = frame_operator(np.array(elems), np.array(wts))
    targets = np.array([tomo_dequantizer(spin, p).entries for p in points])
    return canonical_dual(s, targets)


def h_quantizer_coefficients_lstsq(spin: "Spin | float", grid: QuadratureGrid) -> np.ndarray:
    """Fit c_{mm'} in D_{mm'} = c_{mm'} e^{i(m-m')theta} H_{2j+m+m'}(x) H_{2j-m-m'}(y).

    For each entry the coefficient is the least-squares solution of the d^2
    reconstruction conditions sum_k mu_k <jb|U_k|ja> D_{mm'}(k) = delta_{am} delta_{bm'}
    over the basis operators |ja><jb|, using only the dequantizer and the grid.
    """
    spin = Spin.of(spin)
    tj, d = spin.twice_j, spin.dim
    x, y, t = grid.mesh()
    v = amplitude_poly(spin, x, y, t)  # Gaussian carried by the grid weights
    u = np.einsum("...a,...b->...ab", v, v.conj())
    mu = grid.weights()
    hx = hermite_table(2 * tj, x)
    hy = hermite_table(2 * tj, y)
    m = spin.m_values()
    coeffs = np.empty((d, d))
    for i in range(d):
        for k in range(d):
            phi = np.exp(1j * (m[i] - m[k]) * t) * hx[2 * tj - i - k] * hy[i + k]
            g = np.einsum("abc,abcqp->pq", mu * np.broadcast_to(phi, mu.shape), u)
            target = np.zeros((d, d))
            target[i, k] = 1.0
            sol, *_ = np.linalg.lstsq(g.reshape(-1, 1), target.reshape(-1).astype(complex), rcond=None)
            coeffs[i, k] = sol[0].real
    return coeffs
