import math

import numpy as np
import pytest
import scipy.linalg

from spinhrep.dynamics import (
    LarmorParams,
    evolution_operator,
    h_distribution_t,
    larmor_hamiltonian,
    propagator,
    psi_t,
    rho_t,
    spin_means_t,
)
from spinhrep.hrep import h_distribution_values, normalization_defect
from spinhrep.quad import grid_for_spin
from spinhrep.spincore import Spin

P = LarmorParams(1.0)
GRID = grid_for_spin(0.5)


class TestParams:
    def test_invalid(self):
        with pytest.raises(ValueError):
            LarmorParams(-1.0)
        with pytest.raises(ValueError):
            LarmorParams(1.0, [0.0, np.inf])


class TestEvolution:
    def test_identity_at_zero(self):
        assert np.allclose(evolution_operator(P, 0.0).entries, np.eye(2), atol=0)

    def test_half_period(self):
        u = np.asarray(evolution_operator(P, math.pi).entries)
        assert np.max(np.abs(u - (-1j) * np.array([[0, 1], [1, 0]]))) < 1e-15

    @pytest.mark.parametrize("t", [0.1, 1.7, 4.0, 11.3])
    def test_unitary_and_matches_expm(self, t):
        u = np.asarray(evolution_operator(LarmorParams(0.8), t).entries)
        assert np.max(np.abs(u @ u.conj().T - np.eye(2))) < 1e-14
        h = np.asarray(larmor_hamiltonian(0.5, 0.8).entries)
        assert np.max(np.abs(u - scipy.linalg.expm(-1j * h * t))) < 1e-14

    @pytest.mark.parametrize("tj", [1, 2, 3, 5])
    def test_general_propagator(self, tj):
        h = larmor_hamiltonian(Spin(tj), 1.3)
        for t in (0.4, 2.2):
            u = np.asarray(propagator(h, t).entries)
            assert np.max(np.abs(u - scipy.linalg.expm(-1j * np.asarray(h.entries) * t))) < 1e-12

    def test_propagator_matches_closed_form(self):
        h = larmor_hamiltonian(0.5, 1.0)
        assert np.max(np.abs(propagator(h, 2.0).entries - evolution_operator(P, 2.0).entries)) < 1e-14


class TestState:
    def test_examples(self):
        assert np.allclose(rho_t(P, 0.0).entries, np.diag([1, 0]), atol=1e-16)
        assert np.allclose(rho_t(P, math.pi).entries, np.diag([0, 1]), atol=1e-15)
        assert np.allclose(rho_t(P, math.pi / 2).entries, [[0.5, 0.5j], [-0.5j, 0.5]], atol=1e-15)

    @pytest.mark.parametrize("t", np.linspace(0, 2 * np.pi, 7))
    def test_pure_and_consistent(self, t):
        rho = np.asarray(rho_t(P, t).entries)
        assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-12)
        psi = psi_t(P, t)
        assert np.max(np.abs(np.outer(psi, psi.conj()) - rho)) < 1e-15


class TestDistribution:
    def test_examples(self):
        x, y = np.array([0.3, -1.2]), np.array([1.1, 0.5])
        r2 = x**2 + y**2
        assert np.allclose(h_distribution_t(P, 0.0, x, y, 0.7), 2 / np.pi * np.exp(-r2) * x**2, atol=1e-16)
        assert np.allclose(h_distribution_t(P, np.pi, x, y, 0.7), 2 / np.pi * np.exp(-r2) * y**2, atol=1e-15)

    def test_matches_trace_path(self):
        rng = np.random.default_rng(0)
        t, x, y, th = rng.uniform([0, -3, -3, 0], [10, 3, 3, 2 * np.pi], size=(200, 4)).T
        closed = h_distribution_t(P, t, x, y, th)
        generic = np.array([h_distribution_values(rho_t(P, ti), xi, yi, ti_) for ti, xi, yi, ti_ in zip(t, x, y, th)])
        assert np.max(np.abs(closed - generic)) < 1e-13

    @pytest.mark.parametrize("t", [0.0, 1.0, 3.3])
    def test_normalized(self, t):
        for theta in (0.0, 2.0):
            assert normalization_defect(rho_t(P, t), theta, GRID) < 1e-11


class TestMeans:
    @pytest.mark.parametrize(
        "wt, expect", [(0.0, (0, 0, 0.5)), (math.pi / 2, (0, -0.5, 0)), (math.pi, (0, 0, -0.5))]
    )
    def test_examples(self, wt, expect):
        assert np.allclose(spin_means_t(P, wt, GRID), expect, atol=1e-10)

    def test_circle(self):
        params = LarmorParams(2.5)
        for t in np.linspace(0, 3, 13):
            sx, sy, sz = spin_means_t(params, t, GRID)
            assert abs(sx) < 1e-10
            assert sy * sy + sz * sz == pytest.approx(0.25, abs=1e-10)
            assert sy == pytest.approx(-0.5 * math.sin(2.5 * t), abs=1e-10)
