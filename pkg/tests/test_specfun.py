import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st
from scipy.special import binom

from spinhrep.quad import gauss_hermite_rule
from spinhrep.spincore import Spin, angular_momentum_matrices
from spinhrep.specfun import (
    DomainError,
    HalfInteger,
    clebsch_gordan,
    factorial_exact,
    half,
    hermite_eval,
    jacobi_eval,
    log_factorial,
    triple_hermite_integral,
    wigner_small_d,
)


def hermite_explicit(n, z):
    """H_n(z) = n! sum_k (-1)^k (2z)^(n-2k) / (k! (n-2k)!)"""
    return sum(
        (-1) ** k * math.factorial(n) / (math.factorial(k) * math.factorial(n - 2 * k)) * (2 * z) ** (n - 2 * k)
        for k in range(n // 2 + 1)
    )


def jacobi_series(n, a, b, x):
    return sum(
        binom(n + a, n - s) * binom(n + b, s) * ((x - 1) / 2) ** s * ((x + 1) / 2) ** (n - s)
        for s in range(n + 1)
    )


def cg_ladder_table(j1, j2):
    """CG coefficients from explicit coupled states built with J_- on j1 x j2."""
    s1, s2 = Spin.of(j1), Spin.of(j2)
    a = [np.asarray(op.entries) for op in angular_momentum_matrices(s1)]
    b = [np.asarray(op.entries) for op in angular_momentum_matrices(s2)]
    e1, e2 = np.eye(s1.dim), np.eye(s2.dim)
    jx = np.kron(a[0], e2) + np.kron(e1, b[0])
    jy = np.kron(a[1], e2) + np.kron(e1, b[1])
    lower = jx - 1j * jy
    m1s, m2s = s1.m_values(), s2.m_values()
    mtot = np.add.outer(m1s, m2s).ravel()
    table = {}
    found = []
    J = j1 + j2
    while J >= abs(j1 - j2) - 1e-9:
        sub = np.where(np.isclose(mtot, J))[0]
        vecs = np.zeros((len(mtot), len(sub)), dtype=complex)
        for c, idx in enumerate(sub):
            vecs[idx, c] = 1
        for f in found:
            vecs -= np.outer(f, f.conj() @ vecs)
        u, sv, _ = np.linalg.svd(vecs)
        top = u[:, 0]
        i_lead = int(np.argmin(np.abs(m1s - j1))) * s2.dim + int(np.argmin(np.abs(m2s - (J - j1))))
        top = top / top[i_lead] * abs(top[i_lead])  # Condon-Shortley sign
        state, M = top, J
        while M >= -J - 1e-9:
            found.append(state)
            for i, m1 in enumerate(m1s):
                for k, m2 in enumerate(m2s):
                    table[(m1, m2, J, M)] = state[i * s2.dim + k].real
            nxt = lower @ state
            norm = np.linalg.norm(nxt)
            if norm < 1e-12:
                break
            state, M = nxt / norm, M - 1
        J -= 1
    return table


class TestHalfInteger:
    def test_arithmetic_exact(self):
        a, b = half(Fraction(3, 2)), half(0.5)
        assert a + b == 2
        assert a - b == 1
        assert -a == half(-1.5)
        assert (a + b).is_integral and not a.is_integral

    def test_rejects_non_half(self):
        with pytest.raises(DomainError):
            half(0.3)
        with pytest.raises(DomainError):
            int(half(0.5))

    def test_str(self):
        assert str(HalfInteger(3)) == "3/2"
        assert str(HalfInteger(4)) == "2"


class TestHermite:
    def test_examples(self):
        assert hermite_eval(0, 3.7) == 1
        assert hermite_eval(1, 0.5) == 1.0
        assert hermite_eval(2, 1.0) == 2.0

    @pytest.mark.parametrize("n", range(11))
    def test_matches_explicit_sum(self, n):
        for z in (-1.3, 0.0, 0.4, 2.2):
            assert hermite_eval(n, z) == pytest.approx(hermite_explicit(n, z), rel=1e-12, abs=1e-12)

    def test_vectorised(self):
        z = np.linspace(-2, 2, 7)
        assert np.allclose(hermite_eval(5, z), [hermite_explicit(5, v) for v in z], rtol=1e-13)

    def test_orthogonality(self):
        nodes, weights = gauss_hermite_rule(13)
        for n in range(13):
            for k in range(13):
                q = np.sum(weights * hermite_eval(n, nodes) * hermite_eval(k, nodes))
                norm = 2.0**n * math.factorial(n) * math.sqrt(math.pi)
                if n == k:
                    assert q == pytest.approx(norm, rel=1e-9)
                else:
                    scale = 2.0 ** max(n, k) * math.factorial(max(n, k))
                    assert abs(q) / scale < 1e-9

    def test_negative_degree(self):
        with pytest.raises(DomainError):
            hermite_eval(-1, 0.0)


class TestFactorials:
    def test_exact(self):
        assert factorial_exact(0) == 1
        assert factorial_exact(5) == 120
        assert factorial_exact(20) == 2432902008176640000

    def test_overflow(self):
        with pytest.raises(OverflowError):
            factorial_exact(21)

    def test_log(self):
        assert log_factorial(10) == pytest.approx(math.log(3628800), rel=1e-14)
        assert log_factorial(10) == pytest.approx(15.104412573, abs=1e-9)
        for n in range(60):
            assert log_factorial(n) == pytest.approx(math.log(math.factorial(n)), rel=1e-12, abs=1e-14)


class TestJacobi:
    def test_examples(self):
        assert jacobi_eval(0, 0.7, 2.0, 0.1) == 1
        assert jacobi_eval(1, 0, 0, 0.5) == 0.5
        assert jacobi_eval(2, 1, 1, 0.3) == pytest.approx(jacobi_series(2, 1, 1, 0.3), rel=1e-14)

    @pytest.mark.parametrize("n", range(8))
    @pytest.mark.parametrize("a,b", [(0, 0), (1, 2), (3, 0), (0.5, 1.5), (4, 4)])
    def test_series_oracle(self, n, a, b):
        for x in (-0.9, -0.2, 0.35, 1.0):
            assert jacobi_eval(n, a, b, x) == pytest.approx(jacobi_series(n, a, b, x), rel=1e-11, abs=1e-12)


def d_expm(j, m1, m2, beta):
    """<j m2| exp(-i beta Jy) |j m1> by matrix exponential."""
    spin = Spin.of(j)
    jy = np.asarray(angular_momentum_matrices(spin)[1].entries)
    u = scipy.linalg.expm(-1j * beta * jy)
    return u[spin.index(m2), spin.index(m1)].real


class TestWignerSmallD:
    def test_examples(self):
        for beta in (0.0, 0.4, 2.5):
            assert wigner_small_d(0.5, 0.5, 0.5, beta) == pytest.approx(math.cos(beta / 2), abs=1e-15)
            assert wigner_small_d(1, 0, 0, beta) == pytest.approx(math.cos(beta), abs=1e-15)
        for tj in range(7):
            for i in range(tj + 1):
                m = tj / 2 - i
                assert wigner_small_d(tj / 2, m, m, 0.0) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("twice_j", range(7))
    def test_matches_matrix_exponential(self, twice_j):
        spin = Spin(twice_j)
        for beta in (0.0, 0.3, 1.6, np.pi):
            for m1 in spin.projections():
                for m2 in spin.projections():
                    assert wigner_small_d(spin.j, m1, m2, beta) == pytest.approx(
                        d_expm(spin.j, m1, m2, beta), abs=1e-12
                    )

    @pytest.mark.parametrize("twice_j", range(7))
    def test_orthogonal(self, twice_j):
        spin = Spin(twice_j)
        ms = spin.projections()
        for beta in (0.2, 1.1, 3.0):
            d = np.array([[wigner_small_d(spin.j, a, b, beta) for b in ms] for a in ms])
            assert np.max(np.abs(d @ d.T - np.eye(spin.dim))) < 1e-10

    def test_large_j_finite(self):
        v = wigner_small_d(20, 3, -7, 1.2)
        assert math.isfinite(v) and abs(v) <= 1

    def test_invalid(self):
        with pytest.raises(DomainError):
            wigner_small_d(1, 2, 0, 0.1)
        with pytest.raises(DomainError):
            wigner_small_d(1, 0.5, 0.5, 0.1)


class TestClebschGordan:
    def test_examples(self):
        assert clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        assert clebsch_gordan(1, 1, 1, -1, 0, 0) == pytest.approx(1 / math.sqrt(3), abs=1e-15)
        assert clebsch_gordan(0.5, 0.5, 0.5, 0.5, 1, 1) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("tj1", range(5))
    @pytest.mark.parametrize("tj2", range(5))
    def test_ladder_oracle(self, tj1, tj2):
        table = cg_ladder_table(tj1 / 2, tj2 / 2)
        for (m1, m2, J, M), val in table.items():
            assert clebsch_gordan(tj1 / 2, m1, tj2 / 2, m2, J, M) == pytest.approx(val, abs=1e-12)

    def test_sympy_spot_checks(self):
        from sympy import S
        from sympy.physics.quantum.cg import CG

        cases = [(2, 1, 1.5, -0.5, 2.5, 0.5), (3, -2, 2, 1, 2, -1), (2.5, 1.5, 2.5, -0.5, 3, 1)]
        for j1, m1, j2, m2, J, M in cases:
            ref = float(CG(*(S(Fraction(v).limit_denominator(2)) for v in (j1, m1, j2, m2, J, M))).doit())
            assert clebsch_gordan(j1, m1, j2, m2, J, M) == pytest.approx(ref, abs=1e-12)

    def test_selection_rules_give_zero(self):
        assert clebsch_gordan(1, 1, 1, 1, 1, 1) == 0.0  # M mismatch
        assert clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0  # triangle
        assert clebsch_gordan(1, 0, 1, 0, 1, 0) == 0.0  # vanishes by symmetry

    def test_unitarity(self):
        for tj1 in range(5):
            for tj2 in range(5):
                j1, j2 = tj1 / 2, tj2 / 2
                pairs = [(j1 - a, j2 - b) for a in range(tj1 + 1) for b in range(tj2 + 1)]
                cols = [
                    (abs(j1 - j2) + k, abs(j1 - j2) + k - i)
                    for k in range(min(tj1, tj2) + 1)
                    for i in range(int(2 * (abs(j1 - j2) + k)) + 1)
                ]
                mat = np.array([[clebsch_gordan(j1, a, j2, b, J, M) for J, M in cols] for a, b in pairs])
                assert np.max(np.abs(mat @ mat.T - np.eye(len(pairs)))) < 1e-10


def triple_quadrature(p, n, k):
    nodes, weights = gauss_hermite_rule(20)
    return float(np.sum(weights * hermite_eval(p, nodes) * hermite_eval(n, nodes) * hermite_eval(k, nodes)))


class TestTripleHermite:
    def test_examples(self):
        assert triple_hermite_integral(1, 1, 1) == 0.0
        assert triple_hermite_integral(0, 0, 0) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
        assert triple_hermite_integral(1, 1, 2) == pytest.approx(8 * math.sqrt(math.pi), rel=1e-15)
        assert triple_hermite_integral(1, 1, 2) == pytest.approx(14.17963, abs=1e-5)

    def test_against_quadrature(self):
        for p in range(9):
            for n in range(9):
                for k in range(9):
                    closed = triple_hermite_integral(p, n, k)
                    q = triple_quadrature(p, n, k)
                    if closed == 0.0:
                        # relative to the size of the integrand terms
                        scale = math.sqrt(math.pi) * 2.0**12 * math.factorial(8)
                        assert abs(q) / scale < 1e-9
                    else:
                        assert q == pytest.approx(closed, rel=1e-9)

    @given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
    def test_symmetric(self, p, n, k):
        v = triple_hermite_integral(p, n, k)
        for perm in ((n, p, k), (k, n, p), (p, k, n), (n, k, p), (k, p, n)):
            assert triple_hermite_integral(*perm) == v

    def test_odd_sum_zero(self):
        assert triple_hermite_integral(2, 3, 4) == 0.0
        assert triple_hermite_integral(0, 1, 5) == 0.0  # 5 > s = 3
