"""Spin-j Hilbert-space primitives.

Basis ordering is fixed everywhere in the package: index 0 is m = +j and
the index increases as m descends to -j. hbar = 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .specfun import HalfInteger, HalfLike, half, wigner_small_d

__all__ = [
    "Spin",
    "SpinState",
    "DensityMatrix",
    "SpinOperator",
    "DensityError",
    "InvalidHermiticity",
    "InvalidTrace",
    "NotPositive",
    "angular_momentum_matrices",
    "rotation_matrix",
    "density_from_pure",
    "validate_density",
    "random_density",
    "density_to_json",
    "density_from_json",
    "HERMITICITY_TOL",
    "TRACE_TOL",
    "PSD_TOL",
]

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
PURE_NORM_TOL = 1e-8


@dataclass(frozen=True)
class Spin:
    twice_j: int

    def __post_init__(self):
        if self.twice_j < 0:
            raise ValueError(f"twice_j must be nonnegative, got {self.twice_j}")

    @classmethod
    def of(cls, j: "Spin | HalfLike") -> "Spin":
        if isinstance(j, Spin):
            return j
        return cls(half(j).twice_value)

    @property
    def j(self) -> HalfInteger:
        return HalfInteger(self.twice_j)

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    def projections(self) -> list[HalfInteger]:
        """m = +j, j-1, ..., -j in basis order."""
        return [HalfInteger(self.twice_j - 2 * i) for i in range(self.dim)]

    def m_values(self) -> np.ndarray:
        return self.twice_j / 2 - np.arange(self.dim)

    def index(self, m: HalfLike) -> int:
        m = half(m)
        if abs(m.twice_value) > self.twice_j or (self.twice_j - m.twice_value) % 2:
            raise ValueError(f"invalid projection m={m} for j={self.j}")
        return (self.twice_j - m.twice_value) // 2

    def __str__(self) -> str:
        return f"j={self.j}"


@dataclass(frozen=True)
class SpinState:
    spin: Spin
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.spin.dim,):
            raise ValueError(f"expected {self.spin.dim} amplitudes, got shape {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class SpinOperator:
    spin: Spin
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.array(self.entries, dtype=complex)
        d = self.spin.dim
        if mat.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix for {self.spin}, got {mat.shape}")
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)

    def __matmul__(self, other: "SpinOperator") -> "SpinOperator":
        return SpinOperator(self.spin, self.entries @ other.entries)

    def dagger(self) -> "SpinOperator":
        return SpinOperator(self.spin, self.entries.conj().T)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class DensityMatrix(SpinOperator):
    """Density matrix; construct through ``validate_density`` to check invariants."""


class DensityError(ValueError):
    """Matrix rejected as a density matrix."""


class InvalidHermiticity(DensityError):
    pass


class InvalidTrace(DensityError):
    pass


class NotPositive(DensityError):
    pass


def angular_momentum_matrices(spin: "Spin | HalfLike"):
    """Return (Jx, Jy, Jz, J2) in the descending-m basis."""
    spin = Spin.of(spin)
    j = spin.twice_j / 2
    m = spin.m_values()
    d = spin.dim
    # <m+1| J+ |m> sits one row above the diagonal in descending order
    jplus = np.zeros((d, d), dtype=complex)
    for i in range(1, d):
        jplus[i - 1, i] = np.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2
    jy = (jplus - jminus) / 2j
    jz = np.diag(m).astype(complex)
    j2 = j * (j + 1) * np.eye(d, dtype=complex)
    return tuple(SpinOperator(spin, a) for a in (jx, jy, jz, j2))


def small_d_matrix(spin: "Spin | HalfLike", beta: float) -> np.ndarray:
    """Matrix [d_{m1 m2}(beta)] with rows m1 and columns m2, descending order."""
    spin = Spin.of(spin)
    ms = spin.projections()
    return np.array([[wigner_small_d(spin.j, a, b, beta) for b in ms] for a in ms])


def rotation_matrix(spin: "Spin | HalfLike", alpha: float, beta: float, gamma: float) -> SpinOperator:
    """Rotation with entries D_{m1m2} = exp(i m2 alpha) d_{m1m2}(beta) exp(i m1 gamma).

    As an operator product this is exp(i gamma Jz) exp(i beta Jy) exp(i alpha Jz).
    """
    spin = Spin.of(spin)
    m = spin.m_values()
    d = small_d_matrix(spin, beta)
    mat = np.exp(1j * m * gamma)[:, None] * d * np.exp(1j * m * alpha)[None, :]
    return SpinOperator(spin, mat)


def density_from_pure(state: SpinState) -> DensityMatrix:
    norm = state.norm()
    if abs(norm - 1.0) > PURE_NORM_TOL:
        raise ValueError(f"state is not normalized (|psi| = {norm:.3e})")
    psi = state.amplitudes
    return DensityMatrix(state.spin, np.outer(psi, psi.conj()))


def validate_density(matrix, spin: "Spin | HalfLike | None" = None) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity; return a DensityMatrix."""
    if isinstance(matrix, SpinOperator):
        spin = matrix.spin if spin is None else Spin.of(spin)
        mat = np.asarray(matrix.entries)
    else:
        mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DensityError(f"density matrix must be square, got shape {mat.shape}")
    if spin is None:
        spin = Spin(mat.shape[0] - 1)
    spin = Spin.of(spin)
    if mat.shape != (spin.dim, spin.dim):
        raise DensityError(f"expected {spin.dim}x{spin.dim} for {spin}, got {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise DensityError("density matrix has non-finite entries")

    herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
    if herm_dev > HERMITICITY_TOL:
        raise InvalidHermiticity(
            f"|rho - rho^dagger| = {herm_dev:.3e} exceeds tolerance {HERMITICITY_TOL:g}"
        )
    trace = np.trace(mat)
    if abs(trace - 1.0) > TRACE_TOL:
        raise InvalidTrace(f"trace = {trace.real:.15g} deviates from 1 by more than {TRACE_TOL:g}")
    lowest = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0])
    if lowest < -PSD_TOL:
        raise NotPositive(f"minimum eigenvalue {lowest:.6g} below -{PSD_TOL:g}")
    return DensityMatrix(spin, mat)


def random_density(spin: "Spin | HalfLike", seed: int, rank: int | None = None) -> DensityMatrix:
    """Ginibre-induced random density matrix G G^dagger / tr, deterministic in seed."""
    spin = Spin.of(spin)
    rng = np.random.default_rng(seed)
    d = spin.dim
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    rho /= np.trace(rho).real
    return DensityMatrix(spin, rho)


def random_hermitian(spin: "Spin | HalfLike", seed: int) -> SpinOperator:
    spin = Spin.of(spin)
    rng = np.random.default_rng(seed)
    d = spin.dim
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return SpinOperator(spin, (a + a.conj().T) / 2)


def density_to_json(rho: SpinOperator) -> str:
    mat = np.asarray(rho.entries)
    payload = {
        "twice_j": rho.spin.twice_j,
        "re": mat.real.tolist(),
        "im": mat.imag.tolist(),
    }
    return json.dumps(payload)


def density_from_json(text: str) -> DensityMatrix:
    """Parse ``{"twice_j": int, "re": [[...]], "im": [[...]]}`` and validate."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DensityError(f"malformed JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise DensityError("density JSON must be an object")
    for key in ("twice_j", "re", "im"):
        if key not in payload:
            raise DensityError(f"missing field '{key}'")
    twice_j = payload["twice_j"]
    if not isinstance(twice_j, int) or isinstance(twice_j, bool) or twice_j < 0:
        raise DensityError("field 'twice_j' must be a nonnegative integer")
    spin = Spin(twice_j)
    parts = []
    for key in ("re", "im"):
        try:
            arr = np.array(payload[key], dtype=float)
        except (TypeError, ValueError) as exc:
            raise DensityError(f"field '{key}' must be a numeric matrix") from exc
        if arr.shape != (spin.dim, spin.dim):
            raise DensityError(
                f"field '{key}' has shape {arr.shape}, expected ({spin.dim}, {spin.dim})"
            )
        parts.append(arr)
    return validate_density(parts[0] + 1j * parts[1], spin)


def operator_from_rows(spin: "Spin | HalfLike", rows: Sequence[Sequence[complex]]) -> SpinOperator:
    return SpinOperator(Spin.of(spin), np.array(rows, dtype=complex))
