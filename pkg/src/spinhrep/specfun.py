"""Special functions: Hermite and Jacobi polynomials, factorials, Wigner
small-d, Clebsch-Gordan coefficients and the triple-Hermite integral.

Angular-momentum labels (j, m, ...) are half-integers. They are accepted as
``HalfInteger``, int, float or ``fractions.Fraction`` and normalised to
``HalfInteger`` internally so that all label arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

__all__ = [
    "DomainError",
    "HalfInteger",
    "half",
    "hermite_eval",
    "hermite_table",
    "factorial_exact",
    "log_factorial",
    "jacobi_eval",
    "wigner_small_d",
    "clebsch_gordan",
    "triple_hermite_integral",
]

FACTORIAL_EXACT_MAX = 20  # largest n with n! < 2**63


class DomainError(ValueError):
    """Arguments outside the domain of a special function."""


@dataclass(frozen=True, order=True)
class HalfInteger:
    """Exact half-integer q, stored as the integer 2q."""

    twice_value: int

    @classmethod
    def of(cls, value: "HalfLike") -> "HalfInteger":
        if isinstance(value, HalfInteger):
            return value
        if isinstance(value, (bool, np.bool_)):
            raise DomainError(f"not a half-integer: {value!r}")
        if isinstance(value, (int, np.integer)):
            return cls(2 * int(value))
        try:
            twice = Fraction(value) * 2
        except (TypeError, ValueError) as exc:
            raise DomainError(f"not a half-integer: {value!r}") from exc
        if twice.denominator != 1:
            raise DomainError(f"not a half-integer: {value!r}")
        return cls(int(twice))

    @property
    def is_integral(self) -> bool:
        return self.twice_value % 2 == 0

    def __int__(self) -> int:
        if not self.is_integral:
            raise DomainError(f"{self} is not integral")
        return self.twice_value // 2

    def __float__(self) -> float:
        return self.twice_value / 2

    def __add__(self, other: "HalfLike") -> "HalfInteger":
        return HalfInteger(self.twice_value + HalfInteger.of(other).twice_value)

    __radd__ = __add__

    def __sub__(self, other: "HalfLike") -> "HalfInteger":
        return HalfInteger(self.twice_value - HalfInteger.of(other).twice_value)

    def __rsub__(self, other: "HalfLike") -> "HalfInteger":
        return HalfInteger.of(other) - self

    def __neg__(self) -> "HalfInteger":
        return HalfInteger(-self.twice_value)

    def __abs__(self) -> "HalfInteger":
        return HalfInteger(abs(self.twice_value))

    def __eq__(self, other: object) -> bool:
        try:
            return self.twice_value == HalfInteger.of(other).twice_value  # type: ignore[arg-type]
        except DomainError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.twice_value)

    def __str__(self) -> str:
        if self.is_integral:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"

    def __repr__(self) -> str:
        return f"HalfInteger({self})"


HalfLike = Union[HalfInteger, int, float, Fraction]


def half(value: HalfLike) -> HalfInteger:
    return HalfInteger.of(value)


def _parity(q: HalfInteger) -> int:
    """(-1)**q for integral q."""
    return -1 if int(q) % 2 else 1


def hermite_eval(k: int, z):
    """Physicists' Hermite polynomial H_k(z) by three-term recurrence.

    Works elementwise on arrays.
    """
    if k < 0:
        raise DomainError(f"Hermite degree must be nonnegative, got {k}")
    z = np.asarray(z, dtype=float)
    prev = np.ones_like(z)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = 2.0 * z
    for n in range(1, k):
        prev, cur = cur, 2.0 * z * cur - 2.0 * n * prev
    return cur if cur.ndim else float(cur)


def hermite_table(kmax: int, z) -> np.ndarray:
    """Array of H_0(z) ... H_kmax(z) stacked along a new leading axis."""
    if kmax < 0:
        raise DomainError(f"Hermite degree must be nonnegative, got {kmax}")
    z = np.asarray(z, dtype=float)
    out = np.empty((kmax + 1,) + z.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2.0 * z
    for n in range(1, kmax):
        out[n + 1] = 2.0 * z * out[n] - 2.0 * n * out[n - 1]
    return out


def factorial_exact(n: int) -> int:
    if n < 0:
        raise DomainError(f"factorial of negative number {n}")
    if n > FACTORIAL_EXACT_MAX:
        raise OverflowError(
            f"{n}! exceeds the exact integer range (n <= {FACTORIAL_EXACT_MAX}); use log_factorial"
        )
    return math.factorial(n)


def log_factorial(n: int) -> float:
    if n < 0:
        raise DomainError(f"factorial of negative number {n}")
    return math.lgamma(n + 1.0)


def jacobi_eval(n: int, a: float, b: float, x):
    """Jacobi polynomial P_n^{(a,b)}(x) by the standard three-term recurrence."""
    if n < 0:
        raise DomainError(f"Jacobi degree must be nonnegative, got {n}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0)
    for k in range(2, n + 1):
        c = 2 * k + a + b
        a1 = 2.0 * k * (k + a + b) * (c - 2.0)
        a2 = (c - 1.0) * (a * a - b * b)
        a3 = (c - 1.0) * c * (c - 2.0)
        a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c
        prev, cur = cur, ((a2 + a3 * x) * cur - a4 * prev) / a1
    return cur if cur.ndim else float(cur)


def _check_projection(j: HalfInteger, m: HalfInteger) -> None:
    if j.twice_value < 0:
        raise DomainError(f"negative angular momentum j={j}")
    if abs(m.twice_value) > j.twice_value or not (j - m).is_integral:
        raise DomainError(f"invalid projection m={m} for j={j}")


def wigner_small_d(j: HalfLike, m1: HalfLike, m2: HalfLike, beta):
    """Wigner small-d function d^{(j)}_{m1 m2}(beta).

    Index order is <j m2| exp(-i beta J_y) |j m1>, which is the order used by
    the closed form with P_{j-m1}^{(m1-m2, m1+m2)}(cos beta). The symmetries
    d_{m1m2} = (-1)^{m1-m2} d_{m2m1} = d_{-m2,-m1} move the labels into the
    sector m1 >= |m2| where every power in the closed form is nonnegative.
    """
    j, m1, m2 = half(j), half(m1), half(m2)
    _check_projection(j, m1)
    _check_projection(j, m2)

    sign = 1
    t1, t2 = m1.twice_value, m2.twice_value
    top = max(abs(t1), abs(t2))
    if t1 == top:
        a, b = m1, m2
    elif t2 == top:
        a, b = m2, m1
        sign = _parity(m1 - m2)
    elif -t2 == top:
        a, b = -m2, -m1
    else:
        a, b = -m1, -m2
        sign = _parity(m1 - m2)

    log_pref = 0.5 * (
        log_factorial(int(j + a))
        + log_factorial(int(j - a))
        - log_factorial(int(j + b))
        - log_factorial(int(j - b))
    )
    beta = np.asarray(beta, dtype=float)
    p, q = int(a + b), int(a - b)
    value = (
        sign
        * math.exp(log_pref)
        * np.cos(beta / 2) ** p
        * np.sin(beta / 2) ** q
        * jacobi_eval(int(j - a), float(q), float(p), np.cos(beta))
    )
    return value if np.ndim(value) else float(value)


def clebsch_gordan(j1: HalfLike, m1: HalfLike, j2: HalfLike, m2: HalfLike, J: HalfLike, M: HalfLike) -> float:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>, Condon-Shortley phases.

    Racah's single-sum formula, evaluated with log-factorials. Returns 0 when
    a selection rule fails.
    """
    j1, m1, j2, m2, J, M = (half(v) for v in (j1, m1, j2, m2, J, M))
    for jj in (j1, j2, J):
        if jj.twice_value < 0:
            raise DomainError(f"negative angular momentum {jj}")
    if (m1 + m2) != M:
        return 0.0
    if not (abs(j1 - j2) <= J <= j1 + j2) or not (j1 + j2 + J).is_integral:
        return 0.0
    for jj, mm in ((j1, m1), (j2, m2), (J, M)):
        if abs(mm) > jj or not (jj - mm).is_integral:
            return 0.0

    lf = log_factorial
    log_tri = 0.5 * (
        math.log(J.twice_value + 1)
        + lf(int(J + j1 - j2))
        + lf(int(J - j1 + j2))
        + lf(int(j1 + j2 - J))
        - lf(int(j1 + j2 + J) + 1)
    )
    log_proj = 0.5 * (
        lf(int(J + M)) + lf(int(J - M))
        + lf(int(j1 - m1)) + lf(int(j1 + m1))
        + lf(int(j2 - m2)) + lf(int(j2 + m2))
    )
    kmin = max(0, int(j2 - J - m1), int(j1 + m2 - J))
    kmax = min(int(j1 + j2 - J), int(j1 - m1), int(j2 + m2))
    terms = []
    for k in range(kmin, kmax + 1):
        log_den = (
            lf(k)
            + lf(int(j1 + j2 - J) - k)
            + lf(int(j1 - m1) - k)
            + lf(int(j2 + m2) - k)
            + lf(int(J - j2 + m1) + k)
            + lf(int(J - j1 - m2) + k)
        )
        terms.append((-1) ** k * math.exp(log_tri + log_proj - log_den))
    return math.fsum(terms)


def triple_hermite_integral(p: int, n: int, k: int) -> float:
    """Integral of exp(-z^2) H_p H_n H_k over the real line, in closed form."""
    if min(p, n, k) < 0:
        raise DomainError("Hermite degrees must be nonnegative")
    total = p + n + k
    if total % 2:
        return 0.0
    s = total // 2
    if p > s or n > s or k > s:
        return 0.0
    f = math.factorial
    ratio = Fraction(2**s * f(p) * f(n) * f(k), f(s - p) * f(s - n) * f(s - k))
    return math.sqrt(math.pi) * float(ratio)
