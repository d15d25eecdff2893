"""Expectation values by the Clebsch-Gordan route, and the g-factor.

Everything here is closed-form arithmetic on (j, n, m) and works for any
real n, including n = sqrt(j(j+1)) where the θ integrals of the
regularized path cannot be set up.  Magnetic moments are in units of the
magneton, so g is dimensionless.
"""

from dataclasses import dataclass
import math

import sympy as sp

from .coupling import MAX_K, cg, internal_cg
from .numbers import as_half_integer, as_real


@dataclass(frozen=True)
class GFactorResult:
    """g for spin s and internal projection n (magneton units, ħ = 1)."""

    s: sp.Expr
    n: sp.Expr
    g: sp.Expr

    def magnetic_moment(self, m):
        """g μ m with μ = 1."""
        return self.g * as_half_integer(m)


def g_factor(s, n):
    """g = 1 + n^2 / (s(s+1))."""
    s = as_half_integer(s)
    if s <= 0:
        raise ValueError("g is undefined for s = 0")
    n = as_real(n)
    return GFactorResult(s, n, sp.radsimp(sp.expand(1 + n ** 2 / (s * (s + 1)))))


@dataclass(frozen=True)
class ProjectionResult:
    """Solution n of g = 1 + n^2/(s(s+1)).

    For g < 1 the solution is imaginary: ``imaginary`` is set and
    ``magnitude`` holds |n|.
    """

    s: sp.Expr
    g: sp.Expr
    magnitude: sp.Expr
    imaginary: bool

    @property
    def n(self):
        return sp.I * self.magnitude if self.imaginary else self.magnitude


def projection_for_g(s, g):
    """Invert the g-factor relation; returns the non-negative root."""
    s = as_half_integer(s)
    if s <= 0:
        raise ValueError("g is undefined for s = 0")
    g = as_real(g)
    sq = s * (s + 1) * (g - 1)
    imaginary = bool(sq < 0)
    return ProjectionResult(s, g, sp.sqrt(sp.Abs(sq)), imaginary)


def expect_cos(j, n, m):
    """<cos θ> = n m / (j(j+1))."""
    j = as_half_integer(j)
    if j <= 0:
        raise ValueError("j must be positive")
    return sp.radsimp(as_real(n) * as_half_integer(m) / (j * (j + 1)))


def expect_Pk(j, n, m, k):
    """<P_k(cos θ)> = <j n, k 0 | j n> <j m, k 0 | j m> for k <= 4."""
    j, m = as_half_integer(j), as_half_integer(m)
    internal = internal_cg(j, n, k)
    external = cg(j, m, k, 0, j)
    return sp.radsimp(sp.expand(internal * external))


def body_rotation_cos(j, n):
    """<cos θ> for a rotation of the body axis itself, n^2 / (j(j+1))."""
    j = as_half_integer(j)
    if j <= 0:
        raise ValueError("j must be positive")
    return sp.radsimp(as_real(n) ** 2 / (j * (j + 1)))


def isotropic_average(s):
    """Sum of n^2 over three orthogonal axes when the projections are
    (0, 0, sqrt(s(s+1))): always s(s+1)."""
    s = as_half_integer(s)
    if s < 0:
        raise ValueError("s must be non-negative")
    projections = [sp.Integer(0), sp.Integer(0), sp.sqrt(s * (s + 1))]
    return sp.simplify(sum(3 * p ** 2 for p in projections) / 3)


@dataclass(frozen=True)
class ClassicalRow:
    j: sp.Expr
    m: sp.Expr
    cos_theta_m: float
    expectation: float
    classical: float

    @property
    def deviation(self):
        return abs(self.expectation - self.classical)


def classical_limit_report(k, m_fraction, j_sequence=(1, 2, 5, 10, 50)):
    """Compare <P_k> at n = sqrt(j(j+1)) with P_k(cos θ_m) along a j sequence.

    For each j the m whose cos θ_m = m/sqrt(j(j+1)) is closest to
    ``m_fraction`` (and has the same j - m parity) is used.
    """
    if not 0 <= int(k) <= MAX_K:
        raise ValueError("k must be in 0..%d" % MAX_K)
    rows = []
    for j in j_sequence:
        j = as_half_integer(j)
        root = math.sqrt(float(j * (j + 1)))
        candidates = [j - i for i in range(int(2 * j) + 1)]
        m = min(candidates, key=lambda mm: (abs(float(mm) / root - m_fraction), -mm))
        n = sp.sqrt(j * (j + 1))
        value = float(expect_Pk(j, n, m, k))
        c = float(m) / root
        classical = float(sp.legendre(int(k), c))
        rows.append(ClassicalRow(j, m, c, value, classical))
    return rows
