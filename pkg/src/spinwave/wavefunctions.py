"""Generalized D-functions D^j_{nm}(φ, θ, χ) for real body-fixed projection n.

A D-function is held as two branches.  Branch A starts from

    e^{iπ/4} (cos θ/2)^{j+n} (sin θ/2)^{j-n}      at m = j

and is lowered with J-; branch B starts from

    e^{-iπ/4} (sin θ/2)^{j+n} (cos θ/2)^{j-n}     at m = -j

and is raised with J+.  After every step the result is divided by
sqrt(j(j+1) - m(m ± 1)).  The overall normalization N_j is never fixed;
it cancels in every ratio the package reports.
"""

from dataclasses import dataclass

import sympy as sp

from .halfangle_algebra import (
    AngularExpression, PHASE_MINUS, PHASE_PLUS, apply_ladder, evaluate,
    exponents_equal, is_zero, monomial,
)
from .numbers import as_half_integer, as_real

# symbol used when n is kept symbolic
N_SYMBOL = sp.Symbol("n", real=True)


@dataclass(frozen=True)
class SpinLabel:
    """(j, n, m) with 2j and j - m non-negative integers."""

    twice_j: int
    n: sp.Expr
    m: sp.Expr

    @property
    def j(self):
        return sp.Rational(self.twice_j, 2)


@dataclass(frozen=True)
class DFunction:
    """Two-branch generalized D-function.

    ``edge`` marks the m = ±(j+1) states produced by laddering past the
    end of the multiplet.  These are returned without normalization.
    """

    label: SpinLabel
    branch_A: AngularExpression
    branch_B: AngularExpression
    edge: bool = False

    @property
    def j(self):
        return self.label.j

    @property
    def n(self):
        return self.label.n

    @property
    def m(self):
        return self.label.m

    @property
    def branches(self):
        return (self.branch_A, self.branch_B)

    @property
    def is_empty(self):
        return self.branch_A.is_empty and self.branch_B.is_empty

    def evaluate(self, phi, theta, chi):
        """Numeric value with N_j = 1."""
        return sum(evaluate(b, phi, theta, chi) for b in self.branches
                   if not b.is_empty)

    def subs(self, *args, **kwargs):
        return DFunction(
            SpinLabel(self.label.twice_j,
                      sp.sympify(self.label.n).subs(*args, **kwargs),
                      self.label.m),
            self.branch_A.subs(*args, **kwargs),
            self.branch_B.subs(*args, **kwargs), self.edge)

    def __str__(self):
        return "D^%s_{%s,%s}: A = %s ; B = %s" % (
            self.j, self.n, self.m, self.branch_A, self.branch_B)


def ladder_factor(j, m, direction):
    """sqrt(j(j+1) - m(m ± 1))."""
    s = 1 if direction in ("+", 1) else -1
    return sp.sqrt(j * (j + 1) - m * (m + s))


def _seed_A(j, n):
    return monomial(1, j + n, j - n, m=j, n=n).scaled(PHASE_PLUS)


def _seed_B(j, n):
    return monomial(1, j - n, j + n, m=-j, n=n).scaled(PHASE_MINUS)


def _walk(expr, j, steps, direction):
    m = expr.m
    for _ in range(steps):
        f = ladder_factor(j, m, direction)
        expr = apply_ladder(expr, direction).scaled(1 / f)
        m = expr.m
    return expr


def build(j, n, m):
    """Construct D^j_{nm} by the ladder procedure.

    ``j`` and ``m`` are half-integers (anything accepted by
    ``as_half_integer``); ``n`` is a real number, a sympy expression, or
    the symbol ``N_SYMBOL``.
    """
    j = as_half_integer(j)
    m = as_half_integer(m)
    n = as_real(n)
    if abs(m) > j:
        raise ValueError("|m| = %s exceeds j = %s" % (abs(m), j))
    if not (j - m).is_integer:
        raise ValueError("j - m must be an integer")
    A = _walk(_seed_A(j, n), j, int(j - m), "-")
    B = _walk(_seed_B(j, n), j, int(j + m), "+")
    return DFunction(SpinLabel(int(2 * j), n, m), A, B)


def ladder(d, direction):
    """Apply J± and renormalize by sqrt(j(j+1) - m(m ± 1)).

    Stepping to m = ±(j+1) has a zero factor.  The raw J± image is then
    returned with ``edge=True``; laddering an edge state back returns the
    empty D-function.
    """
    sign = 1 if direction in ("+", 1) else -1
    j, m = d.j, d.m
    target = m + sign
    A = apply_ladder(d.branch_A, direction)
    B = apply_ladder(d.branch_B, direction)
    if d.edge:
        # J∓ on an edge state: the normalization factor is zero as well, so
        # the raw image is returned; it vanishes identically.
        return DFunction(SpinLabel(d.label.twice_j, d.n, target), A, B,
                         edge=abs(target) > j)
    if abs(target) > j:
        return DFunction(SpinLabel(d.label.twice_j, d.n, target), A, B,
                         edge=True)
    f = ladder_factor(j, m, direction)
    return DFunction(SpinLabel(d.label.twice_j, d.n, target),
                     A.scaled(1 / f), B.scaled(1 / f))


def raw_ladder(d, direction):
    """J± without any normalization (useful for operator identities)."""
    sign = 1 if direction in ("+", 1) else -1
    A = apply_ladder(d.branch_A, direction)
    B = apply_ladder(d.branch_B, direction)
    return DFunction(SpinLabel(d.label.twice_j, d.n, d.m + sign), A, B,
                     edge=abs(d.m + sign) > d.j)


def spin_inversion(d):
    """D^s_{n m} -> D^s_{-n m}; the identity exactly when n = 0."""
    if is_zero(d.n):
        return d
    if d.edge:
        sign = 1 if d.m > 0 else -1
        base = build(d.j, -d.n, d.m - sign)
        return ladder(base, "+" if sign > 0 else "-")
    return build(d.j, -d.n, d.m)


def same_state(d1, d2):
    """Exact equality of labels and both branches."""
    return (d1.label.twice_j == d2.label.twice_j
            and exponents_equal(d1.n, d2.n)
            and is_zero(d1.m - d2.m)
            and d1.branch_A.equals(d2.branch_A)
            and d1.branch_B.equals(d2.branch_B))
