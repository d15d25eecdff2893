"""Regularized inner product of generalized D-functions.

The φ average contributes 2π δ_{mm'}; the χ average, taken as the limit
(1/q) ∫_0^{2πq} dχ, contributes 2π δ_{nn'}.  The θ integrand
Ψ* W Ψ' sin θ is expanded in powers of sin θ, the negative powers are
dropped, and the regular remainder is integrated exactly with the Beta
function.  Results are sympy numbers in which N_j = 1, so a norm reads
like ``3*pi**3``.
"""

from dataclasses import dataclass
import math

import sympy as sp

from .halfangle_algebra import (
    COS, AngularExpression, NonIntegerExponentError, conjugate,
    exponents_equal, from_cos_polynomial, is_zero, multiply, sin_theta,
    to_sin_expansion,
)

PHASE_FACTOR = 4 * sp.pi ** 2


class AnalyticPathRequired(NonIntegerExponentError):
    """The integrand has irrational exponents; use observables.expect_Pk."""


def weight_polynomial(weight):
    """Normalize a weight argument into a sympy polynomial in ``COS``.

    Accepted: None or 1, ``"cos"``, ``"p0"`` .. ``"pK"``, an int k
    (Legendre P_k), or a sympy expression in ``COS``.
    """
    if weight is None:
        return sp.Integer(1)
    if isinstance(weight, str):
        w = weight.strip().lower()
        if w in ("1", "one", "none"):
            return sp.Integer(1)
        if w in ("cos", "costheta", "p1"):
            return COS
        if w.startswith("p") and w[1:].isdigit():
            return sp.expand(sp.legendre(int(w[1:]), COS))
        raise ValueError("unknown weight %r" % weight)
    if isinstance(weight, int):
        return sp.expand(sp.legendre(weight, COS))
    return sp.expand(sp.sympify(weight))


def regular_integral(expansion):
    """Exact ∫_0^π of the regular part of a SinExpansion.

    ∫_0^π cos^q θ sin^p θ dθ vanishes for odd q and otherwise equals
    B((q+1)/2, (p+1)/2).
    """
    total = sp.Integer(0)
    for (q, p), c in expansion.regular.items():
        if q % 2:
            continue
        total += c * sp.gamma(sp.Rational(q + 1, 2)) * sp.gamma(sp.Rational(p + 1, 2)) \
            / sp.gamma(sp.Rational(q + p + 2, 2))
    return sp.expand(total)


def theta_integral(left, right, weight=None):
    """Regularized ∫_0^π left* W right sin θ dθ for two branch expressions."""
    if left.is_empty or right.is_empty:
        return sp.Integer(0)
    w = from_cos_polynomial(weight_polynomial(weight))
    integrand = multiply(conjugate(left), w, right, sin_theta())
    try:
        expansion = to_sin_expansion(integrand)
    except NonIntegerExponentError as exc:
        raise AnalyticPathRequired(str(exc))
    return sp.expand(regular_integral(expansion))


@dataclass(frozen=True)
class InnerProduct:
    """Branch-resolved regularized inner product (N_j = 1)."""

    branch_A: sp.Expr
    branch_B: sp.Expr
    cross: sp.Expr

    @property
    def total(self):
        return sp.expand(self.branch_A + self.branch_B + self.cross)

    @property
    def in_pi3(self):
        """Total in units of |N_j|^2 π^3."""
        return sp.radsimp(sp.cancel(self.total / sp.pi ** 3))


def inner_product(psi, psi2, weight=None):
    """⟨Ψ | W | Ψ'⟩ with the regularized measure."""
    zero = sp.Integer(0)
    if not (is_zero(psi.m - psi2.m) and exponents_equal(psi.n, psi2.n)):
        return InnerProduct(zero, zero, zero)
    A1, B1 = psi.branch_A, psi.branch_B
    A2, B2 = psi2.branch_A, psi2.branch_B
    a = PHASE_FACTOR * theta_integral(A1, A2, weight)
    b = PHASE_FACTOR * theta_integral(B1, B2, weight)
    c = PHASE_FACTOR * (theta_integral(A1, B2, weight) + theta_integral(B1, A2, weight))
    return InnerProduct(sp.expand(a), sp.expand(b), sp.expand(c))


def norm(psi):
    return inner_product(psi, psi).total


def expectation(psi, weight):
    """⟨Ψ|W|Ψ⟩ / ⟨Ψ|Ψ⟩ on the regularized path (exact)."""
    num = inner_product(psi, psi, weight).total
    den = inner_product(psi, psi).total
    if is_zero(den):
        raise ZeroDivisionError("state has zero regularized norm")
    return sp.radsimp(sp.cancel(num / den))


def numeric_theta_integral(left, right, weight=None, eps0=0.2, levels=6):
    """Independent check of ``theta_integral`` by quadrature.

    The divergent part f(θ) is subtracted from the integrand and the
    remainder is integrated on [ε, π - ε] with scipy for ε = eps0 / 2^i.
    The ε -> 0 limit is taken with a Richardson table, since the truncation
    error is a power series in ε.
    """
    import warnings
    from scipy.integrate import IntegrationWarning, quad

    w = from_cos_polynomial(weight_polynomial(weight))
    integrand = multiply(conjugate(left), w, right, sin_theta())
    expansion = to_sin_expansion(integrand)
    scale = complex(sp.N(integrand.scale))
    terms = [(scale * complex(sp.N(t.coeff)), float(t.cos_exp), float(t.sin_exp))
             for t in integrand.terms]
    div = [(m, complex(sp.N(a)), complex(sp.N(b))) for m, (a, b) in expansion.divergent.items()]

    def g(th):
        c, s = math.cos(th / 2), math.sin(th / 2)
        v = sum(k * c ** a * s ** b for k, a, b in terms)
        st, x = math.sin(th), math.cos(th)
        v -= sum((a + b * x) * st ** (-m) for m, a, b in div)
        return v.real

    vals = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for i in range(levels):
            eps = eps0 / 2 ** i
            vals.append(quad(g, eps, math.pi - eps, limit=400,
                             epsabs=1e-14, epsrel=1e-14)[0])
    table = vals
    for order in range(1, levels):
        f = 2 ** order
        table = [(f * table[i + 1] - table[i]) / (f - 1) for i in range(len(table) - 1)]
    return table[0]
