import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from spinwave.halfangle_algebra import (
    COS, PHASE_MINUS, PHASE_PLUS, NonIntegerExponentError, apply_ladder,
    conjugate, evaluate, from_cos_polynomial, is_zero, monomial, multiply,
    sin_theta, to_sin_expansion,
)

half = sp.Rational(1, 2)


def test_exponents_add():
    x = multiply(monomial(1, 1, 0), monomial(1, 0, 1))
    (t,) = x.terms
    assert (t.cos_exp, t.sin_exp) == (1, 1)


def test_squaring_branch():
    a = monomial(1, sp.Rational(3, 2), -half)
    (t,) = multiply(a, a).terms
    assert (t.cos_exp, t.sin_exp) == (3, -1)


def test_first_branch_norm_integrand():
    a = monomial(PHASE_PLUS, sp.Rational(3, 2), -half, m=half, n=1)
    x = multiply(conjugate(a), a, sin_theta())
    (t,) = x.expanded_terms()
    assert x.m == 0 and x.n == 0
    assert sp.simplify(t.coeff - 2) == 0
    assert (t.cos_exp, t.sin_exp) == (4, 0)


def test_conjugate_flips_phase():
    a = monomial(PHASE_PLUS, 1, 0, m=1, n=half)
    b = conjugate(a)
    assert sp.simplify(b.terms[0].coeff - PHASE_MINUS) == 0
    assert b.m == -1 and b.n == -half
    assert conjugate(b).equals(a)


def test_raising_top_seed_is_empty():
    j, n = sp.Rational(3, 2), sp.Symbol("n", real=True)
    seed = monomial(1, j + n, j - n, m=j, n=n)
    assert apply_ladder(seed, "+").is_empty


def test_ladder_keeps_degree():
    x = monomial(1, sp.Rational(5, 2), sp.Rational(1, 2), m=half, n=1)
    for t in apply_ladder(x, "-").terms:
        assert t.degree() == 3


def test_bad_direction():
    with pytest.raises(ValueError):
        apply_ladder(monomial(1, 1, 1), "up")


def test_cos_polynomial_values():
    x = from_cos_polynomial(3 * COS ** 2 - 1)
    for th in (0.2, 1.0, 2.9):
        assert abs(evaluate(x, 0, th, 0) - (3 * math.cos(th) ** 2 - 1)) < 1e-13


def test_spin_half_second_branch_expansion():
    # (1/2) c^-2 s^2 (2 + cos θ)^2, measure already included
    poly = from_cos_polynomial((2 + COS) ** 2)
    x = multiply(monomial(half, -2, 2), poly)
    exp = to_sin_expansion(x)
    s = sp.Symbol("sin_theta", positive=True)
    div = sp.simplify(exp.divergent_expr() - (1 - COS) / s ** 2)
    assert div == 0
    reg = sp.expand(exp.regular_expr().subs(s ** 2, 1 - COS ** 2))
    assert sp.expand(reg - (1 - 2 * COS + 1 - COS ** 2) / 2) == 0


def test_spin_one_second_branch_divergence():
    from spinwave.wavefunctions import build
    d = build(1, sp.Rational(3, 2), 1)
    x = multiply(conjugate(d.branch_B), d.branch_B, sin_theta())
    exp = to_sin_expansion(x)
    s = sp.Symbol("sin_theta", positive=True)
    target = (36 - 36 * COS - 3 * s ** 2 - 15 * COS * s ** 2) / (16 * s ** 4)
    assert sp.simplify(exp.divergent_expr() - target) == 0


def test_irrational_exponent_rejected():
    x = monomial(1, 1 + sp.sqrt(2), 1 - sp.sqrt(2))
    with pytest.raises(NonIntegerExponentError):
        to_sin_expansion(multiply(x, sin_theta()))


@st.composite
def integrands(draw):
    parity = draw(st.integers(0, 1))
    terms = []
    for _ in range(draw(st.integers(1, 4))):
        a = 2 * draw(st.integers(-3, 4)) + parity
        b = 2 * draw(st.integers(-3, 4)) + parity
        c = sp.Rational(draw(st.integers(-9, 9)), draw(st.integers(1, 5)))
        terms.append(monomial(c, a, b))
    x = terms[0]
    for t in terms[1:]:
        x = x + t
    return x


def _magnitude(exp, th):
    """Size of the largest pieces, which sets the float cancellation error."""
    x, st = abs(math.cos(th)), math.sin(th)
    big = sum(abs(float(c)) * x ** q * st ** p for (q, p), c in exp.regular.items())
    big += sum((abs(float(a)) + abs(float(b))) * st ** -m for m, (a, b) in exp.divergent.items())
    return big


@settings(max_examples=40, deadline=None)
@given(integrands())
def test_sin_expansion_round_trip(x):
    exp = to_sin_expansion(x)
    for th in np.linspace(0.05, math.pi - 0.05, 50):
        want = evaluate(x, 0, th, 0)
        got = exp.evaluate(th)
        assert abs(got - want) <= 1e-12 * max(1.0, _magnitude(exp, th))


def test_is_zero():
    assert is_zero(sp.sqrt(2) ** 2 - 2)
    assert not is_zero(sp.Rational(1, 3))
