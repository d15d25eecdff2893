import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from spinwave.observables import (
    body_rotation_cos, classical_limit_report, expect_cos, expect_Pk, g_factor,
    isotropic_average, projection_for_g,
)

half = sp.Rational(1, 2)


def test_g_examples():
    assert g_factor(half, sp.sqrt(3) / 2).g == 2
    assert g_factor(1, 0).g == 1
    for s in (half, 1, sp.Rational(7, 2)):
        assert g_factor(s, 0).g == 1
        assert g_factor(s, sp.sqrt(s * (s + 1))).g == 2


def test_g_zero_spin():
    with pytest.raises(ValueError):
        g_factor(0, 1)


def test_magnetic_moment():
    assert g_factor(half, sp.sqrt(3) / 2).magnetic_moment(half) == 1


def test_projection_examples():
    assert projection_for_g(half, 2).n == sp.sqrt(3) / 2
    assert projection_for_g(1, 2).n == sp.sqrt(2)
    r = projection_for_g(sp.Rational(3, 2), sp.Rational(2, 3))
    assert r.imaginary
    assert r.magnitude == sp.sqrt(5) / 2
    assert r.n == sp.I * sp.sqrt(5) / 2


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.fractions(min_value=0, max_value=10, max_denominator=20))
def test_projection_inverts_g(twice_s, n):
    s = sp.Rational(twice_s, 2)
    n = sp.Rational(n.numerator, n.denominator)
    g = g_factor(s, n).g
    assert sp.simplify(projection_for_g(s, g).n - n) == 0


def test_expect_cos():
    assert expect_cos(half, 1, half) == sp.Rational(2, 3)
    assert expect_cos(1, 2, 1) == 1
    for j, n, m in [(1, sp.sqrt(2), 1), (sp.Rational(3, 2), sp.Rational(1, 3), -half)]:
        assert sp.simplify(expect_Pk(j, n, m, 1) - expect_cos(j, n, m)) == 0


def test_expect_p2_worked_case():
    assert expect_Pk(1, sp.Rational(3, 2), 1, 2) == sp.Rational(19, 40)


def test_body_rotation_and_isotropic():
    assert body_rotation_cos(1, sp.sqrt(2)) == 1
    assert isotropic_average(half) == sp.Rational(3, 4)
    assert isotropic_average(2) == 6


def test_classical_limit_trend():
    rows = classical_limit_report(2, 0.0)
    devs = [r.deviation for r in rows]
    assert all(b < a for a, b in zip(devs, devs[1:]))
    assert devs[-1] < 1e-3


def test_classical_limit_k_range():
    with pytest.raises(ValueError):
        classical_limit_report(5, 0.0)
