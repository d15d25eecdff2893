import math

import pytest
import sympy as sp

from spinwave.halfangle_algebra import COS, SinExpansion, monomial, to_sin_expansion
from spinwave.regularization import (
    AnalyticPathRequired, expectation, inner_product, norm, numeric_theta_integral,
    regular_integral, theta_integral, weight_polynomial,
)
from spinwave.wavefunctions import build, raw_ladder

PI3 = sp.pi ** 3
half = sp.Rational(1, 2)


def test_spin_half_norm():
    ip = inner_product(build(half, 1, half), build(half, 1, half))
    assert ip.branch_A == 3 * PI3
    assert ip.branch_B == 3 * PI3
    assert ip.cross == 0
    assert ip.in_pi3 == 6


def test_spin_one_norm_and_p2():
    d = build(1, sp.Rational(3, 2), 1)
    ip = inner_product(d, d)
    assert ip.branch_A == ip.branch_B == 5 * PI3 / 2
    wp = inner_product(d, d, "p2")
    assert wp.branch_A == wp.branch_B == 19 * PI3 / 16
    assert expectation(d, "p2") == sp.Rational(19, 40)


def test_spin_half_cos():
    assert expectation(build(half, 1, half), "cos") == sp.Rational(2, 3)


def test_different_n_orthogonal():
    a, b = build(1, 1, 0), build(1, 0, 0)
    assert inner_product(a, b).total == 0


def test_wallis_integrals():
    # 2 c^4 integrates to 3π/4
    exp = to_sin_expansion(monomial(2, 4, 0))
    assert regular_integral(exp) == 3 * sp.pi / 4
    # (1 - 2cos θ + sin^2 θ)/2 = 1 - cos θ - cos^2 θ / 2 integrates to 3π/4
    r = SinExpansion({(0, 0): 1, (1, 0): -1, (2, 0): -sp.Rational(1, 2)}, {})
    assert regular_integral(r) == 3 * sp.pi / 4
    assert regular_integral(SinExpansion({}, {})) == 0


def test_weight_polynomial():
    assert weight_polynomial(None) == 1
    assert weight_polynomial("cos") == COS
    assert sp.expand(weight_polynomial("p2") - (3 * COS ** 2 - 1) / 2) == 0
    assert weight_polynomial(1) == COS
    with pytest.raises(ValueError):
        weight_polynomial("sin")


def test_irrational_n_needs_analytic_path():
    d = build(1, sp.sqrt(2), 1)
    with pytest.raises(AnalyticPathRequired):
        norm(d)


def integer_offset(j, n):
    """n - j a whole number with |n| > j: the two branches differ there."""
    return (n - j).is_integer and abs(n) > j


@pytest.mark.parametrize("tj", [1, 2, 3])
def test_branch_symmetry(tj):
    j = sp.Rational(tj, 2)
    for k in range(-5, 6):
        n = sp.Rational(k, 2)
        for a in range(tj + 1):
            d = build(j, n, j - a)
            ip = inner_product(d, d)
            assert sp.expand(ip.branch_A - ip.branch_B) == 0
            if integer_offset(j, n):
                continue
            for w in ("cos", "p2")[:tj]:
                ip = inner_product(d, d, w)
                assert sp.expand(ip.branch_A - ip.branch_B) == 0


def test_branches_split_at_integer_offset():
    ip = inner_product(build(1, 2, 1), build(1, 2, 1), "cos")
    assert ip.branch_A / (4 * sp.pi ** 2) == sp.Rational(-14, 3)
    assert ip.branch_B / (4 * sp.pi ** 2) == sp.Rational(10, 3)


@pytest.mark.parametrize("tj", [1, 2, 3])
def test_adjointness(tj):
    j = sp.Rational(tj, 2)
    for k in range(-5, 6):
        n = sp.Rational(k, 2)
        for a in range(tj):
            m = j - a - 1
            p, q = build(j, n, m), build(j, n, m + 1)
            lhs = inner_product(raw_ladder(p, "+"), q).total
            rhs = inner_product(p, raw_ladder(q, "-")).total
            assert sp.expand(lhs - rhs) == 0


def test_gram_matrix_small():
    states = [(j, n, m) for j in (half, sp.Integer(1))
              for n in [j - a for a in range(int(2 * j) + 1)]
              for m in [j - b for b in range(int(2 * j) + 1)]]
    built = [build(*s) for s in states]
    norms = [norm(d) for d in built]
    for i, di in enumerate(built):
        for k, dk in enumerate(built):
            g = inner_product(di, dk).total
            if i == k:
                assert g == norms[i] and g != 0
            else:
                assert g == 0


def test_hermitian_weight():
    a, b = build(1, 2, 0), build(1, 2, 0)
    ab = inner_product(a, b, "cos").total
    ba = inner_product(b, a, "cos").total
    assert sp.expand(ab - sp.conjugate(ba)) == 0


@pytest.mark.parametrize("j,n,m,w", [
    (half, 1, half, None), (half, 1, half, "cos"), (1, sp.Rational(3, 2), 1, "p2"),
    (1, 0, 0, None), (sp.Rational(3, 2), sp.Rational(1, 2), half, "cos"),
])
def test_numeric_oracle_agrees(j, n, m, w):
    d = build(j, n, m)
    for left, right in ((d.branch_A, d.branch_A), (d.branch_B, d.branch_B)):
        exact = float(theta_integral(left, right, w))
        approx = numeric_theta_integral(left, right, w)
        assert abs(exact - approx) < 1e-7 * max(1.0, abs(exact))


def test_numeric_oracle_confirms_integer_offset_case():
    # j = 1, n = 2, m = 1: each branch norm is -11/3 in θ units
    d = build(1, 2, 1)
    for br in (d.branch_A, d.branch_B):
        assert theta_integral(br, br) == sp.Rational(-11, 3)
        assert math.isclose(numeric_theta_integral(br, br), -11 / 3, abs_tol=1e-5)
