"""Conversions for half-integer spins and real projections."""

from fractions import Fraction

import sympy as sp


def as_half_integer(x):
    """Return ``x`` as an exact sympy Rational with 2x integral.

    Accepts ints, Fractions, sympy numbers, floats such as 0.5, and
    strings such as ``"3/2"`` or ``"1.5"``.
    """
    if isinstance(x, str):
        x = x.strip()
        try:
            v = Fraction(x)
        except ValueError:
            raise ValueError("not a half-integer: %r" % x)
        r = sp.Rational(v.numerator, v.denominator)
    elif isinstance(x, float):
        r = sp.Rational(Fraction(x).limit_denominator(2))
        if abs(float(r) - x) > 1e-12:
            raise ValueError("not a half-integer: %r" % x)
    else:
        r = sp.nsimplify(sp.sympify(x))
    if not (2 * r).is_integer:
        raise ValueError("not a half-integer: %r" % (x,))
    return r


def as_real(x):
    """Return a real projection as a sympy expression.

    Strings are parsed with sympy (``"3/2"``, ``"sqrt(2)"``); floats are
    kept as floats unless they are exactly a small fraction.
    """
    if isinstance(x, str):
        x = x.strip()
        try:
            v = Fraction(x)
            return sp.Rational(v.numerator, v.denominator)
        except ValueError:
            return sp.sympify(x, rational=True)
    if isinstance(x, float):
        f = Fraction(x).limit_denominator(64)
        if float(f) == x:
            return sp.Rational(f.numerator, f.denominator)
        return sp.Float(x, 17)
    return sp.sympify(x)


def smax(j):
    """The canonical projection sqrt(j(j+1))."""
    j = as_half_integer(j)
    return sp.sqrt(j * (j + 1))


def to_float(x):
    return float(sp.N(x, 20))


def is_exact(x):
    """True when ``x`` carries no floating-point component."""
    x = sp.sympify(x)
    return not x.has(sp.Float)
