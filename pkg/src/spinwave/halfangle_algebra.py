"""Exact algebra over sums of half-angle monomials.

Every wavefunction branch in this package is a finite sum

    sum_k  c_k (cos θ/2)^{a_k} (sin θ/2)^{b_k}  e^{i m φ} e^{i n χ}

with complex coefficients c_k and real exponents a_k, b_k.  Coefficients
and exponents are sympy expressions, so rational and surd values such as
1 + sqrt(2) stay exact, and a symbolic ``n`` can be carried through the
ladder recursion.  Floating-point exponents are also accepted; they are
merged with an absolute tolerance (``FLOAT_TOL``).

All terms of an expression are kept homogeneous of the same total degree
a + b.  The identity (cos θ/2)^2 + (sin θ/2)^2 = 1 is used to reach that
form, which makes the representation canonical: two homogeneous
expressions describe the same function exactly when their term lists
agree.
"""

from dataclasses import dataclass, field
import cmath
import math

import sympy as sp

FLOAT_TOL = 1e-12

# symbolic cos θ used for polynomial weights and sin-expansion output
COS = sp.Symbol("cos_theta", real=True)

# canonical branch phases e^{±iπ/4}, written algebraically so that
# expansion alone is enough to decide equality
PHASE_PLUS = (1 + sp.I) / sp.sqrt(2)
PHASE_MINUS = (1 - sp.I) / sp.sqrt(2)


class EndpointDivergenceError(ValueError):
    """A negative exponent was evaluated at its singular endpoint."""


class NonIntegerExponentError(ValueError):
    """The sin θ expansion needs integer half-angle exponents."""


def _expand(x):
    return sp.expand(sp.sympify(x))


def is_zero(x):
    """Exact zero test with a high-precision numeric fallback."""
    x = _expand(x)
    if x == 0:
        return True
    if x.is_Rational or x.free_symbols:
        return False
    if x.has(sp.Float):
        return abs(complex(sp.N(x))) < FLOAT_TOL
    return abs(complex(sp.N(x, 50))) < 1e-40


def exponents_equal(a, b):
    """Equality of two exponents (exact, or within FLOAT_TOL for floats)."""
    d = _expand(a - b)
    if d == 0:
        return True
    if d.free_symbols:
        return False
    if d.has(sp.Float):
        return abs(float(d)) < FLOAT_TOL
    return False


def _as_integer(x):
    x = _expand(x)
    if x.is_Integer:
        return int(x)
    if x.free_symbols:
        return None
    v = complex(sp.N(x))
    r = round(v.real)
    if abs(v.imag) < FLOAT_TOL and abs(v.real - r) < FLOAT_TOL:
        if x.has(sp.Float) or is_zero(x - r):
            return int(r)
    return None


@dataclass(frozen=True)
class HalfAngleMonomial:
    """``coeff * (cos θ/2)**cos_exp * (sin θ/2)**sin_exp``."""

    coeff: sp.Expr
    cos_exp: sp.Expr
    sin_exp: sp.Expr

    def degree(self):
        return _expand(self.cos_exp + self.sin_exp)

    def value(self, theta):
        c = complex(math.cos(theta / 2))
        s = complex(math.sin(theta / 2))
        a = complex(sp.N(self.cos_exp))
        b = complex(sp.N(self.sin_exp))
        if (c == 0 and a.real < 0) or (s == 0 and b.real < 0):
            raise EndpointDivergenceError(
                "negative exponent evaluated at theta=%r" % theta)
        return complex(sp.N(self.coeff)) * _cpow(c, a) * _cpow(s, b)


def _cpow(base, e):
    if e == 0:
        return 1.0
    if base == 0:
        return 0.0
    return cmath.exp(e * cmath.log(base))


def canonical_terms(terms):
    """Merge equal exponent pairs and drop zero coefficients."""
    merged = []
    for t in terms:
        for i, (c, a, b) in enumerate(merged):
            if exponents_equal(a, t.cos_exp) and exponents_equal(b, t.sin_exp):
                merged[i] = (c + t.coeff, a, b)
                break
        else:
            merged.append((t.coeff, t.cos_exp, t.sin_exp))
    out = []
    for c, a, b in merged:
        c = _expand(c)
        if not is_zero(c):
            out.append(HalfAngleMonomial(c, _expand(a), _expand(b)))
    out.sort(key=_sort_key)
    return tuple(out)


def _sort_key(t):
    return (sp.default_sort_key(t.cos_exp), sp.default_sort_key(t.sin_exp))


@dataclass(frozen=True)
class AngularExpression:
    """Sum of half-angle monomials sharing the phase e^{imφ} e^{inχ}."""

    terms: tuple = ()
    m: sp.Expr = sp.Integer(0)
    n: sp.Expr = sp.Integer(0)
    scale: sp.Expr = sp.Integer(1)
    _canonical: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        scale = _expand(self.scale)
        terms = () if is_zero(scale) else self.terms
        if not self._canonical:
            terms = canonical_terms(terms)
            object.__setattr__(self, "_canonical", True)
        object.__setattr__(self, "terms", tuple(terms))
        object.__setattr__(self, "scale", scale if terms else sp.Integer(1))
        object.__setattr__(self, "m", _expand(self.m))
        object.__setattr__(self, "n", _expand(self.n))

    @property
    def is_empty(self):
        return len(self.terms) == 0

    def expanded_terms(self):
        """Terms with the common ``scale`` folded into each coefficient."""
        return tuple(HalfAngleMonomial(_expand(self.scale * t.coeff), t.cos_exp, t.sin_exp)
                     for t in self.terms)

    def unscaled(self):
        return AngularExpression(self.expanded_terms(), self.m, self.n)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other):
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        if not (is_zero(self.m - other.m) and exponents_equal(self.n, other.n)):
            raise ValueError("cannot add expressions with different phases")
        if is_zero(self.scale - other.scale):
            return AngularExpression(self.terms + other.terms, self.m, self.n,
                                     self.scale)
        return AngularExpression(self.expanded_terms() + other.expanded_terms(),
                                 self.m, self.n)

    def scaled(self, factor):
        """Multiply by a constant (kept in the common ``scale``)."""
        return AngularExpression(self.terms, self.m, self.n,
                                 self.scale * sp.sympify(factor), _canonical=True)

    def subs(self, *args, **kwargs):
        return AngularExpression(
            [HalfAngleMonomial(sp.sympify(t.coeff).subs(*args, **kwargs),
                               sp.sympify(t.cos_exp).subs(*args, **kwargs),
                               sp.sympify(t.sin_exp).subs(*args, **kwargs))
             for t in self.terms],
            sp.sympify(self.m).subs(*args, **kwargs),
            sp.sympify(self.n).subs(*args, **kwargs),
            sp.sympify(self.scale).subs(*args, **kwargs))

    def equals(self, other):
        """Exact equality of canonical forms, phases included."""
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        if not (is_zero(self.m - other.m) and exponents_equal(self.n, other.n)):
            return False
        return (self + other.scaled(-1)).is_empty

    def homogeneous(self):
        """Rewrite every term with the largest total degree present."""
        if self.is_empty:
            return self
        degrees = [t.degree() for t in self.terms]
        top = degrees[0]
        for d in degrees[1:]:
            k = _as_integer(d - top)
            if k is None:
                raise ValueError("term degrees differ by a non-integer")
            if k > 0:
                top = d
        out = []
        for t, d in zip(self.terms, degrees):
            gap = _as_integer(top - d)
            if gap % 2:
                raise ValueError("term degrees differ by an odd integer")
            for i in range(gap // 2 + 1):
                w = sp.binomial(gap // 2, i)
                out.append(HalfAngleMonomial(
                    t.coeff * w, t.cos_exp + 2 * i,
                    t.sin_exp + gap - 2 * i))
        return AngularExpression(out, self.m, self.n, self.scale)

    def __str__(self):
        if self.is_empty:
            return "0"
        parts = []
        for t in self.expanded_terms():
            parts.append("(%s)*c^(%s)*s^(%s)" % (
                sp.simplify(t.coeff), t.cos_exp, t.sin_exp))
        return " + ".join(parts) + "  [m=%s, n=%s]" % (self.m, self.n)


def monomial(coeff=1, cos_exp=0, sin_exp=0, m=0, n=0):
    """One-term expression."""
    return AngularExpression(
        [HalfAngleMonomial(sp.sympify(coeff), sp.sympify(cos_exp),
                           sp.sympify(sin_exp))], m, n)


def from_cos_polynomial(poly, m=0, n=0):
    """Convert a polynomial in cos θ into homogeneous half-angle form.

    ``poly`` is a sympy expression in ``COS`` (or a number).  It uses
    cos θ = c^2 - s^2 and pads lower powers with (c^2 + s^2).
    """
    p = sp.Poly(sp.sympify(poly), COS)
    deg = p.degree()
    if deg < 0:
        return AngularExpression((), m, n)
    terms = []
    for (q,), coeff in p.terms():
        # (c^2 - s^2)^q (c^2 + s^2)^(deg - q)
        for i in range(q + 1):
            for k in range(deg - q + 1):
                w = coeff * sp.binomial(q, i) * (-1) ** (q - i) * sp.binomial(deg - q, k)
                terms.append(HalfAngleMonomial(
                    w, 2 * (i + k), 2 * (deg - i - k)))
    return AngularExpression(terms, m, n)


def sin_theta():
    """sin θ = 2 (cos θ/2)(sin θ/2)."""
    return monomial(2, 1, 1)


def multiply(x, *others):
    """Product of expressions; exponents and phase labels add."""
    result = x
    for y in others:
        terms = []
        for t in result.terms:
            for u in y.terms:
                terms.append(HalfAngleMonomial(
                    t.coeff * u.coeff, t.cos_exp + u.cos_exp,
                    t.sin_exp + u.sin_exp))
        result = AngularExpression(terms, result.m + y.m, result.n + y.n,
                                   result.scale * y.scale)
    return result


def conjugate(x):
    """Complex conjugate: coefficients conjugated, phase labels negated."""
    return AngularExpression(
        [HalfAngleMonomial(sp.conjugate(t.coeff), t.cos_exp, t.sin_exp)
         for t in x.terms], -x.m, -x.n, sp.conjugate(x.scale), _canonical=True)


def apply_ladder(x, direction):
    """Apply J+ (``direction='+'``) or J- (``'-'``) to ``x``.

    The operator is
        J± = e^{±iφ} { i[cot θ ∂φ - (1/sin θ) ∂χ] ± ∂θ }.
    Acting on e^{imφ} e^{inχ} c^a s^b with c = cos θ/2, s = sin θ/2 and
    using cot θ = (c^2 - s^2)/(2cs), 1/sin θ = (c^2 + s^2)/(2cs) gives

        c^(a+1) s^(b-1) (n - m ± b)/2  +  c^(a-1) s^(b+1) (n + m ∓ a)/2,

    which keeps the total degree a + b unchanged.
    """
    if direction in ("+", 1, "raise"):
        sign = 1
    elif direction in ("-", -1, "lower"):
        sign = -1
    else:
        raise ValueError("direction must be '+' or '-'")
    m, n = x.m, x.n
    terms = []
    for t in x.terms:
        a, b = t.cos_exp, t.sin_exp
        terms.append(HalfAngleMonomial(
            t.coeff * (n - m + sign * b) / 2, a + 1, b - 1))
        terms.append(HalfAngleMonomial(
            t.coeff * (n + m - sign * a) / 2, a - 1, b + 1))
    return AngularExpression(terms, m + sign, n, x.scale)


def evaluate(x, phi, theta, chi):
    """Numeric value of the expression at (φ, θ, χ)."""
    total = 0j
    for t in x.terms:
        total += t.value(theta)
    total *= complex(sp.N(x.scale))
    m = complex(sp.N(x.m))
    n = complex(sp.N(x.n))
    return total * cmath.exp(1j * m * phi) * cmath.exp(1j * n * chi)


@dataclass(frozen=True)
class SinExpansion:
    """Integrand split as R(θ) + Σ_m (a_m + b_m cos θ) sin^{-m} θ.

    ``regular`` maps (q, p) to the coefficient of cos^q θ sin^p θ, with
    p in {0, 1}.  ``divergent`` maps the order m to the pair (a_m, b_m).
    """

    regular: dict
    divergent: dict

    def regular_expr(self):
        s = sp.Symbol("sin_theta", positive=True)
        return sum((c * COS ** q * s ** p for (q, p), c in self.regular.items()),
                   sp.Integer(0))

    def divergent_expr(self):
        s = sp.Symbol("sin_theta", positive=True)
        return sum(((a + b * COS) * s ** (-m) for m, (a, b) in self.divergent.items()),
                   sp.Integer(0))

    def evaluate(self, theta):
        x = math.cos(theta)
        st = math.sin(theta)
        val = 0j
        for (q, p), c in self.regular.items():
            val += complex(sp.N(c)) * x ** q * st ** p
        for m, (a, b) in self.divergent.items():
            val += (complex(sp.N(a)) + complex(sp.N(b)) * x) * st ** (-m)
        return val


def _poly_decompose(poly, k, parity):
    """Split Q(x) / S^{2k} (times S when ``parity``) into regular and singular parts.

    Repeated division by (1 - x^2) leaves linear remainders; the i-th one
    multiplies S^{2i - 2k + parity}.
    """
    x = COS
    regular = {}
    divergent = {}
    one_minus_x2 = sp.Poly(1 - x ** 2, x, domain=poly.domain)
    i = 0
    while not poly.is_zero and i < k:
        quo, rem = sp.div(poly, one_minus_x2)
        order = 2 * (k - i) - parity
        a = rem.coeff_monomial(1)
        b = rem.coeff_monomial(x)
        if a != 0 or b != 0:
            divergent[order] = (a, b)
        poly = quo
        i += 1
    for (q,), c in poly.terms():
        regular[(q, parity)] = c
    return regular, divergent


def to_sin_expansion(x):
    """Expand an integrand (already containing the sin θ measure).

    Uses (cos θ/2)^2 = (1 + cos θ)/2 and (sin θ/2)^2 = (1 - cos θ)/2.  Terms
    with odd exponents pair into sin θ / 2 = (cos θ/2)(sin θ/2).  Negative
    powers are collected over the common denominator (1 - cos^2 θ)^k and
    split off by repeated division by (1 - cos^2 θ).
    """
    groups = {0: [], 1: []}
    for t in x.terms:
        a = _as_integer(t.cos_exp)
        b = _as_integer(t.sin_exp)
        if a is None or b is None:
            raise NonIntegerExponentError(
                "non-integer exponents (%s, %s); use the analytic path"
                % (t.cos_exp, t.sin_exp))
        if (a - b) % 2:
            raise NonIntegerExponentError(
                "mixed-parity monomial c^%d s^%d is not a function of cos θ" % (a, b))
        groups[a % 2].append((t.coeff, a, b))
    xs = COS
    coeffs = [c for items in groups.values() for c, _, _ in items]
    domain = "QQ" if all(sp.sympify(c).is_Rational for c in coeffs) else "EX"
    one_plus = sp.Poly(1 + xs, xs, domain=domain)
    one_minus = sp.Poly(1 - xs, xs, domain=domain)
    regular = {}
    divergent = {}
    for parity, items in groups.items():
        if not items:
            continue
        halves = [((a - parity) // 2, (b - parity) // 2, c) for c, a, b in items]
        k = max([0] + [-p for p, _, _ in halves] + [-q for _, q, _ in halves])
        num = sp.Poly(0, xs, domain=domain)
        for p, q, c in halves:
            # c^(2p) s^(2q) = (1+x)^p (1-x)^q / 2^(p+q)
            w = sp.sympify(c) / sp.Integer(2) ** (p + q + parity)
            num += one_plus ** (p + k) * one_minus ** (q + k) * w
        reg, div = _poly_decompose(num, k, parity)
        for key, c in reg.items():
            regular[key] = regular.get(key, 0) + c
        for order, (a, b) in div.items():
            a0, b0 = divergent.get(order, (0, 0))
            divergent[order] = (a0 + a, b0 + b)
    scale = x.scale
    regular = {key: _expand(scale * sp.sympify(c)) for key, c in regular.items()}
    regular = {key: c for key, c in regular.items() if not is_zero(c)}
    out_div = {}
    for order, (a, b) in sorted(divergent.items(), reverse=True):
        a = _expand(scale * sp.sympify(a))
        b = _expand(scale * sp.sympify(b))
        if not (is_zero(a) and is_zero(b)):
            out_div[order] = (a, b)
    return SinExpansion(dict(sorted(regular.items())), out_div)
