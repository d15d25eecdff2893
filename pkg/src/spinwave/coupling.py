"""Clebsch-Gordan coefficients with integer-step and with real projections.

Three families live here:

* ``cg`` / ``three_j``: textbook coefficients (sympy, exact), with a
  numeric Racah-formula continuation to real projections.
* ``internal_cg``: closed forms of <j n, k 0 | j n> for k <= 4.
* The squared coefficients for j3 = j1 + j2 - d (d = 0, 1, 2) evaluated at
  real projections, their integrals over the whole real line (the "rms"
  coefficients) and the sampled quasiprobability curves.
"""

from dataclasses import dataclass, field
import cmath
import math

import numpy as np
import sympy as sp
from scipy import integrate, special
from sympy.physics.wigner import clebsch_gordan, wigner_3j

from .numbers import as_half_integer, as_real


class SingularCoefficientError(ValueError):
    """A closed form was asked for outside the j where it is finite."""


class UnsupportedCaseError(ValueError):
    """The requested coupling is outside the implemented stretch cases."""


class AccuracyError(RuntimeError):
    """Quadrature could not reach the requested tolerance."""

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate


# ---------------------------------------------------------------------------
# integer-step coefficients

def _valid_projection(j, m):
    return abs(m) <= j and (j - m).is_integer


def _triangle(j1, j2, j3):
    return abs(j1 - j2) <= j3 <= j1 + j2 and (j1 + j2 + j3).is_integer


def cg(j1, m1, j2, m2, j3, m3=None):
    """<j1 m1, j2 m2 | j3 m3> with Condon-Shortley phases (exact).

    ``m3`` defaults to m1 + m2.  Anything that violates the triangle rule
    or the projection ranges gives 0 rather than an exception.
    """
    j1, m1, j2, m2, j3 = (as_half_integer(v) for v in (j1, m1, j2, m2, j3))
    m3 = m1 + m2 if m3 is None else as_half_integer(m3)
    if m3 != m1 + m2 or not _triangle(j1, j2, j3):
        return sp.Integer(0)
    if not all(_valid_projection(j, m) for j, m in ((j1, m1), (j2, m2), (j3, m3))):
        return sp.Integer(0)
    return sp.radsimp(clebsch_gordan(j1, j2, j3, m1, m2, m3))


def _is_int(x):
    return abs(x - round(x)) < 1e-12


def _fact_log(x):
    """(log|x!|, sign, pole) for real x, via log-gamma."""
    if x <= -1 and _is_int(x):
        return 0.0, 0.0, True
    return float(special.gammaln(x + 1)), float(special.gammasgn(x + 1)), False


def cg_real(j1, m1, j2, m2, j3, m3=None):
    """Racah's formula continued to real projections (float or complex).

    The j's must satisfy the triangle rule with j1 + j2 - j3 a
    non-negative integer, so the Racah sum is finite.  Factorials of
    real arguments are Gamma functions.  When J +- M is a negative integer
    the coefficient is 0, as for an out-of-range integer projection.
    Otherwise a prefactor pole raises ``SingularCoefficientError``.
    """
    j1, j2, j3 = float(j1), float(j2), float(j3)
    m1, m2 = float(m1), float(m2)
    M = m1 + m2 if m3 is None else float(m3)
    if abs(M - (m1 + m2)) > 1e-12:
        return 0.0
    top = j1 + j2 - j3
    if top < -1e-12 or not _is_int(top):
        raise UnsupportedCaseError("j1 + j2 - j3 must be a non-negative integer")
    top = int(round(top))
    for x in (j3 + M, j3 - M):
        if x < 0 and _is_int(x):
            return 0.0

    # each factorial under the square root keeps its own principal branch,
    # so that sqrt(x!) sqrt(x!) = x! also when x! < 0
    log_pref, phase = 0.0, 1.0 + 0j
    for x, power in ((j1 + j2 - j3, 1), (j1 - j2 + j3, 1), (-j1 + j2 + j3, 1),
                     (j1 + j2 + j3 + 1, -1),
                     (j1 + m1, 1), (j1 - m1, 1), (j2 + m2, 1), (j2 - m2, 1),
                     (j3 + M, 1), (j3 - M, 1)):
        lg, sg, pole = _fact_log(x)
        if pole:
            raise SingularCoefficientError("factorial pole at %g" % x)
        log_pref += power * lg
        if sg < 0:
            phase *= 1j if power > 0 else -1j
    log_pref = 0.5 * log_pref + 0.5 * math.log(2 * j3 + 1)

    total = 0.0
    for nu in range(top + 1):
        logs, sign = log_pref, (-1.0) ** nu
        skip = False
        for x in (nu, top - nu, j1 - m1 - nu, j2 + m2 - nu,
                  j3 - j2 + m1 + nu, j3 - j1 - m2 + nu):
            lg, sg, pole = _fact_log(x)
            if pole:  # 1/Γ at a pole is zero
                skip = True
                break
            logs -= lg
            sign *= sg
        if not skip:
            total += sign * math.exp(logs)
    value = phase * total
    if abs(value.imag) <= 1e-14 * max(1.0, abs(value.real)):
        return value.real
    return value


def three_j(j1, m1, j2, m2, j3, m3):
    """Wigner 3j symbol.

    Exact (sympy) for integer-step projections.  For real projections the
    value comes from ``cg_real`` and carries the phase
    exp(iπ(j1 - j2 - m3)), so it may be complex.
    """
    try:
        vals = [as_half_integer(v) for v in (j1, m1, j2, m2, j3, m3)]
        exact = all(_valid_projection(j, m) for j, m in
                    ((vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5])))
    except (ValueError, TypeError):
        exact = False
    if exact:
        return sp.radsimp(wigner_3j(*[vals[i] for i in (0, 2, 4, 1, 3, 5)]))
    j1f, m1f, j2f, m2f, j3f, m3f = (float(sp.N(as_real(v))) for v in
                                    (j1, m1, j2, m2, j3, m3))
    if abs(m1f + m2f + m3f) > 1e-12:
        return 0.0
    phase = cmath.exp(1j * math.pi * (j1f - j2f - m3f))
    value = phase * cg_real(j1f, m1f, j2f, m2f, j3f, -m3f) / math.sqrt(2 * j3f + 1)
    if abs(value.imag) <= 1e-14 * max(1.0, abs(value.real)):
        return value.real
    return value


# ---------------------------------------------------------------------------
# internal-frame coefficients <j n, k 0 | j n>

MAX_K = 4


def internal_cg(j, n, k):
    """<j n, k 0 | j n> for real n and k <= 4, exact when the input is.

    With c = n / sqrt(j(j+1)):

        k = 0:  1
        k = 1:  c
        k = 2:  sqrt(j(j+1) / ((j-1/2)(j+3/2))) P2(c)
        k = 3:  j(j+1) / sqrt((j-1)(j-1/2)(j+3/2)(j+2)) [P3(c) + c/(2j(j+1))]
        k = 4:  sqrt(j^3(j+1)^3 / ((j-3/2)(j-1)(j-1/2)(j+3/2)(j+2)(j+5/2)))
                [P4(c) + (25c^2 - 6)/(8j(j+1))]

    For k > 2j the prefactor is singular and SingularCoefficientError
    is raised.
    """
    j = as_half_integer(j)
    n = as_real(n)
    k = int(k)
    if k < 0 or k > MAX_K:
        raise UnsupportedCaseError("k must be in 0..%d" % MAX_K)
    if k == 0:
        return sp.Integer(1)
    if k > 2 * j:
        raise SingularCoefficientError(
            "<j n, %d 0 | j n> is singular for j = %s" % (k, j))
    jj = j * (j + 1)
    c = n / sp.sqrt(jj)
    h = sp.Rational(1, 2)
    if k == 1:
        value = c
    elif k == 2:
        value = sp.sqrt(jj / ((j - h) * (j + 3 * h))) * sp.legendre(2, c)
    elif k == 3:
        value = jj / sp.sqrt((j - 1) * (j - h) * (j + 3 * h) * (j + 2)) \
            * (sp.legendre(3, c) + c / (2 * jj))
    else:
        value = sp.sqrt(jj ** 3 / ((j - 3 * h) * (j - 1) * (j - h) * (j + 3 * h)
                                   * (j + 2) * (j + 5 * h))) \
            * (sp.legendre(4, c) + (25 * c ** 2 - 6) / (8 * jj))
    return sp.radsimp(sp.expand(value))


def triple_product(label1, label2, label3):
    """Overlap <D1 D2 | D3> in units of 8π², for (j, n, m) labels.

    ``label1`` and ``label2`` carry the projections n'1, n'2 on the axis of
    the third particle; n'1 + n'2 = n3 and m1 + m2 = m3 are required,
    otherwise the overlap is 0.  The n side is the 3j symbol with
    projections (-n'1, -n'2, n3) and the m side (-m1, -m2, m3).
    """
    (j1, n1, m1), (j2, n2, m2), (j3, n3, m3) = label1, label2, label3
    n1, n2, n3 = (as_real(v) for v in (n1, n2, n3))
    m1, m2, m3 = (as_half_integer(v) for v in (m1, m2, m3))
    if m1 + m2 != m3 or abs(float(sp.N(n1 + n2 - n3))) > 1e-12:
        return sp.Integer(0)
    nside = three_j(j1, -n1, j2, -n2, j3, n3)
    mside = three_j(j1, -m1, j2, -m2, j3, m3)
    return nside * mside


def triple_ratio(j, n, m, k):
    """<D^j_nm D^k_00 | D^j_nm> / <D^j_nm D^0_00 | D^j_nm>.

    Equals <j n, k 0 | j n><j m, k 0 | j m>, the expectation of P_k.
    Integer-step n uses exact 3j symbols; other n use ``internal_cg``.
    """
    j, m = as_half_integer(j), as_half_integer(m)
    n = as_real(n)
    external = cg(j, m, k, 0, j)
    try:
        n_exact = as_half_integer(n)
        in_window = _valid_projection(j, n_exact)
    except (ValueError, TypeError):
        in_window = False
    if in_window and k <= 2 * j:
        num = three_j(j, -n_exact, k, 0, j, n_exact)
        den = three_j(j, -n_exact, 0, 0, j, n_exact)
        internal = sp.radsimp(num / den * (-1) ** k)
    else:
        internal = internal_cg(j, n, k)
    return sp.radsimp(sp.expand(internal * external))


# ---------------------------------------------------------------------------
# squared coefficients at real projections

def _rg(x):
    return special.rgamma(x)


def _gamma_ratio(num, den):
    """Π Γ(num) / Π Γ(den) for arrays, in log space with signs.

    Factors of 1/Γ at a pole give exactly 0.  Working with log-gamma
    keeps products such as 1/(Γ(a+x) Γ(b-x)) finite for large |x|, where
    the individual factors overflow and underflow.
    """
    shape = np.broadcast(*num, *den).shape
    log = np.zeros(shape)
    sign = np.ones(shape)
    zero = np.zeros(shape, dtype=bool)
    for a in num:
        a = np.broadcast_to(np.asarray(a, dtype=float), shape)
        log = log + special.gammaln(a)
        sign = sign * special.gammasgn(a)
    for a in den:
        a = np.broadcast_to(np.asarray(a, dtype=float), shape)
        pole = (a <= 0) & (np.abs(a - np.round(a)) < 1e-13)
        zero |= pole
        safe = np.where(pole, 1.0, a)
        log = log - special.gammaln(safe)
        sign = sign * special.gammasgn(safe)
    return np.where(zero, 0.0, sign * np.exp(log))


def _pochhammer(a, r):
    """(a)_r = a (a+1) ... (a+r-1) for a non-negative integer r."""
    out = np.ones_like(np.asarray(a, dtype=float))
    for i in range(r):
        out = out * (a + i)
    return out


def _factorials(j1, x1, j2, x2, J, M):
    """(2j1)!(2j2)!(J+M)!(J-M)! / [(2J)!(j1±x1)!(j2±x2)!]"""
    return _gamma_ratio((2 * j1 + 1, 2 * j2 + 1, J + M + 1, J - M + 1),
                        (2 * J + 1, j1 + x1 + 1, j1 - x1 + 1, j2 + x2 + 1, j2 - x2 + 1))


def _cg_sq_stretch0(j1, x1, j2, x2):
    return _factorials(j1, x1, j2, x2, j1 + j2, x1 + x2)


def _cg_sq_stretch1(j1, x1, j2, x2):
    J = j1 + j2
    M = x1 + x2
    g = _gamma_ratio((2 * j1, 2 * j2, J + M, J - M),
                     (2 * J + 1, j1 + x1 + 1, j1 - x1 + 1, j2 + x2 + 1, j2 - x2 + 1))
    return 4 * (j2 * x1 - j1 * x2) ** 2 * (2 * J - 1) * g


def _binomial_ratio(j, m, r):
    """C(2j-2, j-m-r) / C(2j, j-m) as a polynomial in m (no poles)."""
    return (_pochhammer(j - m - r + 1, r) * _pochhammer(j + m + r - 1, 2 - r)
            / (2 * j * (2 * j - 1)))


def _cg_sq_stretch2(j1, x1, j2, x2):
    J = j1 + j2 - 2
    pref = 2 * j1 * (2 * j1 - 1) * 2 * j2 * (2 * j2 - 1) / (
        2 * (2 * j1 + 2 * j2 - 2) * (2 * j1 + 2 * j2 - 1))
    bracket = sum(w * _binomial_ratio(j1, x1, r) * _binomial_ratio(j2, -x2, r)
                  for r, w in ((0, 1.0), (1, -2.0), (2, 1.0)))
    # C(2j1, j1-m1) C(2j2, j2-m2) / C(2J, J-M) is the same factorial block
    return pref * bracket ** 2 * _factorials(j1, x1, j2, x2, J, x1 + x2)


def cg_sq_continuous(j1, x1, j2, x2, j3):
    """<j1 x1, j2 x2 | j3, x1 + x2>^2 for real projections (numpy-vectorized).

    Supported: j3 = j1 + j2 - d with d in {0, 1, 2}.  The d = 2 form is
    rewritten so that every binomial coefficient of a real argument enters
    as a polynomial ratio, which removes the 0 * inf points at integer x.
    """
    j1, j2, j3 = (float(sp.N(as_half_integer(v))) for v in (j1, j2, j3))
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    d = j1 + j2 - j3
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        if abs(d) < 1e-12:
            value = _cg_sq_stretch0(j1, x1, j2, x2)
        elif abs(d - 1) < 1e-12 and min(j1, j2) >= 0.5:
            value = _cg_sq_stretch1(j1, x1, j2, x2)
        elif abs(d - 2) < 1e-12 and min(j1, j2) >= 1:
            value = _cg_sq_stretch2(j1, x1, j2, x2)
        else:
            value = None
    if value is not None:
        # integer-step total projection beyond j3: the coefficient is 0, while
        # the continued formula has (j3 - M)! on a pole
        M = x1 + x2
        outside = (np.abs(M) > j3 + 1e-12) & (np.abs(j3 - M - np.round(j3 - M)) < 1e-13)
        return np.where(outside, 0.0, value)
    raise UnsupportedCaseError(
        "only j3 = j1 + j2, j1 + j2 - 1 and j1 + j2 - 2 are supported "
        "(got j1=%g, j2=%g, j3=%g)" % (j1, j2, j3))


def gamma_integral(alpha, beta, gamma, delta):
    """∫ dx / [Γ(α+x) Γ(β-x) Γ(γ+x) Γ(δ-x)] over the real line, closed form.

    Γ(α+β+γ+δ-3) / [Γ(α+β-1) Γ(β+γ-1) Γ(γ+δ-1) Γ(δ+α-1)], valid for
    α + β + γ + δ > 3.
    """
    s = alpha + beta + gamma + delta
    if not s > 3:
        raise ValueError("the integral diverges unless α+β+γ+δ > 3 (got %g)" % s)
    return float(special.gamma(s - 3) * _rg(alpha + beta - 1) * _rg(beta + gamma - 1)
                 * _rg(gamma + delta - 1) * _rg(delta + alpha - 1))


# ---------------------------------------------------------------------------
# rms patterns

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class RmsPattern:
    """A decaying spin (j3, n3) into two spins whose axis projections are
    integrated over the real line."""

    key: str
    label: str
    j1: float
    j2: float
    j3: float
    n3: float
    gamma_terms: tuple = field(default=())  # (coeff, α, β, γ, δ) for the closed form

    def density(self, x):
        """Squared coefficient at projection x for the first product."""
        return cg_sq_continuous(self.j1, x, self.j2, self.n3 - np.asarray(x, dtype=float),
                                self.j3)

    @property
    def axis(self):
        """The density is symmetric about n3/2 (equal product spins)."""
        return self.n3 / 2

    @property
    def window(self):
        """Classically allowed x: |x| and |n3 - x| both at most sqrt(s(s+1))."""
        r1 = math.sqrt(self.j1 * (self.j1 + 1))
        r2 = math.sqrt(self.j2 * (self.j2 + 1))
        return (max(-r1, self.n3 - r2), min(r1, self.n3 + r2))


def _w_terms():
    c = float(special.gamma(2 - SQRT2) * special.gamma(2 + SQRT2)) / 2
    return ((c, 1.5, 1.5, 1.5 - SQRT2, 1.5 + SQRT2),)


PATTERNS = {
    "w": RmsPattern("w", "<1 sqrt2 | 1/2 x, 1/2 sqrt2-x>", 0.5, 0.5, 1.0, SQRT2,
                    _w_terms()),
    "z": RmsPattern("z", "<1 0 | 1/2 x, 1/2 -x>", 0.5, 0.5, 1.0, 0.0,
                    ((0.5, 1.5, 1.5, 1.5, 1.5),)),
    "h-ff": RmsPattern("h-ff", "<0 0 | 1/2 x, 1/2 -x>", 0.5, 0.5, 0.0, 0.0,
                       ((0.5, 1.5, 1.5, 1.5, 1.5), (-2.0, 1.5, 1.5, 0.5, 0.5))),
    "h-ww": RmsPattern("h-ww", "<0 0 | 1 x, 1 -x>", 1.0, 1.0, 0.0, 0.0),
}

_ALIASES = {
    "1,sqrt2<-1/2,1/2": "w", "1,smax<-1/2,1/2": "w", "w": "w", "b": "w",
    "1,0<-1/2,1/2": "z", "z": "z", "a": "z",
    "0,0<-1/2,1/2": "h-ff", "h-ff": "h-ff", "hff": "h-ff", "d": "h-ff",
    "0,0<-1,1": "h-ww", "h-ww": "h-ww", "hww": "h-ww",
}


def get_pattern(name):
    """Look up a pattern by key, alias or arrow form such as ``0,0<-1,1``."""
    if isinstance(name, RmsPattern):
        return name
    key = "".join(str(name).lower().split())
    key = key.replace("←", "<-").replace("√2", "sqrt2").replace("½", "1/2")
    if key in _ALIASES:
        return PATTERNS[_ALIASES[key]]
    raise UnsupportedCaseError(
        "unknown pattern %r; supported: %s" % (name, ", ".join(sorted(PATTERNS))))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _panels(f, a, b):
    """Sum of Gauss-Legendre rules over the unit panels of [a, b]."""
    edges = np.arange(a, b + 0.5, 1.0)
    mids = 0.5 * (edges[1:] + edges[:-1])
    x = (mids[:, None] + 0.5 * _GL_NODES[None, :]).ravel()
    return 0.5 * float(np.sum(np.tile(_GL_WEIGHTS, len(mids)) * f(x)))


def integrate_line(f, center=0.0, core=8, levels=(8, 16, 32, 64, 128, 256)):
    """∫ f over the real line for densities with algebraic oscillating tails.

    The core [center - core, center + core] is done adaptively with
    scipy's quad panel by panel.  Beyond it the integral over
    [center - L, center + L] is accumulated for the integer L in
    ``levels``.  It is extrapolated to L = ∞ with a Richardson table in
    1/L, which holds because the tails behave like polynomials in 1/x
    times functions of period 1.  Returns (value, error estimate).
    """
    core_val, core_err = 0.0, 0.0
    for a in range(-core, core):
        v, e = integrate.quad(lambda t: float(f(np.array([center + t]))[0]), a, a + 1,
                              epsabs=1e-15, epsrel=1e-13, limit=200)
        core_val += v
        core_err += e
    partial = []
    acc = core_val
    prev = core
    for L in levels:
        if L > prev:
            acc += _panels(lambda t: f(center + t), prev, L)
            acc += _panels(lambda t: f(center - t), prev, L)
            prev = L
        partial.append(acc)
    hs = [1.0 / L for L in levels]
    table = [list(partial)]
    for order in range(1, len(levels)):
        prev_row = table[-1]
        row = []
        for i in range(len(prev_row) - 1):
            h0, h1 = hs[i], hs[i + order]
            row.append((h0 * prev_row[i + 1] - h1 * prev_row[i]) / (h0 - h1))
        table.append(row)
    value = table[-1][0]
    err = abs(table[-1][0] - table[-2][-1]) + core_err
    return value, err


@dataclass(frozen=True)
class RmsResult:
    pattern: str
    integral: float
    error_estimate: float
    closed_form: float = None

    @property
    def value(self):
        """The rms coefficient, reported as a magnitude."""
        return math.sqrt(abs(self.integral))


def rms_internal_cg(pattern, tol=1e-8):
    """sqrt of ∫ <...>^2 dx over the real line for one of ``PATTERNS``.

    The integral is done by quadrature.  Patterns that can be written with
    Γ-function products also carry the ``gamma_integral`` closed form.
    """
    p = get_pattern(pattern)
    value, err = integrate_line(p.density, center=p.axis)
    if err > tol:
        raise AccuracyError("quadrature error %.3g exceeds %.3g" % (err, tol), err)
    closed = None
    if p.gamma_terms:
        closed = sum(c * gamma_integral(a, b, g, d) for c, a, b, g, d in p.gamma_terms)
    return RmsResult(p.key, value, err, closed)


# ---------------------------------------------------------------------------
# sampled curves

@dataclass(frozen=True)
class QuasiprobCurve:
    pattern: str
    x: np.ndarray
    density: np.ndarray
    window: tuple
    axis: float
    trapezoid_area: float
    tail_mass: float

    @property
    def area(self):
        """Trapezoid area of the samples plus the mass outside the range."""
        return self.trapezoid_area + self.tail_mass

    def rows(self):
        return list(zip(self.x.tolist(), self.density.tolist()))


def quasiprob_curve(pattern, x_range=None, samples=4001):
    """Sample a pattern's density on ``x_range`` (default: axis ± 10)."""
    p = get_pattern(pattern)
    if samples < 2:
        raise ValueError("samples must be at least 2")
    if x_range is None:
        x_range = (p.axis - 10.0, p.axis + 10.0)
    lo, hi = float(x_range[0]), float(x_range[1])
    if not hi > lo:
        raise ValueError("empty x range")
    x = np.linspace(lo, hi, int(samples))
    y = p.density(x)
    trap = float(integrate.trapezoid(y, x))
    total, _ = integrate_line(p.density, center=p.axis)
    inside = sum(integrate.quad(lambda t: float(p.density(np.array([t]))[0]),
                                a, min(a + 1, hi), epsabs=1e-15, limit=200)[0]
                 for a in np.arange(lo, hi, 1.0))
    return QuasiprobCurve(p.key, x, y, p.window, p.axis, trap, total - inside)


# ---------------------------------------------------------------------------
# rotation through coupling to a large angular momentum

def asymptotic_rotation(j1, m1_prime, m1, theta, j2_cutoff=1e6):
    """(-1)^(j1 - m1) <j1 m1, j2 m2 | j2 + m1', m1 + m2> at m2 = j2 cos θ.

    The value approaches the rotation matrix element d^j1_{m1' m1}(θ) as
    j2 grows.  It is evaluated at j2 and 2 j2 and extrapolated linearly
    in 1/j2.  With Condon-Shortley coefficients the phase that gives the
    standard d-matrix is (-1)^(j1 - m1).
    """
    j1 = float(as_half_integer(j1))
    m1_prime = float(as_half_integer(m1_prime))
    m1 = float(as_half_integer(m1))
    sign = (-1.0) ** int(round(j1 - m1))

    def at(j2):
        m2 = j2 * math.cos(theta)
        v = cg_real(j1, m1, j2, m2, j2 + m1_prime)
        return sign * (v.real if isinstance(v, complex) else v)

    j2 = float(j2_cutoff)
    return 2 * at(2 * j2) - at(j2)
