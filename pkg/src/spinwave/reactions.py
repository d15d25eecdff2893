"""Particle table and internal-frame audits of two-body decays.

A particle is a spin s plus an internal projection category:

    stype    n = sqrt(s(s+1))   (charged particles and neutrinos)
    zero     n = 0              (particles that are their own antiparticle)
    value    an explicit real n
    unknown  n to be solved for

``check_reaction`` picks the internal-frame coefficient that applies to a
1 -> 2 decay and calls the reaction forbidden when it vanishes.  Only
magnitudes are reported; phases of internal coefficients are not defined.
"""

from dataclasses import dataclass, replace
from importlib import resources
import json
import os
import re

import sympy as sp
from scipy import special

from . import coupling
from .coupling import UnsupportedCaseError, internal_cg
from .numbers import as_half_integer, as_real
from .wavefunctions import build, same_state, spin_inversion

PARTICLES_ENV = "SPINWAVE_PARTICLES"
CATEGORIES = ("stype", "zero", "value", "unknown")
TOL = 1e-10


class NotInTableError(KeyError):
    pass


class IndeterminateError(ValueError):
    pass


@dataclass(frozen=True)
class Particle:
    name: str
    spin: sp.Expr
    category: str
    value: sp.Expr = None
    hypothetical: bool = False

    @property
    def n(self):
        """Internal projection, or None when unknown."""
        if self.category == "stype":
            return sp.sqrt(self.spin * (self.spin + 1))
        if self.category == "zero":
            return sp.Integer(0)
        if self.category == "value":
            return self.value
        return None

    def with_unknown_n(self):
        return replace(self, category="unknown", value=None)


def parse_particle_line(line):
    """``name twice_spin category [hypothetical]`` -> Particle, or None."""
    line = line.split("#", 1)[0].strip()
    if not line:
        return None
    parts = line.split()
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "hypothetical"):
        raise ValueError("bad particle line: %r" % line)
    name, twice, cat = parts[:3]
    spin = sp.Rational(int(twice), 2)
    if spin < 0:
        raise ValueError("negative spin in %r" % line)
    value = None
    if cat.startswith("value:"):
        value = as_real(cat[len("value:"):])
        cat = "value"
    if cat not in CATEGORIES:
        raise ValueError("unknown category %r" % cat)
    return Particle(name, spin, cat, value, len(parts) == 4)


def load_table(path=None):
    """Read a particle table; defaults to the env override or bundled data."""
    path = path or os.environ.get(PARTICLES_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = resources.files("spinwave").joinpath("data/particles.txt").read_text("utf-8")
    table = {}
    for line in text.splitlines():
        p = parse_particle_line(line)
        if p is not None:
            table[p.name.lower()] = p
    return table


_DEFAULT = None


def default_table():
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_table()
    return _DEFAULT


def classify(name, table=None):
    table = default_table() if table is None else table
    try:
        return table[name.strip().lower()]
    except KeyError:
        raise NotInTableError("%r is not in the particle table" % name) from None


def is_self_conjugate(particle):
    """Spin inversion n -> -n leaves the stretched wavefunction unchanged."""
    n = particle.n
    if n is None:
        raise IndeterminateError("n of %s is unknown" % particle.name)
    d = build(particle.spin, n, particle.spin)
    return same_state(spin_inversion(d), d)


# ---------------------------------------------------------------------------
# reactions

@dataclass(frozen=True)
class Participant:
    particle: Particle
    m: sp.Expr


@dataclass(frozen=True)
class Reaction:
    parent: Participant
    products: tuple

    def __str__(self):
        return "%s -> %s" % (self.parent.particle.name,
                             " + ".join(p.particle.name for p in self.products))


_ARROW = re.compile(r"\s*(?:->|→|=>)\s*")
_TOKEN = re.compile(r"^(?P<name>[^\s\[\]]+)(?:\[m=(?P<m>[^\]]+)\])?$")


def _participant(token, table, unknown):
    match = _TOKEN.match(token)
    if not match:
        raise ValueError("cannot read particle %r" % token)
    particle = classify(match.group("name"), table)
    if match.group("name").lower() in unknown:
        particle = particle.with_unknown_n()
    m = particle.spin if match.group("m") is None else as_half_integer(match.group("m"))
    return Participant(particle, m)


def parse_reaction(text, table=None, unknown=()):
    """Parse ``"W+ -> e+ + nu_e"``; products may be separated by ``+``
    (with spaces) or blanks.  ``name[m=1/2]`` sets an m label, otherwise
    m = s.  Names listed in ``unknown`` get an unknown n."""
    table = default_table() if table is None else table
    unknown = {u.lower() for u in unknown}
    parts = _ARROW.split(text.strip())
    if len(parts) != 2:
        raise ValueError("reaction needs exactly one arrow: %r" % text)
    parent = _participant(parts[0].strip(), table, unknown)
    tokens = [t for t in re.split(r"\s+\+\s+|\s+", parts[1].strip()) if t and t != "+"]
    if not tokens:
        raise ValueError("reaction has no products: %r" % text)
    return Reaction(parent, tuple(_participant(t, table, unknown) for t in tokens))


@dataclass(frozen=True)
class Verdict:
    reaction: str
    allowed: bool
    coefficient: float
    route: str
    rationale: str
    exact: sp.Expr = None

    @property
    def label(self):
        return "ALLOWED" if self.allowed else "FORBIDDEN"


def _zero(n):
    return n is not None and abs(float(sp.N(n))) < TOL


def _same(a, b):
    return a is not None and b is not None and abs(float(sp.N(a - b))) < TOL


def stretched_rms(j1, j2, n3):
    """rms of <j1 x, j2 n3-x | j1+j2, n3> over the real line.

    Returns (quadrature integral, error estimate, closed form).  The closed
    form is the Γ-integral, which equals 1 for every n3.
    """
    j1f, j2f, n3f = (float(sp.N(v)) for v in (j1, j2, n3))
    pattern = coupling.RmsPattern("stretched", "<%g %g | %g x, %g %g-x>" % (
        j1f + j2f, n3f, j1f, j2f, n3f), j1f, j2f, j1f + j2f, n3f)
    value, err = coupling.integrate_line(pattern.density, center=n3f / 2)
    J = j1f + j2f
    pref = float(special.gamma(2 * j1f + 1) * special.gamma(2 * j2f + 1)
                 * special.gamma(J + n3f + 1) * special.gamma(J - n3f + 1)
                 / special.gamma(2 * J + 1))
    closed = pref * coupling.gamma_integral(j1f + 1, j1f + 1, j2f - n3f + 1, j2f + n3f + 1)
    return value, err, closed


def check_reaction(reaction, table=None):
    """Verdict for a 1 -> 2 decay or emission vertex.

    Routes, tried in order:

    all-zero   every n is 0: the products are exchanged with the parent,
               |<s_a 0 | s_i 0, s_b 0>|.
    emission   a product repeats the parent (spin and n) and the other
               product has n = 0: |<s n, s_b 0 | s n>| from internal_cg.
    rms        the products' projections on the parent axis are integrated
               out, using the supported stretch patterns.
    """
    if isinstance(reaction, str):
        reaction = parse_reaction(reaction, table)
    name = str(reaction)
    if len(reaction.products) != 2:
        raise UnsupportedCaseError("only two-body final states are supported")
    P = reaction.parent.particle
    A, B = (p.particle for p in reaction.products)
    for p in (P, A, B):
        if p.n is None:
            raise IndeterminateError("n of %s is unknown; solve for it first" % p.name)
    s_i, n_i = P.spin, P.n
    if not (s_i + A.spin + B.spin).is_integer or \
            not abs(A.spin - B.spin) <= s_i <= A.spin + B.spin:
        return Verdict(name, False, 0.0, "triangle",
                       "spins violate the triangle rule", sp.Integer(0))

    # all projections zero
    if _zero(n_i) and _zero(A.n) and _zero(B.n):
        big, small = (A, B) if A.spin >= B.spin else (B, A)
        if big.spin == small.spin and s_i <= coupling.MAX_K:
            value = sp.Abs(internal_cg(big.spin, 0, s_i))
            mag = float(value)
        else:
            mag = abs(coupling.cg_real(float(s_i), 0.0, float(small.spin), 0.0,
                                       float(big.spin)))
            value = None
        return Verdict(name, mag > TOL, mag, "all-zero",
                       "|<%s 0 | %s 0, %s 0>| = |<%s 0 | %s 0, %s 0>| = %.12g" % (
                           s_i, A.spin, B.spin, big.spin, s_i, small.spin, mag), value)

    # emission of an n = 0 boson
    for f, b in ((A, B), (B, A)):
        if f.spin == s_i and _same(f.n, n_i) and _zero(b.n):
            value = internal_cg(s_i, n_i, b.spin)
            mag = abs(float(sp.N(value)))
            return Verdict(name, mag > TOL, mag, "emission",
                           "<%s %s | %s %s, %s 0>" % (s_i, n_i, f.spin, f.n, b.spin),
                           sp.Abs(value))

    # split axis: integrate the product projections
    if s_i == A.spin + B.spin:
        value, err, closed = stretched_rms(A.spin, B.spin, n_i)
        if abs(value - closed) > 1e-8:
            raise coupling.AccuracyError("stretched rms quadrature disagrees", err)
        mag = float(abs(value)) ** 0.5
        return Verdict(name, mag > TOL, mag, "rms",
                       "<%s %s | %s x, %s %s-x>_rms, stretched" % (
                           s_i, n_i, A.spin, B.spin, n_i))
    if A.spin == B.spin and _zero(n_i):
        key = {(0, sp.Rational(1, 2)): "h-ff", (0, 1): "h-ww"}.get((s_i, A.spin))
        if key is not None:
            r = coupling.rms_internal_cg(key)
            return Verdict(name, r.value > TOL, r.value, "rms",
                           "%s, pattern %s" % (coupling.PATTERNS[key].label, key))
    raise UnsupportedCaseError(
        "no supported stretch case for %s: needs <%s x, %s y | %s %s>^2 with "
        "j3 = j1 + j2 - %s" % (name, A.spin, B.spin, s_i, n_i, A.spin + B.spin - s_i))


def landau_yang(s_i, s_f):
    """Decay of an n = 0 spin-s_i particle into two n = 0 spin-s_f particles."""
    s_i, s_f = as_half_integer(s_i), as_half_integer(s_f)
    parent = Particle("parent", s_i, "zero")
    prod = Particle("product", s_f, "zero")
    r = Reaction(Participant(parent, s_i), (Participant(prod, s_f), Participant(prod, s_f)))
    return check_reaction(r)


def higher_spin_emission(j, k, n):
    """<j n | k 0, j n> = <j n, k 0 | j n>."""
    return internal_cg(j, n, k)


# ---------------------------------------------------------------------------
# projection conservation

def _axis_term(particle, m, n):
    s = particle.spin
    return n * m / sp.sqrt(s * (s + 1))


def conservation_solve(reaction):
    """Solve n_i m_i/|s_i| = Σ n_f m_f/|s_f| for the one unknown n."""
    parts = [reaction.parent] + list(reaction.products)
    unknown = [p for p in parts if p.particle.category == "unknown"]
    if len(unknown) != 1:
        raise IndeterminateError("exactly one unknown n is required (got %d)" % len(unknown))
    u = unknown[0]
    if u.m == 0 or u.particle.spin == 0:
        raise IndeterminateError("the unknown enters with m = 0; n is undetermined")
    x = sp.Symbol("x", real=True)
    lhs = _axis_term(reaction.parent.particle, reaction.parent.m,
                     x if u is reaction.parent else reaction.parent.particle.n)
    rhs = sum(_axis_term(p.particle, p.m, x if p is u else p.particle.n)
              for p in reaction.products)
    if sum(p.m for p in reaction.products) != reaction.parent.m:
        raise ValueError("m labels are not conserved")
    (sol,) = sp.solve(sp.Eq(lhs, rhs), x)
    return sp.radsimp(sp.simplify(sol))


def symmetry_solve(reaction):
    """The unknown product takes the n of an equal-spin partner.

    For two equal spins the integrated coupling is symmetric under
    exchanging the products, so the two must carry the same n.
    """
    prods = list(reaction.products)
    unknown = [p for p in prods if p.particle.category == "unknown"]
    if len(prods) != 2 or len(unknown) != 1:
        raise IndeterminateError("needs a two-body decay with one unknown product")
    u = unknown[0]
    other = prods[1] if prods[0] is u else prods[0]
    if other.particle.spin != u.particle.spin:
        raise IndeterminateError("products have different spins")
    return other.particle.n


# ---------------------------------------------------------------------------
# arithmetic predictions

def dark_matter_fraction(r):
    """(1 + 4r) / (2 + 4r) for neutral-to-charged mass ratio r."""
    r = as_real(r)
    if not r > 0:
        raise ValueError("mass ratio must be positive")
    return sp.radsimp((1 + 4 * r) / (2 + 4 * r)) if not r.has(sp.Float) \
        else (1 + 4 * r) / (2 + 4 * r)


def lepton_masses(path=None):
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = json.loads(resources.files("spinwave").joinpath(
            "data/lepton_masses.json").read_text("utf-8"))
    return data["e"], data["mu"], data["tau"]


def koide(m_e, m_mu, m_tau):
    """(m_e + m_mu + m_tau) / (sqrt m_e + sqrt m_mu + sqrt m_tau)^2."""
    masses = [float(m) for m in (m_e, m_mu, m_tau)]
    if min(masses) <= 0:
        raise ValueError("masses must be positive")
    return sum(masses) / sum(m ** 0.5 for m in masses) ** 2
