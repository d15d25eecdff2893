import json
import math

import pytest
import sympy as sp

from spinwave.coupling import UnsupportedCaseError
from spinwave.reactions import (
    PARTICLES_ENV, IndeterminateError, NotInTableError, check_reaction, classify,
    conservation_solve, dark_matter_fraction, higher_spin_emission, is_self_conjugate,
    koide, landau_yang, lepton_masses, load_table, parse_particle_line, parse_reaction,
    stretched_rms, symmetry_solve,
)
from spinwave.verification import TABLE_ROWS


@pytest.mark.parametrize("text,allowed", TABLE_ROWS)
def test_decay_rows(text, allowed):
    v = check_reaction(text)
    assert v.allowed == allowed
    assert abs(v.coefficient - (1.0 if allowed else 0.0)) < 1e-10
    assert v.label == ("ALLOWED" if allowed else "FORBIDDEN")


@pytest.mark.parametrize("text", ["H0 -> Z + Z", "Z -> f + fbar", "H0 -> f + fbar",
                                  "Z -> photon + photon"])
def test_exchange_of_products(text):
    parent, prods = text.split("->")
    a, b = prods.split("+")
    swapped = "%s -> %s + %s" % (parent, b.strip(), a.strip())
    assert abs(check_reaction(text).coefficient - check_reaction(swapped).coefficient) < 1e-12


def test_hypothetical_neutral_lepton_pair():
    assert not check_reaction("Z -> e0 + e0").allowed


@pytest.mark.parametrize("s_f", [1, 2])
def test_landau_yang(s_f):
    v = landau_yang(1, s_f)
    assert not v.allowed
    assert v.coefficient < 1e-12


def test_landau_yang_scalar_allowed():
    assert landau_yang(0, 1).allowed


def test_triangle_violation():
    v = check_reaction("H0 -> e- + photon")
    assert not v.allowed and v.route == "triangle"


def test_stretched_rms_closed_form():
    value, err, closed = stretched_rms(1, 2, math.sqrt(12))
    assert abs(value - 1) < 1e-10
    assert abs(closed - 1) < 1e-12
    # any n3 gives 1 for the stretched square
    value, _, closed = stretched_rms(0.5, 1, 0.37)
    assert abs(value - 1) < 1e-10 and abs(closed - 1) < 1e-12


def test_higher_spin_emission_exceeds_one():
    for j, k in [(1, 2), (2, 3), (2, 4), (3, 4)]:
        assert float(higher_spin_emission(j, k, sp.sqrt(j * (j + 1)))) > 1


def test_neutrino_projection():
    r = parse_reaction("W+ -> e+ + nu_e", unknown=["nu_e"])
    assert conservation_solve(r) == sp.sqrt(3) / 2
    r = parse_reaction("W+ -> nu_e + e+", unknown=["nu_e"])
    assert symmetry_solve(r) == sp.sqrt(3) / 2


def test_conservation_needs_one_unknown():
    with pytest.raises(IndeterminateError):
        conservation_solve(parse_reaction("W+ -> e+ + nu_e"))


def test_unknown_n_blocks_check():
    with pytest.raises(IndeterminateError):
        check_reaction(parse_reaction("W+ -> e+ + nu_e", unknown=["nu_e"]))


def test_unsupported_three_body():
    with pytest.raises(UnsupportedCaseError):
        check_reaction("H0 -> e- + e+ + photon")


def test_not_in_table():
    with pytest.raises(NotInTableError):
        classify("graviton")
    with pytest.raises(ValueError):
        parse_reaction("Z photon photon")


def test_m_labels():
    r = parse_reaction("W+ -> e+[m=1/2] + nu_e[m=1/2]")
    assert [p.m for p in r.products] == [sp.Rational(1, 2)] * 2


def test_particle_lines():
    p = parse_particle_line("X 3 value:1/3 hypothetical")
    assert p.spin == sp.Rational(3, 2) and p.n == sp.Rational(1, 3) and p.hypothetical
    assert parse_particle_line("# comment") is None
    with pytest.raises(ValueError):
        parse_particle_line("X 2 weird")


def test_table_override(tmp_path, monkeypatch):
    f = tmp_path / "p.txt"
    f.write_text("A 0 zero\nB 2 zero\n", encoding="utf-8")
    monkeypatch.setenv(PARTICLES_ENV, str(f))
    table = load_table()
    assert set(table) == {"a", "b"}
    assert not check_reaction(parse_reaction("B -> B + B", table)).allowed


def test_self_conjugate():
    assert is_self_conjugate(classify("Z"))
    assert not is_self_conjugate(classify("e-"))


def test_dark_matter_fraction():
    assert dark_matter_fraction(1) == sp.Rational(5, 6)
    assert abs(float(dark_matter_fraction(1.13)) - 0.8466) < 5e-4
    with pytest.raises(ValueError):
        dark_matter_fraction(0)


def test_koide():
    k = koide(*lepton_masses())
    assert abs(k - 2 / 3) < 2e-3
    assert abs(koide(*(7.5 * m for m in lepton_masses())) - k) < 1e-14
    with pytest.raises(ValueError):
        koide(0, 1, 2)


def test_lepton_masses_from_file(tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"e": 1, "mu": 4, "tau": 9}))
    assert lepton_masses(str(f)) == (1, 4, 9)
