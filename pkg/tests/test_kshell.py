import math

import numpy as np
import pytest
from scipy.integrate import quad

from spa_channeling.constants import BOHR_RADIUS
from spa_channeling.errors import DataError, ParseError
from spa_channeling.kshell import (
    SlaterOrbital,
    SlaterTerm,
    load_slater_params,
    normalization,
    psi_K,
    radial,
)


def _norm_by_quadrature(orb):
    return quad(lambda r: 4 * math.pi * r**2 * float(psi_K(orb, r)) ** 2, 0, 2.0, limit=200)[0]


@pytest.mark.parametrize("r_units", [0.1, 1.0])
def test_hydrogenic_orbital(write_slater, r_units):
    Z = 14
    orb = load_slater_params(write_slater(f"# hydrogenic 1s\nZ {Z}\n1.0 1 {Z}.0\n"))
    r = r_units * BOHR_RADIUS / Z
    expected = math.sqrt(Z**3 / (math.pi * BOHR_RADIUS**3)) * math.exp(-Z * r / BOHR_RADIUS)
    assert float(psi_K(orb, r)) == pytest.approx(expected, rel=1e-12)
    assert orb.Z == Z


def test_radial_at_origin():
    orb = SlaterOrbital((SlaterTerm(0.9, 1, 2.0),))
    zeta = 2.0 / BOHR_RADIUS
    assert float(radial(orb, 0.0)) == pytest.approx(0.9 * (2 * zeta) ** 1.5 / math.sqrt(2), rel=1e-14)


def test_shipped_orbital(orbital):
    assert orbital.Z == 14
    assert _norm_by_quadrature(orbital) == pytest.approx(1.0, abs=1e-3)
    assert normalization(orbital) == pytest.approx(1.0, abs=1e-3)


def test_shipped_value_matches_independent_evaluation(orbital):
    r = BOHR_RADIUS / 14
    total = 0.0
    for t in orbital.terms:
        zeta = t.zeta_per_bohr / BOHR_RADIUS
        total += (
            t.C
            * (2 * zeta) ** 1.5
            * math.exp(-zeta * r)
            * (2 * zeta * r) ** (t.nlambda - 1)
            / math.sqrt(math.factorial(2 * t.nlambda))
        )
    assert float(radial(orbital, r)) == pytest.approx(total, rel=1e-12)


def test_decays_monotonically(orbital):
    r = np.linspace(0.05, 2.0, 200)
    values = psi_K(orbital, r)
    assert np.all(np.diff(values) < 0)
    assert values[-1] < 1e-10 * values[0]


def test_unit_scaling_invariance():
    """Psi * length^{3/2} does not depend on whether lengths are in Bohr or Angstrom."""
    orb = SlaterOrbital((SlaterTerm(0.8, 1, 3.0), SlaterTerm(0.3, 2, 1.5)))
    r_bohr = 0.37
    in_angstrom = float(psi_K(orb, r_bohr * BOHR_RADIUS)) * BOHR_RADIUS**1.5
    # same terms evaluated directly in atomic units
    in_bohr = sum(
        t.C * (2 * t.zeta_per_bohr) ** 1.5 * (2 * t.zeta_per_bohr * r_bohr) ** (t.nlambda - 1)
        * math.exp(-t.zeta_per_bohr * r_bohr) / math.sqrt(math.factorial(2 * t.nlambda))
        for t in orb.terms
    ) / math.sqrt(4 * math.pi)
    assert in_angstrom == pytest.approx(in_bohr, rel=1e-12)


def test_multi_term_file(write_slater):
    p, q = SlaterTerm(1.0, 1, 13.0), SlaterTerm(1.0, 2, 9.0)
    overlap = quad(lambda r: float(radial(SlaterOrbital((p,)), r) * radial(SlaterOrbital((q,)), r)) * r**2, 0, 2.0, limit=200)[0]
    c = 1.0 / math.sqrt(2.0 + 2.0 * overlap)
    orb = load_slater_params(write_slater(f"{c} 1 13.0  # first\n\n{c} 2 9.0\n"))
    assert len(orb.terms) == 2
    assert orb.Z is None
    assert normalization(orb) == pytest.approx(1.0, abs=1e-10)
    assert _norm_by_quadrature(orb) == pytest.approx(1.0, abs=1e-8)


def test_empty_file(write_slater):
    with pytest.raises(ParseError):
        load_slater_params(write_slater(""))
    with pytest.raises(ParseError):
        load_slater_params(write_slater("# only a comment\n"))


def test_malformed_line_reports_line_number(write_slater):
    with pytest.raises(ParseError) as info:
        load_slater_params(write_slater("# header\n1.0 1 13.0\n1.0 two 4.0\n"))
    assert info.value.line == 3
    assert ":3:" in str(info.value)
    with pytest.raises(ParseError) as info:
        load_slater_params(write_slater("1.0 1\n"))
    assert info.value.line == 1


def test_normalization_out_of_range(write_slater):
    with pytest.raises(DataError):
        load_slater_params(write_slater("0.5 1 13.0\n"))


def test_invalid_terms():
    with pytest.raises(DataError):
        SlaterOrbital(())
    with pytest.raises(DataError):
        SlaterOrbital((SlaterTerm(1.0, 8, 1.0),))
    with pytest.raises(DataError):
        SlaterOrbital((SlaterTerm(1.0, 1, -1.0),))
