"""Differential cross-section of single-photon annihilation on a K-shell electron.

Energies are in eV, wavevectors in inverse Angstrom, cross-sections in barn/sr.
The normalization volume L^2 d never appears numerically: with the positron
Bloch function normalized to unit density over one period and the photon
density of states L^3 omega^2 / ((2 pi)^3 hbar c^3), all powers of L cancel.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import minimize_scalar

from .bands import BandStructure, PopulationTable
from .constants import ANGSTROM2_TO_BARN, ELECTRON_MASS, FINE_STRUCTURE, HBAR_C, HBAR_EV_S, MEV
from .errors import ConsistencyError, DomainError
from .integrals import IoTable, QVector, io_assemble
from .kshell import SlaterOrbital

logger = logging.getLogger(__name__)

SI_K_BINDING = 1839.0
MATRIX_ELEMENT_FORMS = ("printed", "cross_product")
THETA_SCAN_MIN = 1e-5
THETA_SCAN_MAX = 0.5 * math.pi - 1e-9
THETA_SCAN_POINTS = 200
THETA_XTOL = 1e-5


# -----------------------------------------------------------------------------
# Kinematics
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class PositronBeam:
    """Channeled positron: total longitudinal energy E_par in MeV, entry angle in rad."""

    E_par: float
    entry_angle: float = 0.0
    p_y: float = 0.0

    def __post_init__(self):
        if self.E_par * MEV <= ELECTRON_MASS:
            raise DomainError(f"E_par={self.E_par} MeV is not above the positron rest energy")
        if self.entry_angle < 0:
            raise DomainError(f"entry angle must be >= 0, got {self.entry_angle}")

    @property
    def energy(self) -> float:
        """E_par in eV."""
        return self.E_par * MEV

    @property
    def gamma(self) -> float:
        return self.energy / ELECTRON_MASS

    @property
    def beta(self) -> float:
        return math.sqrt(1.0 - 1.0 / self.gamma**2)

    @property
    def p_z(self) -> float:
        """gamma m beta c, in eV/c."""
        return self.gamma * ELECTRON_MASS * self.beta


@dataclass(frozen=True)
class PhotonKinematics:
    """Emission direction (Theta from the channel axis z, Phi from x) and photon energy in eV."""

    Theta: float
    Phi: float
    homega: float

    @cached_property
    def direction(self) -> np.ndarray:
        st = math.sin(self.Theta)
        return np.array([st * math.cos(self.Phi), st * math.sin(self.Phi), math.cos(self.Theta)])

    @property
    def kappa(self) -> np.ndarray:
        """Photon wavevector omega/c * n in inverse Angstrom."""
        return self.homega / HBAR_C * self.direction

    @property
    def omega(self) -> float:
        """Angular frequency in 1/s."""
        return self.homega / HBAR_EV_S


@dataclass(frozen=True)
class CrossSectionPoint:
    Theta: float
    Phi: float
    band: int | None
    subband: int | None
    dsigma_domega: float
    homega: float
    populated: bool = True


def photon_energy(beam: PositronBeam, E_perp: float, binding: float = SI_K_BINDING) -> float:
    """hbar omega = E_par + E_perp + (m c^2 - binding), in eV."""
    if binding < 0:
        raise DomainError(f"binding energy must be >= 0, got {binding}")
    return beam.energy + E_perp + ELECTRON_MASS - binding


def momentum_transfer(beam: PositronBeam, photon: PhotonKinematics) -> QVector:
    """q = p/hbar - kappa; q_x is left at -kappa_x and shifted by G per plane wave."""
    kx, ky, kz = photon.kappa
    return QVector(q_x=-kx, q_y=beam.p_y / HBAR_C - ky, q_z=beam.p_z / HBAR_C - kz)


# -----------------------------------------------------------------------------
# Matrix element
# -----------------------------------------------------------------------------


def matrix_element_sq(
    beam: PositronBeam,
    photon: PhotonKinematics,
    bs: BandStructure,
    io: IoTable,
    i: int,
    i_n: int,
    form: str = "printed",
) -> float:
    """Polarization-summed |M|^2 stripped of its constant prefactor, in Angstrom.

    With A = sum_m G_m X_m Io_m and S = sum_m X_m Io_m, the printed form is
    |cos T A - (p_z/hbar) cos F sin T S|^2 + |A|^2 + ((p_z/hbar) sin T sin F)^2 |S|^2.
    The cross_product form is |L x n|^2 with L = (A, (p_y/hbar) S, (p_z/hbar) S).
    """
    if form not in MATRIX_ELEMENT_FORMS:
        raise DomainError(f"unknown matrix element form {form!r}, expected one of {MATRIX_ELEMENT_FORMS}")
    if io.M != bs.M:
        raise ConsistencyError(f"Io table built for M={io.M}, band structure has M={bs.M}")
    x = bs.coefficients(i, i_n)
    row = io.row(i_n)
    a = np.sum(bs.g_vectors(i_n) * x * row)
    s = np.sum(x * row)
    p_z = beam.p_z / HBAR_C

    if form == "cross_product":
        vec = np.array([a, beam.p_y / HBAR_C * s, p_z * s])
        return float(np.sum(np.abs(np.cross(vec, photon.direction)) ** 2))

    st, ct = math.sin(photon.Theta), math.cos(photon.Theta)
    sf, cf = math.sin(photon.Phi), math.cos(photon.Phi)
    return float(abs(ct * a - p_z * cf * st * s) ** 2 + abs(a) ** 2 + (p_z * st * sf) ** 2 * abs(s) ** 2)


def _flux_and_phase_space(beam: PositronBeam, homega: float) -> float:
    """alpha hbar c hbar omega / (2 pi beta E (E + m c^2)), in eV Angstrom / eV = Angstrom."""
    e = beam.energy
    return FINE_STRUCTURE * HBAR_C * homega / (2.0 * math.pi * beam.beta * e * (e + ELECTRON_MASS))


# -----------------------------------------------------------------------------
# Cross-sections
# -----------------------------------------------------------------------------


def dsigma_domega(
    beam: PositronBeam,
    angles: tuple[float, float],
    bs: BandStructure,
    orb: SlaterOrbital,
    i: int,
    i_n: int,
    binding: float = SI_K_BINDING,
    integrator: str = "analytic",
    form: str = "printed",
) -> CrossSectionPoint:
    """dsigma/dOmega in barn/sr for annihilation from Bloch state (i, i_n)."""
    Theta, Phi = angles
    if not 0 <= Theta <= math.pi:
        raise DomainError(f"Theta must lie in [0, pi], got {Theta}")
    homega = photon_energy(beam, bs.energy(i, i_n), binding)
    photon = PhotonKinematics(Theta, Phi, homega)
    q = momentum_transfer(beam, photon)
    io = io_assemble(orb, q, photon.kappa[0], bs, subbands=(i_n,), integrator=integrator)
    m2 = matrix_element_sq(beam, photon, bs, io, i, i_n, form=form)
    value = _flux_and_phase_space(beam, homega) * m2 * ANGSTROM2_TO_BARN
    return CrossSectionPoint(Theta, Phi, i, i_n, max(value, 0.0), homega / MEV)


def dsigma_averaged(
    beam: PositronBeam,
    angles: tuple[float, float],
    bs: BandStructure,
    orb: SlaterOrbital,
    pops: PopulationTable,
    i: int,
    **kwargs,
) -> CrossSectionPoint:
    """Population-weighted mean of dsigma/dOmega over the subbands of band i."""
    weights = pops.band(i)
    total = float(weights.sum())
    Theta, Phi = angles
    if total <= 0:
        return CrossSectionPoint(Theta, Phi, i, None, 0.0, math.nan, populated=False)

    value = 0.0
    homega = 0.0
    for i_n in np.flatnonzero(weights):
        point = dsigma_domega(beam, angles, bs, orb, i, int(i_n), **kwargs)
        value += weights[i_n] * point.dsigma_domega
        homega += weights[i_n] * point.homega
    return CrossSectionPoint(Theta, Phi, i, None, value / total, homega / total)


def dsigma_all_bands(
    beam: PositronBeam,
    angles: tuple[float, float],
    bs: BandStructure,
    orb: SlaterOrbital,
    pops: PopulationTable,
    **kwargs,
) -> CrossSectionPoint:
    """dsigma/dOmega per channeled positron: every populated (i, i_n) weighted by P[i, i_n]."""
    total = float(pops.probabilities.sum())
    Theta, Phi = angles
    if total <= 0:
        return CrossSectionPoint(Theta, Phi, None, None, 0.0, math.nan, populated=False)

    value = 0.0
    homega = 0.0
    for i, i_n in zip(*np.nonzero(pops.probabilities)):
        weight = pops.probabilities[i, i_n]
        point = dsigma_domega(beam, angles, bs, orb, int(i), int(i_n), **kwargs)
        value += weight * point.dsigma_domega
        homega += weight * point.homega
    return CrossSectionPoint(Theta, Phi, None, None, value / total, homega / total)


def maximize_over_theta(
    func,
    lo: float = THETA_SCAN_MIN,
    hi: float = THETA_SCAN_MAX,
    n_coarse: int = THETA_SCAN_POINTS,
    xtol: float = THETA_XTOL,
) -> tuple[float, float]:
    """Coarse geometric scan of func(Theta) followed by golden-section refinement."""
    grid = np.geomspace(lo, hi, n_coarse)
    values = np.array([func(t) for t in grid])
    j = int(np.argmax(values))
    if j == 0 or j == n_coarse - 1:
        logger.warning("maximum at the edge of [%.3e, %.3e] rad; distribution may be flat", lo, hi)
        return float(grid[j]), float(values[j])

    bracket = (grid[j - 1], grid[j], grid[j + 1])
    try:
        res = minimize_scalar(
            lambda t: -func(t),
            bracket=bracket,
            method="golden",
            options={"xtol": xtol / (2.0 * grid[j])},
        )
    except ValueError:
        # ties with a neighbour leave no strict bracket
        return float(grid[j]), float(values[j])
    if res.fun > -values[j] or not bracket[0] <= res.x <= bracket[2]:
        return float(grid[j]), float(values[j])
    return float(res.x), float(-res.fun)


def find_theta_max(
    beam: PositronBeam,
    bs: BandStructure,
    orb: SlaterOrbital,
    pops: PopulationTable,
    i: int,
    Phi: float = 0.0,
    **kwargs,
) -> tuple[float, float]:
    """(Theta_max, dsigma_max) of the band-averaged distribution at fixed Phi."""
    if pops.band(i).sum() <= 0:
        logger.warning("band %d has zero population at entry angle %.3e rad", i, pops.entry_angle)
        return math.nan, 0.0

    def func(theta):
        return dsigma_averaged(beam, (theta, Phi), bs, orb, pops, i, **kwargs).dsigma_domega

    theta_max, value = maximize_over_theta(func)
    logger.debug("E_par=%.1f MeV band %d: Theta_max=%.5f rad, %.4e barn/sr", beam.E_par, i, theta_max, value)
    return theta_max, value
