"""Transverse Bloch bands of a channeled positron and their entry-angle populations.

The transverse motion obeys a Schroedinger-like equation with the relativistic
mass gamma*m in the periodic planar potential. Each band is sampled at n_sub
quasimomenta k = pi*i_n/(n_sub*d), i_n = 0..n_sub-1, and expanded in plane
waves exp(i G x) with G = k + 2*pi*m/d, |m| <= M.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg
from numpy.polynomial.hermite_e import hermegauss

from .constants import ELECTRON_MASS, HBAR2_OVER_2M, HBAR_C
from .crystal import CrystalPlane, PlanarPotential, lindhard_angle, moliere_potential
from .errors import DomainError, EigenSolverError, PreconditionError

logger = logging.getLogger(__name__)

DEFAULT_N_SUB = 10
DEFAULT_M = 20
DIVERGENCE_NODES = 9
# populations below this are roundoff from symmetry-forbidden projections
POPULATION_FLOOR = 1e-15


# -----------------------------------------------------------------------------
# Types
# -----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BlochState:
    band_index: int
    subband_index: int
    k: float
    energy: float
    coeffs: np.ndarray


@dataclass(frozen=True, eq=False)
class BandStructure:
    """Lowest n_bands eigenpairs at every sampled quasimomentum.

    energies has shape (n_sub, n_bands); coeffs has shape (n_sub, n_bands, 2M+1)
    with the plane-wave index m stored at position m + M.
    """

    energies: np.ndarray
    coeffs: np.ndarray
    k: np.ndarray
    gamma: float
    n_sub: int
    M: int
    d: float
    barrier_top: float
    potential: PlanarPotential

    @property
    def n_bands(self) -> int:
        return self.energies.shape[1]

    @property
    def m(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    def energy(self, i: int, i_n: int) -> float:
        return float(self.energies[i_n, i])

    def coefficients(self, i: int, i_n: int) -> np.ndarray:
        return self.coeffs[i_n, i]

    def g_vectors(self, i_n: int) -> np.ndarray:
        """G_{m,i_n} = 2 pi m/d + pi i_n/(n_sub d) for all m."""
        return self.k[i_n] + 2.0 * np.pi * self.m / self.d

    @cached_property
    def subbarrier(self) -> np.ndarray:
        """Per band: True when the whole band lies below the barrier top."""
        return self.energies.max(axis=0) < self.barrier_top

    @property
    def states(self) -> list[BlochState]:
        return [
            BlochState(i, i_n, float(self.k[i_n]), self.energy(i, i_n), self.coefficients(i, i_n))
            for i in range(self.n_bands)
            for i_n in range(self.n_sub)
        ]

    def hamiltonian(self, i_n: int) -> np.ndarray:
        return central_equation_matrix(self.potential, self.gamma, float(self.k[i_n]), self.M)


@dataclass(frozen=True, eq=False)
class PopulationTable:
    """Initial populations P[i, i_n] of the sub-barrier states for one entry angle."""

    entry_angle: float
    probabilities: np.ndarray
    over_barrier: float

    def band(self, i: int) -> np.ndarray:
        if not 0 <= i < self.probabilities.shape[0]:
            raise PreconditionError(f"band index {i} outside 0..{self.probabilities.shape[0] - 1}")
        return self.probabilities[i]


# -----------------------------------------------------------------------------
# Band solver
# -----------------------------------------------------------------------------


def central_equation_matrix(potential: PlanarPotential, gamma: float, k: float, M: int) -> np.ndarray:
    """H_{mm'} = hbar^2 (k + 2 pi m/d)^2 / (2 gamma m_e) delta_{mm'} + V_{m-m'}."""
    m = np.arange(-M, M + 1)
    kinetic = HBAR2_OVER_2M / gamma * (k + 2.0 * np.pi * m / potential.d) ** 2
    h = potential.coefficient(np.subtract.outer(m, m)).astype(complex)
    h[np.diag_indices_from(h)] += kinetic
    return h


def solve_bands(
    potential: PlanarPotential,
    gamma: float,
    n_sub: int = DEFAULT_N_SUB,
    M: int = DEFAULT_M,
    n_bands: int | None = None,
) -> BandStructure:
    """Diagonalize the central equation at every subband quasimomentum."""
    if gamma <= 1:
        raise DomainError(f"gamma must be > 1, got {gamma}")
    if n_sub < 1:
        raise PreconditionError(f"n_sub must be >= 1, got {n_sub}")
    if M < 1:
        raise PreconditionError(f"M must be >= 1, got {M}")
    size = 2 * M + 1
    n_bands = size if n_bands is None else n_bands
    if not 1 <= n_bands <= size:
        raise PreconditionError(f"M={M} gives {size} plane waves, cannot return n_bands={n_bands}")
    if M < 10:
        logger.warning("plane-wave cutoff M=%d is below the recommended 10", M)
    if potential.M_pot < 2 * M:
        logger.debug("V_m beyond M_pot=%d treated as zero for M=%d", potential.M_pot, M)

    d = potential.d
    k = np.pi * np.arange(n_sub) / (n_sub * d)
    energies = np.empty((n_sub, n_bands))
    coeffs = np.empty((n_sub, n_bands, size), dtype=complex)

    for i_n in range(n_sub):
        h = central_equation_matrix(potential, gamma, float(k[i_n]), M)
        try:
            w, v = scipy.linalg.eigh(h, subset_by_index=[0, n_bands - 1])
        except (np.linalg.LinAlgError, ValueError) as e:
            raise EigenSolverError(f"eigensolver failed at subband {i_n}: {e}") from e
        energies[i_n] = w
        coeffs[i_n] = _fix_gauge(v.T)

    return BandStructure(
        energies=energies,
        coeffs=coeffs,
        k=k,
        gamma=gamma,
        n_sub=n_sub,
        M=M,
        d=d,
        barrier_top=potential.well_depth,
        potential=potential,
    )


def _fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Rotate each row so its largest-magnitude coefficient is real and positive."""
    idx = np.argmax(np.abs(vectors), axis=1)
    pivot = vectors[np.arange(len(vectors)), idx]
    return vectors * (np.abs(pivot) / pivot)[:, None]


def count_subbarrier_bands(bs: BandStructure) -> int:
    """Number of bands lying entirely below the barrier top."""
    count = int(np.count_nonzero(bs.subbarrier))
    if count == bs.n_bands and count > 0:
        logger.warning("all %d computed bands are sub-barrier; raise n_bands to count them all", count)
    return count


def harmonic_ground_energy(plane: CrystalPlane, gamma: float, step: float = 1e-3) -> float:
    """hbar*omega/2 of the quadratic fit to the well bottom, in eV above the minimum."""
    centre = 0.5 * plane.d
    v = moliere_potential(plane, np.array([centre - step, centre, centre + step]))
    curvature = (v[0] - 2.0 * v[1] + v[2]) / step**2
    return 0.5 * HBAR_C * math.sqrt(curvature / (gamma * ELECTRON_MASS))


# -----------------------------------------------------------------------------
# Populations
# -----------------------------------------------------------------------------


def fold_quasimomentum(k_perp: float, d: float, n_sub: int) -> tuple[int, int]:
    """Map a transverse wavevector onto (nearest sampled subband, plane-wave index).

    Negative reduced quasimomenta use the parity image k -> -k, m -> -m of the
    even potential, since only [0, pi/d) is sampled.
    """
    g = 2.0 * np.pi / d
    m = math.floor(k_perp / g + 0.5)
    reduced = k_perp - m * g
    if reduced < 0:
        reduced, m = -reduced, -m
    i_n = min(math.floor(reduced * n_sub * d / np.pi + 0.5), n_sub - 1)
    return i_n, m


def populations(bs: BandStructure, theta: float, gamma: float, divergence: float = 0.0) -> PopulationTable:
    """Project the incident plane wave onto the sub-barrier Bloch states.

    The incident transverse wave exp(i k_perp x), k_perp = gamma m v theta / hbar,
    is matched to the nearest sampled quasimomentum; band i is populated with
    |X_{i,i_n*,m*}|^2 at that subband only. A nonzero rms divergence averages
    this rule over a Gaussian spread of entry angles.
    """
    if theta < 0:
        raise DomainError(f"entry angle must be >= 0, got {theta}")
    if divergence < 0:
        raise DomainError(f"divergence must be >= 0, got {divergence}")
    if bs.barrier_top > 0 and theta > lindhard_angle(bs.barrier_top, gamma):
        logger.warning("entry angle %.3e rad exceeds the critical angle; over-barrier states dominate", theta)

    momentum = ELECTRON_MASS * math.sqrt(gamma**2 - 1.0)
    if divergence > 0:
        nodes, weights = hermegauss(DIVERGENCE_NODES)
        angles = theta + divergence * nodes
        weights = weights / weights.sum()
    else:
        angles, weights = np.array([theta]), np.array([1.0])

    probabilities = np.zeros((bs.n_bands, bs.n_sub))
    for angle, weight in zip(angles, weights):
        i_n, m = fold_quasimomentum(momentum * angle / HBAR_C, bs.d, bs.n_sub)
        if abs(m) <= bs.M:
            probabilities[:, i_n] += weight * np.abs(bs.coeffs[i_n, :, m + bs.M]) ** 2

    probabilities[~bs.subbarrier] = 0.0
    probabilities[probabilities < POPULATION_FLOOR] = 0.0
    over_barrier = 1.0 - probabilities.sum()
    logger.debug("theta=%.3e rad: sub-barrier population %.4f", theta, 1.0 - over_barrier)
    return PopulationTable(entry_angle=theta, probabilities=probabilities, over_barrier=over_barrier)
