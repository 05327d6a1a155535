"""Si(110) geometry and the continuum planar potential seen by a channeled positron."""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .constants import (
    BOHR_RADIUS,
    E_SQUARED,
    ELECTRON_MASS,
    MOLIERE_ALPHAS,
    MOLIERE_BETAS,
    THOMAS_FERMI_COEFFICIENT,
)
from .errors import DomainError, IntegrationError, PreconditionError

logger = logging.getLogger(__name__)

SI_LATTICE_CONSTANT = 5.431
SI_Z = 14
DEFAULT_PLANE_IMAGES = 5


# -----------------------------------------------------------------------------
# Types
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class CrystalPlane:
    """A family of identical atomic planes, all lengths in Angstrom."""

    lattice_constant: float
    interplanar_distance: float
    Z: int
    planar_atom_density: float
    screening_radius: float
    plane_images: int = DEFAULT_PLANE_IMAGES

    def __post_init__(self):
        if self.interplanar_distance <= 0:
            raise DomainError(f"interplanar distance must be positive, got {self.interplanar_distance}")
        if self.Z < 1:
            raise DomainError(f"Z must be >= 1, got {self.Z}")
        if self.planar_atom_density <= 0:
            raise DomainError(f"planar atom density must be positive, got {self.planar_atom_density}")
        if self.plane_images < 1:
            raise DomainError(f"plane_images must be >= 1, got {self.plane_images}")

    @property
    def d(self) -> float:
        return self.interplanar_distance


@dataclass(frozen=True, eq=False)
class PlanarPotential:
    """Fourier coefficients V_m (eV) for m in [-M_pot, M_pot], stored at index m + M_pot."""

    fourier_coeffs: np.ndarray
    well_depth: float
    d: float

    @property
    def M_pot(self) -> int:
        return (len(self.fourier_coeffs) - 1) // 2

    def coefficient(self, m):
        """V_m, zero beyond the stored cutoff. Accepts integer arrays."""
        m = np.asarray(m)
        inside = np.abs(m) <= self.M_pot
        idx = np.where(inside, m + self.M_pot, 0)
        return np.where(inside, self.fourier_coeffs[idx], 0.0)

    def evaluate(self, x):
        """Real-space reconstruction sum_m V_m exp(i 2 pi m x / d)."""
        x = np.asarray(x, dtype=float)
        m = np.arange(-self.M_pot, self.M_pot + 1)
        phase = np.exp(2j * np.pi * np.multiply.outer(x, m) / self.d)
        return (phase @ self.fourier_coeffs).real


# -----------------------------------------------------------------------------
# Presets
# -----------------------------------------------------------------------------


def si110_preset(lattice_constant: float = SI_LATTICE_CONSTANT, plane_images: int = DEFAULT_PLANE_IMAGES) -> CrystalPlane:
    """Si(110) planes of the diamond lattice."""
    return diamond110_plane(lattice_constant, SI_Z, plane_images)


def diamond110_plane(lattice_constant: float, Z: int, plane_images: int = DEFAULT_PLANE_IMAGES) -> CrystalPlane:
    """(110) planes of a diamond-structure crystal: 8 atoms per conventional cell."""
    if lattice_constant <= 0:
        raise DomainError(f"lattice constant must be positive, got {lattice_constant}")
    d = lattice_constant / (2.0 * math.sqrt(2.0))
    return CrystalPlane(
        lattice_constant=lattice_constant,
        interplanar_distance=d,
        Z=Z,
        planar_atom_density=8.0 * d / lattice_constant**3,
        screening_radius=THOMAS_FERMI_COEFFICIENT * BOHR_RADIUS * Z ** (-1.0 / 3.0),
        plane_images=plane_images,
    )


# -----------------------------------------------------------------------------
# Continuum potential
# -----------------------------------------------------------------------------


def _single_plane(plane: CrystalPlane, y):
    """Moliere potential of one plane at distance |y|, unshifted."""
    a = plane.screening_radius
    strength = 2.0 * np.pi * plane.Z * E_SQUARED * plane.planar_atom_density * a
    y = np.abs(y)
    return strength * sum(alpha / beta * np.exp(-beta * y / a) for alpha, beta in zip(MOLIERE_ALPHAS, MOLIERE_BETAS))


def _image_sum(plane: CrystalPlane, x):
    d = plane.d
    x = np.mod(np.asarray(x, dtype=float), d)
    n = np.arange(-plane.plane_images, plane.plane_images + 2)
    return _single_plane(plane, np.subtract.outer(x, n * d)).sum(axis=-1)


def moliere_potential(plane: CrystalPlane, x):
    """Continuum planar potential V(x) in eV, zero at the channel centre x = d/2.

    Planes sit at x = n*d. The image set is symmetric about the cell of x,
    so V is periodic and mirror symmetric by construction.
    """
    return _image_sum(plane, x) - _image_sum(plane, 0.5 * plane.d)


def well_depth(plane: CrystalPlane) -> float:
    """Barrier height V_max: the potential at the plane relative to the channel centre."""
    return float(moliere_potential(plane, 0.0))


@lru_cache(maxsize=32)
def fourier_coefficients(plane: CrystalPlane, M_pot: int) -> PlanarPotential:
    """V_m = (1/d) int_0^d V(x) exp(-i 2 pi m x/d) dx by adaptive quadrature."""
    if M_pot < 10:
        raise PreconditionError(f"M_pot must be >= 10, got {M_pot}")
    d = plane.d
    coeffs = np.empty(2 * M_pot + 1)

    def potential(x):
        return float(moliere_potential(plane, x))

    def odd_part(x):
        return float(moliere_potential(plane, x) - moliere_potential(plane, d - x))

    for m in range(M_pot + 1):
        g = 2.0 * np.pi * m / d
        if m == 0:
            real = _checked_quad(potential, 0.0, d, m)
            imag = 0.0
        else:
            real = _checked_quad(potential, 0.0, d, m, weight="cos", wvar=g)
            imag = -_checked_quad(odd_part, 0.0, 0.5 * d, m, weight="sin", wvar=g)
        real /= d
        imag /= d
        if abs(imag) > 1e-10:
            raise IntegrationError(f"V_{m} has imaginary part {imag:.3e} eV; potential is not even")
        coeffs[M_pot + m] = real
        coeffs[M_pot - m] = real

    logger.debug("Fourier coefficients up to M_pot=%d, |V_M_pot|=%.3e eV", M_pot, abs(coeffs[-1]))
    return PlanarPotential(fourier_coeffs=coeffs, well_depth=well_depth(plane), d=d)


def _checked_quad(func, a, b, m, **kwargs) -> float:
    out = quad(func, a, b, epsabs=1e-9, epsrel=1e-10, limit=400, full_output=1, **kwargs)
    if len(out) > 3:
        info = out[2]
        raise IntegrationError(f"Fourier coefficient m={m}: {out[3]}", info.get("last"))
    return out[0]


# -----------------------------------------------------------------------------
# Channeling angle
# -----------------------------------------------------------------------------


def lindhard_angle(v_max: float, gamma: float) -> float:
    """theta_C = sqrt(2 V_max / (gamma m c^2 beta^2))."""
    if gamma <= 1:
        raise DomainError(f"gamma must be > 1, got {gamma}")
    beta2 = 1.0 - 1.0 / gamma**2
    return math.sqrt(2.0 * v_max / (gamma * ELECTRON_MASS * beta2))


def critical_angle(plane: CrystalPlane, gamma: float) -> float:
    """Lindhard critical angle in rad for a positron with Lorentz factor gamma."""
    return lindhard_angle(well_depth(plane), gamma)
