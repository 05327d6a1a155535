"""Free-atom reference cross-sections for single-photon annihilation on a K-shell electron."""

import logging
from dataclasses import dataclass

import numpy as np

from .constants import ANGSTROM2_TO_BARN, BOHR_RADIUS, ELECTRON_MASS, FINE_STRUCTURE, HBAR_C
from .errors import DomainError
from .xsection import maximize_over_theta

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitResult:
    """dsigma_max = sigma0 exp(-eta gamma); sigma0 in barn/sr."""

    sigma0: float
    eta: float
    max_relative_error: float
    n_points: int


def _check(gamma, Z):
    if np.any(np.asarray(gamma) <= 1):
        raise DomainError(f"gamma must be > 1, got {gamma}")
    if Z < 1:
        raise DomainError(f"Z must be >= 1, got {Z}")


def dsigma1(gamma: float, Theta, Z: int):
    """Exact K-shell formula with plane-wave photon and Coulomb-free positron, barn/sr.

    (alpha^6 Z^5 / 2) (hbar/mc)^2 (gamma^2 - 1) sin^2 T [4 + gamma (1+gamma)(3+gamma) u]
    / (gamma^3 (1+gamma)^5 u^4), u = 1 - beta cos T.
    """
    _check(gamma, Z)
    Theta = np.asarray(Theta, dtype=float)
    beta = np.sqrt(1.0 - 1.0 / gamma**2)
    u = 1.0 - beta * np.cos(Theta)
    compton = HBAR_C / ELECTRON_MASS
    prefactor = 0.5 * FINE_STRUCTURE**6 * Z**5 * compton**2 * (gamma**2 - 1.0)
    shape = np.sin(Theta) ** 2 * (4.0 + gamma * (1.0 + gamma) * (3.0 + gamma) * u)
    return prefactor * shape / (gamma**3 * (1.0 + gamma) ** 5 * u**4) * ANGSTROM2_TO_BARN


def dsigmaB(gamma: float, Theta, Z: int):
    """Born approximation, barn/sr.

    32 pi a_B^2 Z^5 (gamma^2 - 1) sin^2 T / (gamma B^4),
    B = 2 (gamma + 1)(gamma - sqrt(gamma^2 - 1) cos T) / alpha^2 + Z^2.
    """
    _check(gamma, Z)
    Theta = np.asarray(Theta, dtype=float)
    b = 2.0 * (gamma + 1.0) * (gamma - np.sqrt(gamma**2 - 1.0) * np.cos(Theta)) / FINE_STRUCTURE**2 + Z**2
    value = 32.0 * np.pi * BOHR_RADIUS**2 * Z**5 * (gamma**2 - 1.0) * np.sin(Theta) ** 2 / (gamma * b**4)
    return value * ANGSTROM2_TO_BARN


def theta_max(formula, gamma: float, Z: int) -> tuple[float, float]:
    """(Theta_max, max) of dsigma1 or dsigmaB at fixed gamma."""
    return maximize_over_theta(lambda t: float(formula(gamma, t, Z)))


def fit_exponential(points) -> FitResult:
    """Least-squares fit of ln(dsigma_max) = ln(sigma0) - eta gamma over (gamma, dsigma_max) pairs."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    gamma, y = points[:, 0], points[:, 1]
    if len(np.unique(gamma)) < 2:
        raise DomainError(f"need at least two distinct gamma values, got {len(np.unique(gamma))}")
    if np.any(~np.isfinite(y)) or np.any(y <= 0):
        raise DomainError("dsigma_max values must be positive and finite")
    slope, intercept = np.polyfit(gamma, np.log(y), 1)
    fitted = np.exp(intercept + slope * gamma)
    max_err = float(np.max(np.abs(fitted - y) / y))
    logger.debug("exponential fit over %d points: eta=%.5f, max rel. error %.3f", len(y), -slope, max_err)
    return FitResult(sigma0=float(np.exp(intercept)), eta=float(-slope), max_relative_error=max_err, n_points=len(y))
