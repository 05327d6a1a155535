"""Physical constants in the internal unit system (eV, Angstrom)."""

from scipy.constants import physical_constants

# -----------------------------------------------------------------------------
# CODATA
# -----------------------------------------------------------------------------

# 197.3269804 MeV fm -> eV Angstrom
HBAR_C = physical_constants["reduced Planck constant times c in MeV fm"][0] * 10.0
ELECTRON_MASS = physical_constants["electron mass energy equivalent in MeV"][0] * 1e6
FINE_STRUCTURE = physical_constants["fine-structure constant"][0]
BOHR_RADIUS = physical_constants["Bohr radius"][0] * 1e10
HBAR_EV_S = physical_constants["reduced Planck constant in eV s"][0]

# Gaussian units: e^2 = alpha * hbar * c
E_SQUARED = FINE_STRUCTURE * HBAR_C

# hbar^2 / (2 m_e) in eV Angstrom^2
HBAR2_OVER_2M = HBAR_C**2 / (2.0 * ELECTRON_MASS)

# -----------------------------------------------------------------------------
# Conversions
# -----------------------------------------------------------------------------

ANGSTROM2_TO_BARN = 1e8
MEV = 1e6

# -----------------------------------------------------------------------------
# Screening
# -----------------------------------------------------------------------------

THOMAS_FERMI_COEFFICIENT = 0.8853
MOLIERE_ALPHAS = (0.1, 0.55, 0.35)
MOLIERE_BETAS = (6.0, 1.2, 0.3)
