"""Shared pipeline pieces for the scan commands."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .bands import BandStructure, PopulationTable, populations, solve_bands
from .config import ScanConfig
from .constants import ELECTRON_MASS, MEV
from .crystal import CrystalPlane, PlanarPotential, diamond110_plane, fourier_coefficients, lindhard_angle
from .kshell import DEFAULT_SLATER_FILE, SlaterOrbital, load_slater_params

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Setup:
    """Everything a scan needs that does not depend on the beam energy."""

    config: ScanConfig
    plane: CrystalPlane
    potential: PlanarPotential
    orbital: SlaterOrbital

    @property
    def xsection_options(self) -> dict:
        return {
            "binding": self.config.binding,
            "integrator": self.config.integrator,
            "form": self.config.matrix_element_form,
        }


def build_setup(config: ScanConfig) -> Setup:
    plane = diamond110_plane(config.lattice_constant_angstrom, config.Z, config.plane_images)
    potential = fourier_coefficients(plane, config.M_pot)
    orbital = load_slater_params(config.slater_file or DEFAULT_SLATER_FILE)
    logger.info("d=%.4f A, well depth %.2f eV, %d Slater term(s)", plane.d, potential.well_depth, len(orbital.terms))
    return Setup(config=config, plane=plane, potential=potential, orbital=orbital)


def gamma_of(E_par: float) -> float:
    return E_par * MEV / ELECTRON_MASS


def solve_at(setup: Setup, E_par: float) -> BandStructure:
    c = setup.config
    bs = solve_bands(setup.potential, gamma_of(E_par), n_sub=c.n_sub, M=c.M, n_bands=c.n_bands)
    logger.info("E_par=%.2f MeV: bands solved", E_par)
    return bs


def entry_populations(setup: Setup, bs: BandStructure, k: float) -> PopulationTable:
    """Populations at entry angle k * theta_C, with the configured divergence in units of theta_C."""
    theta_c = lindhard_angle(bs.barrier_top, bs.gamma)
    return populations(bs, k * theta_c, bs.gamma, divergence=setup.config.divergence * theta_c)


def parallel_map(func, items, threads: int) -> list:
    """Results in input order regardless of completion order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def output_path(config: ScanConfig, name: str) -> Path:
    return Path(config.output_dir) / name
