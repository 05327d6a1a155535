"""Angular distribution of emitted photons for one (E_par, k) and one band or all of them."""

import itertools
import math

from ..config import ALL_BANDS
from ..output import write_table
from ..scans import build_setup, entry_populations, output_path, parallel_map, solve_at
from ..xsection import PositronBeam, dsigma_all_bands, dsigma_averaged

ANGULAR_COLUMNS = ["theta_rad", "phi_rad", "dsigma_barn_sr", "homega_mev"]
SCREEN_COLUMNS = ["x_rel", "y_rel", "dsigma_barn_sr"]


def run_angular_distribution(config, json_mirror: bool = False) -> list:
    """Write angular.csv over the (Theta, Phi) grid and its screen projection screen.csv."""
    setup = build_setup(config)
    bs = solve_at(setup, config.angular_E_par)
    pops = entry_populations(setup, bs, config.angular_k)
    beam = PositronBeam(config.angular_E_par, entry_angle=pops.entry_angle)
    grid = list(itertools.product(config.theta_values, config.phi_values))

    def point(angles):
        theta, phi = float(angles[0]), float(angles[1])
        if config.angular_band == ALL_BANDS:
            return dsigma_all_bands(beam, (theta, phi), bs, setup.orbital, pops, **setup.xsection_options)
        return dsigma_averaged(beam, (theta, phi), bs, setup.orbital, pops, config.angular_band, **setup.xsection_options)

    points = parallel_map(point, grid, config.threads)
    rows = [(p.Theta, p.Phi, p.dsigma_domega, p.homega) for p in points]
    header = config.to_dict()
    written = write_table(output_path(config, "angular.csv"), ANGULAR_COLUMNS, rows, header, json_mirror)
    written += write_table(output_path(config, "screen.csv"), SCREEN_COLUMNS, screen_projection(rows, config.screen_distance), header, json_mirror)
    return written


def screen_projection(rows, distance: float) -> list:
    """Project forward directions onto a screen at `distance` perpendicular to z."""
    out = []
    for theta, phi, dsigma, _ in rows:
        if theta >= 0.5 * math.pi:
            continue
        r = distance * math.tan(theta)
        out.append((r * math.cos(phi), r * math.sin(phi), dsigma))
    return out
