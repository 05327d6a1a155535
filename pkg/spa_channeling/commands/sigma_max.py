"""dsigma_max(E_par) curves per entry angle and band, with exponential fits."""

import itertools
import logging
import math

import numpy as np

from ..atomref import fit_exponential
from ..bands import count_subbarrier_bands
from ..output import write_table
from ..scans import build_setup, entry_populations, gamma_of, output_path, parallel_map, solve_at
from ..xsection import PositronBeam, find_theta_max

logger = logging.getLogger(__name__)

SIGMA_MAX_COLUMNS = ["E_par_mev", "k", "band_i", "theta_max_rad", "dsigma_max_barn_sr", "n_subbarrier_bands"]
FIT_COLUMNS = ["k", "band_i", "sigma0_barn_sr", "eta", "max_relative_error", "n_points"]


def run_sigma_max_scan(config, json_mirror: bool = False) -> list:
    """Write sigma_max.csv (one row per E, k, i) and fit.csv (one row per k, i)."""
    setup = build_setup(config)
    energies = [float(e) for e in config.E_par_values]
    structures = parallel_map(lambda e: solve_at(setup, e), energies, config.threads)
    counts = [count_subbarrier_bands(bs) for bs in structures]

    tasks = list(itertools.product(range(len(energies)), config.k, config.bands))

    def task(item):
        e_idx, k, band = item
        bs = structures[e_idx]
        pops = entry_populations(setup, bs, float(k))
        beam = PositronBeam(energies[e_idx], entry_angle=pops.entry_angle)
        return find_theta_max(beam, bs, setup.orbital, pops, band, Phi=config.Phi_fixed, **setup.xsection_options)

    results = parallel_map(task, tasks, config.threads)
    rows = [
        (energies[e_idx], float(k), band, theta, dsigma, counts[e_idx])
        for (e_idx, k, band), (theta, dsigma) in zip(tasks, results)
    ]

    header = config.to_dict()
    written = write_table(output_path(config, "sigma_max.csv"), SIGMA_MAX_COLUMNS, rows, header, json_mirror)
    written += write_table(output_path(config, "fit.csv"), FIT_COLUMNS, fit_rows(rows, config), header, json_mirror)
    return written


def fit_rows(rows, config) -> list:
    """Exponential fit of dsigma_max against gamma for every (k, band) curve."""
    out = []
    for k, band in itertools.product(config.k, config.bands):
        points = [
            (gamma_of(e), dsigma)
            for e, kk, b, _, dsigma, _ in rows
            if kk == float(k) and b == band and np.isfinite(dsigma) and dsigma > 0
        ]
        if len({g for g, _ in points}) < 2:
            logger.warning("k=%s band %d: fewer than two positive points, no fit", k, band)
            out.append((float(k), band, math.nan, math.nan, math.nan, len(points)))
            continue
        fit = fit_exponential(points)
        out.append((float(k), band, fit.sigma0, fit.eta, fit.max_relative_error, fit.n_points))
    return out
