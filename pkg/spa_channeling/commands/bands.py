"""Band-diagram dump at the angular-distribution energy."""

import logging

from ..bands import count_subbarrier_bands, harmonic_ground_energy
from ..output import write_table
from ..scans import build_setup, output_path, solve_at

logger = logging.getLogger(__name__)

BANDS_COLUMNS = ["i", "i_n", "k_inv_angstrom", "E_perp_eV", "subbarrier_flag"]


def run_band_dump(config, json_mirror: bool = False) -> list:
    setup = build_setup(config)
    bs = solve_at(setup, config.angular_E_par)
    logger.info(
        "%d sub-barrier bands below %.2f eV; harmonic ground level %.3f eV",
        count_subbarrier_bands(bs),
        bs.barrier_top,
        harmonic_ground_energy(setup.plane, bs.gamma),
    )
    rows = [
        (i, i_n, float(bs.k[i_n]), bs.energy(i, i_n), int(bs.subbarrier[i]))
        for i in range(bs.n_bands)
        for i_n in range(bs.n_sub)
    ]
    return write_table(output_path(config, "bands.csv"), BANDS_COLUMNS, rows, config.to_dict(), json_mirror)
