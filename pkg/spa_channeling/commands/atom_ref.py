"""Free-atom reference curves dsigma1_max(gamma) and dsigmaB_max(gamma)."""

from ..atomref import dsigma1, dsigmaB, theta_max
from ..output import write_table
from ..scans import output_path, parallel_map

ATOM_REF_COLUMNS = ["gamma", "theta_max_rad", "dsigma1_max_barn_sr", "dsigmaB_max_barn_sr"]


def run_atom_reference(config, json_mirror: bool = False) -> list:
    def row(gamma):
        gamma = float(gamma)
        theta1, max1 = theta_max(dsigma1, gamma, config.Z)
        _, max_b = theta_max(dsigmaB, gamma, config.Z)
        return gamma, theta1, max1, max_b

    rows = parallel_map(row, config.gamma_values, config.threads)
    return write_table(output_path(config, "atom_ref.csv"), ATOM_REF_COLUMNS, rows, config.to_dict(), json_mirror)
