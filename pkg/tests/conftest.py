import pytest

from spa_channeling.bands import solve_bands
from spa_channeling.constants import ELECTRON_MASS, MEV
from spa_channeling.crystal import fourier_coefficients, si110_preset
from spa_channeling.kshell import load_slater_params

GAMMA_60 = 60.0 * MEV / ELECTRON_MASS


@pytest.fixture(scope="session")
def plane():
    return si110_preset()


@pytest.fixture(scope="session")
def potential(plane):
    return fourier_coefficients(plane, 40)


@pytest.fixture(scope="session")
def bs60(potential):
    return solve_bands(potential, GAMMA_60, n_sub=10, M=12)


@pytest.fixture(scope="session")
def orbital():
    return load_slater_params()


@pytest.fixture
def write_slater(tmp_path):
    """Write a Slater parameter file and return its path."""

    def write(text: str, name: str = "orbital.slater"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write
