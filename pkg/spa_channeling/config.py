"""Configuration defaults and the resolved scan configuration."""

import logging
import math
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError
from .integrals import INTEGRATORS
from .xsection import MATRIX_ELEMENT_FORMS

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "SPA_CHANNELING_CONFIG"
DEFAULT_CONFIG_FILE = Path(__file__).parent.parent / "spa-channeling.yaml"
ALL_BANDS = "all"

# Si(110), 50-100 MeV, ten subbands per band, Phi = 0
DEFAULTS = {
    "E_par_range": {"min": 50.0, "max": 100.0, "steps": 6},
    "k": [0.0, 0.118, 0.236, 0.354, 0.471, 0.589, 0.707, 0.825],
    "bands": [0, 1, 2],
    "Phi_fixed": 0.0,
    "Theta_grid": [0.0, 0.05, 101],
    "Phi_grid": [0.0, 2.0 * math.pi, 73],
    "angular_E_par": 60.0,
    "angular_k": 0.5,
    "angular_band": 1,
    "gamma_range": {"min": 100.0, "max": 200.0, "steps": 11},
    "n_sub": 10,
    "M": 20,
    "M_pot": 40,
    "n_bands": None,
    "lattice_constant_angstrom": 5.431,
    "Z": 14,
    "plane_images": 5,
    "binding_kev": 1.839,
    "slater_file": None,
    "integrator": "analytic",
    "matrix_element_form": "printed",
    "divergence": 0.0,
    "screen_distance": 5.0,
    "threads": 1,
    "output_dir": "output",
}


@dataclass(frozen=True)
class ScanConfig:
    E_par_range: list | dict
    k: list
    bands: list
    Phi_fixed: float
    Theta_grid: list | dict
    Phi_grid: list | dict
    angular_E_par: float
    angular_k: float
    angular_band: int | str
    gamma_range: list | dict
    n_sub: int
    M: int
    M_pot: int
    n_bands: int | None
    lattice_constant_angstrom: float
    Z: int
    plane_images: int
    binding_kev: float
    slater_file: str | None
    integrator: str
    matrix_element_form: str
    divergence: float
    screen_distance: float
    threads: int
    output_dir: str

    # -------------------------------------------------------------------------
    # Derived grids
    # -------------------------------------------------------------------------

    @property
    def E_par_values(self) -> np.ndarray:
        return _values("E_par_range", self.E_par_range)

    @property
    def gamma_values(self) -> np.ndarray:
        return _values("gamma_range", self.gamma_range)

    @property
    def theta_values(self) -> np.ndarray:
        return _grid("Theta_grid", self.Theta_grid)

    @property
    def phi_values(self) -> np.ndarray:
        return _grid("Phi_grid", self.Phi_grid)

    @property
    def band_count(self) -> int:
        """Bands the solver keeps: n_bands, or all 2M+1 when unset."""
        return self.n_bands if self.n_bands is not None else 2 * self.M + 1

    @property
    def binding(self) -> float:
        """K-shell binding energy in eV."""
        return self.binding_kev * 1e3

    def to_dict(self) -> dict:
        return asdict(self)

    # -------------------------------------------------------------------------
    # Validation
    # -------------------------------------------------------------------------

    def validate(self) -> "ScanConfig":
        for name in ("E_par_values", "gamma_values", "theta_values", "phi_values"):
            getattr(self, name)
        if np.any(self.E_par_values <= 0.511):
            raise ConfigError("E_par_range: energies must exceed the positron rest energy (MeV)")
        if np.any(self.gamma_values <= 1):
            raise ConfigError("gamma_range: values must be > 1")
        if self.theta_values.min() < 0 or self.theta_values.max() > math.pi:
            raise ConfigError("Theta_grid: angles must lie in [0, pi]")
        if not self.k:
            raise ConfigError("k: list must not be empty")
        if any(_number("k", v) < 0 for v in self.k):
            raise ConfigError("k: values must be >= 0")
        if _number("angular_k", self.angular_k) < 0:
            raise ConfigError("angular_k: must be >= 0")
        for name in ("n_sub", "M", "M_pot", "Z", "plane_images", "threads"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name}: must be a positive integer, got {value!r}")
        if self.n_bands is not None and (not isinstance(self.n_bands, int) or self.n_bands < 1):
            raise ConfigError(f"n_bands: must be a positive integer or null, got {self.n_bands!r}")
        if self.n_bands is not None and self.n_bands > 2 * self.M + 1:
            raise ConfigError(f"n_bands: M={self.M} gives only {2 * self.M + 1} bands, got {self.n_bands}")
        count = self.band_count
        if not self.bands or any(not isinstance(b, int) or not 0 <= b < count for b in self.bands):
            raise ConfigError(f"bands: need a non-empty list of band indices in 0..{count - 1}")
        if self.angular_band != ALL_BANDS and (not isinstance(self.angular_band, int) or not 0 <= self.angular_band < count):
            raise ConfigError(f"angular_band: must be {ALL_BANDS!r} or an integer in 0..{count - 1}, got {self.angular_band!r}")
        if self.integrator not in INTEGRATORS:
            raise ConfigError(f"integrator: expected one of {INTEGRATORS}, got {self.integrator!r}")
        if self.matrix_element_form not in MATRIX_ELEMENT_FORMS:
            raise ConfigError(f"matrix_element_form: expected one of {MATRIX_ELEMENT_FORMS}, got {self.matrix_element_form!r}")
        for name in ("binding_kev", "divergence", "lattice_constant_angstrom", "screen_distance", "angular_E_par"):
            if _number(name, getattr(self, name)) < 0:
                raise ConfigError(f"{name}: must be >= 0")
        return self


def _number(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    return float(value)


def _grid(name: str, spec) -> np.ndarray:
    """(min, max, steps) as a list or a mapping."""
    if isinstance(spec, dict):
        if set(spec) != {"min", "max", "steps"}:
            raise ConfigError(f"{name}: mapping needs exactly min, max, steps")
        spec = [spec["min"], spec["max"], spec["steps"]]
    if not isinstance(spec, list) or len(spec) != 3:
        raise ConfigError(f"{name}: expected [min, max, steps], got {spec!r}")
    lo, hi = _number(name, spec[0]), _number(name, spec[1])
    steps = spec[2]
    if not isinstance(steps, int) or steps < 2:
        raise ConfigError(f"{name}: steps must be an integer >= 2, got {steps!r}")
    if hi <= lo:
        raise ConfigError(f"{name}: max must exceed min")
    return np.linspace(lo, hi, steps)


def _values(name: str, spec) -> np.ndarray:
    """An explicit list of values, or a {min, max, steps} mapping."""
    if isinstance(spec, dict):
        return _grid(name, spec)
    if not isinstance(spec, list) or not spec:
        raise ConfigError(f"{name}: expected a non-empty list or a {{min, max, steps}} mapping")
    return np.array([_number(name, v) for v in spec])


def _read_file(path: Path) -> dict:
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping of config keys")
    return data


def _merge(target: dict, updates: dict, source: str):
    unknown = sorted(set(updates) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"{source}: unknown config key(s) {', '.join(unknown)}")
    target.update(updates)


def config_path(path: str | Path | None = None) -> Path | None:
    """--config, else $SPA_CHANNELING_CONFIG, else the repository default file if present."""
    if path:
        return Path(path)
    env = os.environ.get(CONFIG_ENV_VAR)
    if env:
        return Path(env)
    return DEFAULT_CONFIG_FILE if DEFAULT_CONFIG_FILE.exists() else None


def load_config(path: str | Path | None = None, overrides: dict[str, str] | None = None) -> ScanConfig:
    """Defaults < config file < --key=value overrides (values parsed as YAML)."""
    data = dict(DEFAULTS)
    resolved = config_path(path)
    if resolved is not None:
        _merge(data, _read_file(resolved), str(resolved))
        logger.info("config loaded from %s", resolved)

    parsed = {}
    for key, raw in (overrides or {}).items():
        try:
            parsed[key] = yaml.safe_load(raw) if isinstance(raw, str) else raw
        except yaml.YAMLError as e:
            raise ConfigError(f"--{key}: cannot parse {raw!r}: {e}") from e
    _merge(data, parsed, "command line")

    names = {f.name for f in fields(ScanConfig)}
    return ScanConfig(**{k: v for k, v in data.items() if k in names}).validate()
