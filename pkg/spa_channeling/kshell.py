"""K-shell electron wavefunction as a Slater-type-orbital expansion."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import BOHR_RADIUS
from .errors import DataError, DomainError, ParseError

logger = logging.getLogger(__name__)

DEFAULT_SLATER_FILE = Path(__file__).parent / "data" / "si_1s.slater"
MAX_NLAMBDA = 7
NORMALIZATION_TOLERANCE = 0.01


@dataclass(frozen=True)
class SlaterTerm:
    C: float
    nlambda: int
    zeta_per_bohr: float

    @property
    def zeta(self) -> float:
        """Exponent in inverse Angstrom."""
        return self.zeta_per_bohr / BOHR_RADIUS

    @property
    def norm(self) -> float:
        """(2 zeta)^{3/2} / sqrt((2 nlambda)!) in Angstrom^{-3/2}."""
        return (2.0 * self.zeta) ** 1.5 / math.sqrt(math.factorial(2 * self.nlambda))


@dataclass(frozen=True)
class SlaterOrbital:
    terms: tuple[SlaterTerm, ...]
    Z: int | None = None

    def __post_init__(self):
        if not self.terms:
            raise DataError("Slater orbital needs at least one term")
        for term in self.terms:
            if term.zeta_per_bohr <= 0:
                raise DataError(f"zeta must be positive, got {term.zeta_per_bohr}")
            if not 1 <= term.nlambda <= MAX_NLAMBDA:
                raise DataError(f"nlambda must be in [1, {MAX_NLAMBDA}], got {term.nlambda}")


def load_slater_params(path: str | Path = DEFAULT_SLATER_FILE) -> SlaterOrbital:
    """Read `C nlambda zeta_per_bohr` lines; `#` starts a comment, `Z <int>` sets the atom."""
    path = Path(path)
    terms = []
    Z = None
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "Z":
            if len(fields) != 2 or not fields[1].isdigit():
                raise ParseError(f"expected 'Z <int>', got {raw.strip()!r}", path, lineno)
            Z = int(fields[1])
            continue
        if len(fields) != 3:
            raise ParseError(f"expected 'C nlambda zeta', got {raw.strip()!r}", path, lineno)
        try:
            terms.append(SlaterTerm(float(fields[0]), int(fields[1]), float(fields[2])))
        except ValueError as e:
            raise ParseError(str(e), path, lineno) from e
    if not terms:
        raise ParseError("no Slater terms found", path)

    orb = SlaterOrbital(tuple(terms), Z)
    n = normalization(orb)
    if abs(n - 1.0) > NORMALIZATION_TOLERANCE:
        raise DataError(f"{path}: normalization integral is {n:.6f}, outside [0.99, 1.01]")
    logger.debug("loaded %d Slater terms from %s, normalization %.6f", len(terms), path, n)
    return orb


def radial(orb: SlaterOrbital, r):
    """R(r) = sum_p C_p (2 zeta_p)^{3/2} (2 zeta_p r)^{n_p - 1} e^{-zeta_p r} / sqrt((2 n_p)!)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be >= 0")
    return sum(t.C * t.norm * (2.0 * t.zeta * r) ** (t.nlambda - 1) * np.exp(-t.zeta * r) for t in orb.terms)


def psi_K(orb: SlaterOrbital, r):
    """Spherically symmetric K-shell amplitude R(r)/sqrt(4 pi) in Angstrom^{-3/2}."""
    return radial(orb, r) / math.sqrt(4.0 * math.pi)


def normalization(orb: SlaterOrbital) -> float:
    """int_0^inf R^2 r^2 dr from the analytic overlap of Slater functions."""
    total = 0.0
    for p in orb.terms:
        for q in orb.terms:
            total += p.C * q.C * _overlap(p, q)
    return total


def _overlap(p: SlaterTerm, q: SlaterTerm) -> float:
    zp, zq = p.zeta_per_bohr, q.zeta_per_bohr
    n = p.nlambda + q.nlambda
    num = (2 * zp) ** (p.nlambda + 0.5) * (2 * zq) ** (q.nlambda + 0.5) * math.factorial(n)
    den = math.sqrt(math.factorial(2 * p.nlambda) * math.factorial(2 * q.nlambda)) * (zp + zq) ** (n + 1)
    return num / den
