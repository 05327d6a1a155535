"""Spatial overlap integrals between the K-shell orbital and the positron-photon plane wave.

For one Slater term r^{n-1} e^{-zeta r}, the integral over the plane (y, z) of
e^{i(q_y y + q_z z)} gives the kernel

    f(zeta; x) = zeta (x s + 1) e^{-x s} / s^3,   s = sqrt(q_yz^2 + zeta^2),

and r^{n-1} e^{-zeta r} = (-d/dzeta)^{n-1} e^{-zeta r}. The remaining x
integral over one interplanar distance carries the phase e^{i q_x x} with
q_x = G_{m,i_n} - kappa_x. zeta derivatives are taken with Taylor jets.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, quad_vec

from . import taylor
from .bands import BandStructure
from .errors import ConsistencyError, DomainError, IntegrationError, UnsupportedOrderError
from .kshell import SlaterOrbital
from .taylor import Jet

logger = logging.getLogger(__name__)

MAX_ORDER = 6
QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-10
QUAD_LIMIT = 2000
INTEGRATORS = ("quadrature", "analytic")


# -----------------------------------------------------------------------------
# Types
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class QVector:
    """Momentum transfer in inverse Angstrom."""

    q_x: float
    q_y: float
    q_z: float

    @property
    def q_yz(self) -> float:
        return math.hypot(self.q_y, self.q_z)


@dataclass(frozen=True, eq=False)
class IoTable:
    """Io_{m,i_n} in Angstrom^{3/2}; row r holds subband subbands[r], column m + M."""

    values: np.ndarray
    subbands: tuple[int, ...]
    M: int

    def __post_init__(self):
        if self.values.shape != (len(self.subbands), 2 * self.M + 1):
            raise ConsistencyError(
                f"Io values of shape {self.values.shape} do not match "
                f"{len(self.subbands)} subbands and M={self.M}"
            )
        if not np.all(np.isfinite(self.values)):
            raise IntegrationError("Io table has non-finite entries")

    def row(self, i_n: int) -> np.ndarray:
        try:
            return self.values[self.subbands.index(i_n)]
        except ValueError:
            raise ConsistencyError(f"subband {i_n} is not in the Io table {self.subbands}") from None

    def value(self, m: int, i_n: int) -> complex:
        if abs(m) > self.M:
            raise ConsistencyError(f"|m|={abs(m)} exceeds the Io table cutoff M={self.M}")
        return complex(self.row(i_n)[m + self.M])


# -----------------------------------------------------------------------------
# Kernel
# -----------------------------------------------------------------------------


def _check_order(p: int):
    if p < 0:
        raise DomainError(f"derivative order must be >= 0, got {p}")
    if p > MAX_ORDER:
        raise UnsupportedOrderError(f"derivative order {p} exceeds {MAX_ORDER} (nlambda <= 7)")


def di_kernel(p: int, q_yz: float, zeta: float, x):
    """p-th zeta derivative of zeta (x s + 1) e^{-x s} / s^3 at x >= 0."""
    _check_order(p)
    if zeta <= 0:
        raise DomainError(f"zeta must be positive, got {zeta}")
    x = np.asarray(x, dtype=float)
    z = Jet.variable(zeta, p)
    s = taylor.sqrt(z * z + q_yz**2)
    xs = s * x
    f = z * (xs + 1.0) * taylor.exp(-xs) / (s * s * s)
    return f.derivative(p)


def idi_integral(p: int, q_x: float, q_yz: float, zeta: float, d: float) -> complex:
    """int_0^d e^{i q_x x} DI_p(x) dx by adaptive quadrature."""
    _check_order(p)
    if d <= 0:
        raise DomainError(f"integration length must be positive, got {d}")

    def kernel(x):
        return float(di_kernel(p, q_yz, zeta, x))

    # peak of the kernel times its decay length
    scale = float(np.max(np.abs(di_kernel(p, q_yz, zeta, np.linspace(0.0, d, 9))))) * min(d, 1.0 / math.hypot(q_yz, zeta))
    epsabs = QUAD_EPSABS * max(scale, np.finfo(float).tiny)
    omega = abs(q_x)
    if omega == 0:
        return complex(_quad(kernel, d, epsabs), 0.0)
    real = _quad(kernel, d, epsabs, weight="cos", wvar=omega)
    imag = _quad(kernel, d, epsabs, weight="sin", wvar=omega)
    value = complex(real, imag)
    return value if q_x > 0 else value.conjugate()


def _quad(func, d, epsabs, **kwargs) -> float:
    out = quad(func, 0.0, d, epsabs=epsabs, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, full_output=1, **kwargs)
    if len(out) > 3:
        info, message = out[2], out[3]
        last = info.get("last") if isinstance(info, dict) else None
        if "subdivisions" in message or "cycles" in message:
            raise IntegrationError(f"IDI quadrature did not converge: {message}", last)
        logger.warning("IDI quadrature: %s", message.strip().splitlines()[0])
    return out[0]


def idi_closed_form(p: int, q_x, q_yz: float, zeta: float, d: float):
    """Analytic x-integral of the underived kernel, differentiated p times in zeta.

    With s = sqrt(q_yz^2 + zeta^2) and a = s - i q_x,
    int_0^d (x s + 1) e^{-a x} dx = s (1/a^2 - e^{-a d}(d/a + 1/a^2)) + (1 - e^{-a d})/a.
    Vectorized over q_x.
    """
    _check_order(p)
    if zeta <= 0:
        raise DomainError(f"zeta must be positive, got {zeta}")
    q_x = np.asarray(q_x, dtype=float)
    z = Jet.variable(zeta, p)
    s = taylor.sqrt(z * z + q_yz**2)
    a = s - 1j * q_x
    inv_a = 1.0 / a
    decay = taylor.exp(-(a * d))
    x_integral = s * (inv_a * inv_a - decay * (inv_a * d + inv_a * inv_a)) + (1.0 - decay) * inv_a
    return (z * x_integral / (s * s * s)).derivative(p)


# -----------------------------------------------------------------------------
# Io table
# -----------------------------------------------------------------------------


def term_weights(orb: SlaterOrbital) -> list[tuple[int, float, float]]:
    """(p, zeta, w) per Slater term, w = 2 pi C (2 zeta)^{3/2} (-2 zeta)^{n-1} / sqrt(4 pi (2n)!)."""
    weights = []
    for t in orb.terms:
        w = 2.0 * math.pi * t.C * t.norm * (-2.0 * t.zeta) ** (t.nlambda - 1) / math.sqrt(4.0 * math.pi)
        weights.append((t.nlambda - 1, t.zeta, w))
    return weights


def io_assemble(
    orb: SlaterOrbital,
    q: QVector | float,
    kappa_x: float,
    bs: BandStructure,
    subbands=None,
    integrator: str = "analytic",
) -> IoTable:
    """Io_{m,i_n} = int_slab Psi_K(r) e^{i q.r} d^3r for every plane wave of the chosen subbands.

    Only q_yz of `q` is used; q_x = G_{m,i_n} - kappa_x per entry.
    """
    if integrator not in INTEGRATORS:
        raise DomainError(f"unknown integrator {integrator!r}, expected one of {INTEGRATORS}")
    q_yz = q.q_yz if isinstance(q, QVector) else float(q)
    if q_yz < 0:
        raise DomainError(f"q_yz must be >= 0, got {q_yz}")
    subbands = tuple(range(bs.n_sub)) if subbands is None else tuple(int(i) for i in subbands)
    for i_n in subbands:
        if not 0 <= i_n < bs.n_sub:
            raise ConsistencyError(f"subband {i_n} outside band structure with n_sub={bs.n_sub}")

    q_x = np.array([bs.g_vectors(i_n) for i_n in subbands]).reshape(len(subbands), -1) - kappa_x
    weights = term_weights(orb)

    if integrator == "analytic":
        values = sum(w * idi_closed_form(p, q_x, q_yz, zeta, bs.d) for p, zeta, w in weights)
    else:
        values = _io_quadrature(weights, q_x, q_yz, bs.d)

    return IoTable(values=np.asarray(values, dtype=complex), subbands=subbands, M=bs.M)


def _io_quadrature(weights, q_x: np.ndarray, q_yz: float, d: float) -> np.ndarray:
    """All entries in one vector-valued adaptive quadrature; the x kernel is shared by every q_x."""
    flat = q_x.ravel()

    def kernel(x):
        return sum(w * float(di_kernel(p, q_yz, zeta, x)) for p, zeta, w in weights)

    def integrand(x):
        phase = np.exp(1j * flat * x)
        k = kernel(x)
        return np.concatenate([k * phase.real, k * phase.imag])

    grid = np.linspace(0.0, d, 9)
    s_min = min(math.hypot(q_yz, zeta) for _, zeta, _ in weights)
    scale = np.max(np.abs(sum(w * di_kernel(p, q_yz, zeta, grid) for p, zeta, w in weights))) * min(d, 1.0 / s_min)
    epsabs = QUAD_EPSABS * max(float(scale), np.finfo(float).tiny)
    lengths = {1.0 / math.hypot(q_yz, zeta) for _, zeta, _ in weights}
    breakpoints = sorted(x for x in lengths if x < d)

    result, _, info = quad_vec(
        integrand,
        0.0,
        d,
        epsabs=epsabs,
        epsrel=QUAD_EPSREL,
        norm="max",
        limit=QUAD_LIMIT,
        points=breakpoints or None,
        full_output=True,
    )
    n_intervals = len(info.intervals)
    if info.status == 1:
        raise IntegrationError("Io quadrature reached the subdivision limit", n_intervals)
    if info.status == 2:
        logger.warning("Io quadrature: roundoff error prevents the requested tolerance")
    logger.debug("Io quadrature: %d entries, %d subintervals", flat.size, n_intervals)
    n = flat.size
    return (result[:n] + 1j * result[n:]).reshape(q_x.shape)
