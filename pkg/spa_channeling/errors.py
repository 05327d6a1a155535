"""Exception types raised by the library. Only the CLI catches them."""


class SpaError(Exception):
    """Base class for every error the library raises on purpose."""


class DomainError(SpaError, ValueError):
    """Argument outside the physical domain (gamma <= 1, nonpositive data, ...)."""


class PreconditionError(SpaError, ValueError):
    """Numerical parameters that cannot satisfy the request (M too small, ...)."""


class UnsupportedOrderError(SpaError, ValueError):
    """Derivative order beyond what the Slater expansion needs."""


class IntegrationError(SpaError):
    """Adaptive quadrature did not converge."""

    def __init__(self, message: str, subintervals: int | None = None):
        if subintervals is not None:
            message = f"{message} (subintervals used: {subintervals})"
        super().__init__(message)
        self.subintervals = subintervals


class EigenSolverError(SpaError):
    """Hermitian eigensolver failure."""


class ParseError(SpaError):
    """Malformed input file."""

    def __init__(self, message: str, path=None, line: int | None = None):
        where = f"{path}:{line}: " if line is not None else (f"{path}: " if path else "")
        super().__init__(f"{where}{message}")
        self.line = line


class DataError(SpaError):
    """Input data parsed but physically inconsistent."""


class ConsistencyError(SpaError):
    """Internal index mismatch between tables built from different inputs."""


class ConfigError(SpaError):
    """Invalid configuration key or value."""
