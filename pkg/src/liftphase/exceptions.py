"""Exception types shared across the package."""


class LiftphaseError(Exception):
    """Base class for all package-specific errors."""


class NonConvergence(LiftphaseError):
    """An iterative or adaptive routine failed to reach its tolerance."""


class DecompositionFailure(LiftphaseError):
    """A matrix factorization did not converge."""


class DimensionError(LiftphaseError):
    """Operands have incompatible or invalid dimensions."""


class GridError(LiftphaseError):
    """A measurement or synthesis grid violates its constraints."""


class ZeroSignal(LiftphaseError):
    """An operation that needs a nonzero reference signal received zero."""


class DegenerateSpectrum(LiftphaseError):
    """Angular synchronization cannot separate a dominant eigenvector."""


class ConfigError(LiftphaseError):
    """Invalid configuration or input file schema."""
