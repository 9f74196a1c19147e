"""Exception types shared across the package."""


class BetheTraceError(Exception):
    """Base class for all package-specific errors."""


class InvalidQuantumNumbers(BetheTraceError):
    """Quantum numbers are repeated, unordered, or have the wrong parity."""


class NonConvergence(BetheTraceError):
    """Newton iteration failed to reach the residual tolerance.

    Carries the sequence of residual 2-norms seen before giving up.
    """

    def __init__(self, message, residual_norms=()):
        super().__init__(message)
        self.residual_norms = tuple(residual_norms)


class OutOfRange(BetheTraceError):
    """Argument outside the supported range."""


class NonPositiveEnergy(BetheTraceError):
    """Energy argument must be strictly positive."""


class WrongParticleNumber(BetheTraceError):
    """Operation is only defined for a specific particle number."""
