"""Exception types shared across the package."""


class HybridCsitError(Exception):
    """Base class for all package errors."""


class InvalidInput(HybridCsitError, ValueError):
    """An argument is outside the operation's domain."""


class DegenerateProjector(HybridCsitError, ValueError):
    """The rows span the whole space, so no orthogonal direction exists."""


class DimensionMismatch(HybridCsitError, ValueError):
    """A scheme was paired with a realization of the wrong shape."""


class ConfigMismatch(DimensionMismatch):
    """A scheme was run under a CSIT configuration it was not built for."""


class CsitViolation(HybridCsitError):
    """A scheme asked for channel knowledge its CSIT configuration forbids."""


class Unsupported(HybridCsitError, ValueError):
    """The requested combination of parameters is not provided."""


class InfeasibleZeroForcer(HybridCsitError, ArithmeticError):
    """No linear combination of observations isolates the desired symbols."""
