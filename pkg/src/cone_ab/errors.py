"""Exception hierarchy shared by the library and the CLI."""


class ConeABError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ConeABError, ValueError):
    """An argument lies outside the domain of the operation."""


class AntiConeError(DomainError):
    """alpha > 1 (anti-cone) is outside the supported geometry."""


class RangeError(ConeABError, ArithmeticError):
    """A result overflowed or cannot be represented as a finite float."""


class UnsupportedChannelError(DomainError):
    """Channel with negative squared effective angular momentum."""


class PoleError(ConeABError, ArithmeticError):
    """A vanishing denominator was hit (resonance of a ratio)."""


class ForwardDirectionError(DomainError):
    """The amplitude is singular in the forward direction theta = 0."""


class ConvergenceError(ConeABError, ArithmeticError):
    """Regularized summation did not reach the requested tolerance.

    ``partial`` carries the best available result.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class IntegrationError(ConeABError, ArithmeticError):
    """Radial ODE integration failed or could not meet its error target."""


class PhaseFitError(ConeABError, ArithmeticError):
    """Asymptotic fit residual too large: the grid was not asymptotic."""
