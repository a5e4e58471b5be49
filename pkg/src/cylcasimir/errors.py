"""Exception types raised by the numerical kernels and the CLI layer."""


class CasimirError(Exception):
    """Base class for all errors raised by this package."""


class BesselDomainError(CasimirError, ValueError):
    """Argument outside the domain of a Bessel kernel (x <= 0 or not finite)."""


class BesselOverflowError(CasimirError, OverflowError):
    """The log-scaled value itself is not representable."""


class ResonanceError(CasimirError, ZeroDivisionError):
    """A radial Green function denominator vanishes (cavity resonance)."""

    def __init__(self, message, denominator):
        super().__init__(message)
        self.denominator = denominator


class QuadratureError(CasimirError, ArithmeticError):
    """Adaptive quadrature did not meet its tolerance.

    The best available estimate and its error bound are kept on the
    exception so callers can still report them.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class UnknownMaterialError(CasimirError, KeyError):
    """No material with the requested name is registered."""
