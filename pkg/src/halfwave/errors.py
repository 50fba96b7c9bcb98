"""Exception hierarchy shared by every halfwave module."""


class HalfwaveError(Exception):
    """Base class for all errors raised by halfwave."""


class DomainError(HalfwaveError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class HalfPlaneError(DomainError):
    """A transform argument is not in the open lower half-plane."""


class BranchCutError(DomainError):
    """A complex power was requested with a base off the right half-plane."""


class AccuracyError(HalfwaveError, ArithmeticError):
    """A numerical procedure could not reach its advertised tolerance.

    The achieved error bound is kept on ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ConsistencyError(HalfwaveError, ArithmeticError):
    """Two independent evaluation routes disagreed beyond tolerance."""

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class PathError(DomainError):
    """An integration path passes too close to a singular point."""


class SupercriticalError(DomainError):
    """The coupling exceeds the relativistic quantum number (lambda >= |kappa|)."""


class UnphysicalStateError(DomainError):
    """The quantum numbers do not describe a bound state."""
