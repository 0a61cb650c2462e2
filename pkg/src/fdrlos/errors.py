"""Exception and warning types raised by :mod:`fdrlos`."""


class FdrlosError(Exception):
    """Base class of all library errors."""


class DomainError(FdrlosError, ValueError):
    """An argument lies outside the domain of a function."""


class ContourError(FdrlosError, ValueError):
    """No admissible Mellin--Barnes contour exists for the requested parameters.

    Raised when the ascending and descending pole families of a gamma-ratio
    kernel cannot be separated (for instance, when an upper front parameter
    exceeds a lower front parameter by a positive integer), or when a
    bivariate integral has no straight-line pair of contours.
    """


class DivergenceError(FdrlosError):
    """A contour integrand does not decay along the integration line."""


class ConvergenceError(FdrlosError):
    """An iterative procedure (root finding, series, refinement) failed."""


class NumericalOverflowError(FdrlosError, OverflowError):
    """A result is too large to be represented in double precision."""


class NumericalWarning(UserWarning):
    """An estimate was returned but did not reach its requested tolerance."""
