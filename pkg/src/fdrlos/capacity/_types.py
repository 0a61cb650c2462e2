"""Result containers, configuration and shared helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..channel import QuadratureGrid
from ..errors import DomainError
from ..specfun import ContourConfig

LN2 = math.log(2.0)

METHODS = (
    "quadrature",
    "closed_form",
    "approx_low_ratio",
    "approx_high_ratio",
    "high_snr",
    "monte_carlo",
)


@dataclass(frozen=True)
class CapacityEstimate:
    """Ergodic capacity in bit/s/Hz with provenance.

    Attributes
    ----------
    value : float
        Capacity in bit/s/Hz.
    method : str
        One of ``quadrature``, ``closed_form``, ``approx_low_ratio``,
        ``approx_high_ratio``, ``high_snr``, ``monte_carlo``.
    err_est : float
        Absolute error estimate of the numerical evaluation (not of the
        approximation itself for the approximate methods).
    diagnostics : dict
        Nodes, terms, contour choices, convergence flags.
    """

    value: float
    method: str
    err_est: float = 0.0
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method tag {self.method!r}")
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "err_est", abs(float(self.err_est)))
        if not math.isfinite(self.value):
            raise DomainError("capacity value is not finite")
        if self.value < -(self.err_est + 1e-9):
            raise DomainError(f"negative capacity {self.value} (err_est {self.err_est})")

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class OpraCutoff:
    """Solution of the average-power constraint for power-and-rate adaptation.

    Attributes
    ----------
    gamma0 : float
        Cut-off SNR (linear) below which no power is transmitted.
    residual : float
        Constraint left-hand side minus one at ``gamma0``.
    err_est : float
        Estimated absolute error of ``gamma0`` from the quadrature.
    """

    gamma0: float
    residual: float = 0.0
    err_est: float = 0.0

    def __post_init__(self):
        if not (0 < self.gamma0 <= 1 + 1e-12):
            raise DomainError("cut-off SNR must lie in (0, 1]")


@dataclass(frozen=True)
class NumericsConfig:
    """Numerical knobs shared by the capacity routines.

    Attributes
    ----------
    grid : QuadratureGrid
        Quadrature over ``x`` and ``gamma``.
    contour : ContourConfig
        Default contour settings (abscissae chosen automatically).
    series_tol : float
        Absolute tolerance (bit/s/Hz) of accelerated infinite series.
    n_max : int
        Largest number of series terms.
    cutoff_tol : float
        Tolerance on the power-constraint residual.
    """

    grid: QuadratureGrid = field(default_factory=QuadratureGrid)
    contour: ContourConfig = field(default_factory=ContourConfig)
    series_tol: float = 1e-7
    n_max: int = 16384
    cutoff_tol: float = 1e-10


def relative_error(exact, approx):
    """Relative error ``|exact - approx| / exact`` of two capacities.

    Parameters
    ----------
    exact, approx : CapacityEstimate or float

    Raises
    ------
    DomainError
        If the exact value is not positive.
    """
    e = float(exact)
    a = float(approx)
    if not e > 0:
        raise DomainError("relative_error: exact value must be positive")
    return abs(e - a) / e


def integer_m(m, tol=1e-6):
    """Return the nearest integer if ``m`` is within ``tol`` of it, else None."""
    r = round(m)
    if r >= 1 and abs(m - r) <= tol:
        return int(r)
    return None
