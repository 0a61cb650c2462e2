"""Ergodic capacity of fluctuating double-Rayleigh with line-of-sight fading channels.

Subpackages
-----------
specfun
    Special functions: gamma family, Kummer functions, exponential
    integrals, Meijer G-functions and their bivariate extension.
channel
    Channel parameters, densities, two-step quadrature and SNR sampling.
capacity
    ORA/OPRA capacity by quadrature, closed forms, approximations and
    high-SNR asymptotes.
mcsim
    Monte-Carlo estimates from physical channel samples.
cli
    Command-line interface (``fdrlos``).
"""

from .capacity import (
    CapacityEstimate,
    NumericsConfig,
    OpraCutoff,
    opra_closed,
    opra_cutoff,
    opra_high_snr,
    opra_quadrature,
    ora_approx_high_ratio,
    ora_approx_low_ratio,
    ora_closed,
    ora_high_snr,
    ora_quadrature,
    relative_error,
)
from .channel import ChannelParams, QuadratureGrid, marginal_pdf, sample_snr
from .errors import (
    ContourError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    FdrlosError,
    NumericalOverflowError,
    NumericalWarning,
)
from .mcsim import McConfig, McResult, mc_opra, mc_ora

__version__ = "0.1.0"

__all__ = [
    "CapacityEstimate",
    "NumericsConfig",
    "OpraCutoff",
    "opra_closed",
    "opra_cutoff",
    "opra_high_snr",
    "opra_quadrature",
    "ora_approx_high_ratio",
    "ora_approx_low_ratio",
    "ora_closed",
    "ora_high_snr",
    "ora_quadrature",
    "relative_error",
    "ChannelParams",
    "QuadratureGrid",
    "marginal_pdf",
    "sample_snr",
    "ContourError",
    "ConvergenceError",
    "DivergenceError",
    "DomainError",
    "FdrlosError",
    "NumericalOverflowError",
    "NumericalWarning",
    "McConfig",
    "McResult",
    "mc_opra",
    "mc_ora",
]
