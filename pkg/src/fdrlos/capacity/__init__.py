"""Ergodic capacity of the fdRLoS channel under rate (ORA) and power-and-rate
(OPRA) adaptation: quadrature, closed forms, approximations, asymptotes."""

from ._types import (
    LN2,
    METHODS,
    CapacityEstimate,
    NumericsConfig,
    OpraCutoff,
    integer_m,
    relative_error,
)
from .asymptotic import (
    harmonic_mixture_mean,
    mixture_weights,
    opra_high_snr,
    ora_approx_high_ratio,
    ora_approx_low_ratio,
    ora_high_snr,
)
from .opra import opra_closed, opra_constraint, opra_cutoff, opra_quadrature, opra_term
from .ora import ora_closed, ora_closed_integer, ora_conditional_closed, ora_quadrature

__all__ = [
    "LN2",
    "METHODS",
    "CapacityEstimate",
    "NumericsConfig",
    "OpraCutoff",
    "integer_m",
    "relative_error",
    "harmonic_mixture_mean",
    "mixture_weights",
    "opra_high_snr",
    "ora_approx_high_ratio",
    "ora_approx_low_ratio",
    "ora_high_snr",
    "opra_closed",
    "opra_constraint",
    "opra_cutoff",
    "opra_quadrature",
    "opra_term",
    "ora_closed",
    "ora_closed_integer",
    "ora_conditional_closed",
    "ora_quadrature",
]
