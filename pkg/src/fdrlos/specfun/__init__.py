"""Special-function kernel: gamma family, Kummer functions, exponential
integrals, univariate and bivariate Meijer G-functions, series acceleration."""

from .accel import AccelerationResult, accelerate, richardson, richardson_doubling, shanks
from .elementary import (
    digamma,
    gamma_sign,
    gen_exp_integral,
    gen_exp_integral_dnu,
    kummer_m,
    kummer_m_scaled,
    kummer_u,
    ln_gamma,
    log_kummer_u,
)
from .mellin import (
    ContourConfig,
    EgbmgSpec,
    GammaBlock,
    MeijerGSpec,
    MellinResult,
    bivariate_line_sum,
    egbmg,
    meijer_g,
)

__all__ = [
    "AccelerationResult",
    "accelerate",
    "richardson",
    "richardson_doubling",
    "shanks",
    "digamma",
    "gamma_sign",
    "gen_exp_integral",
    "gen_exp_integral_dnu",
    "kummer_m",
    "kummer_m_scaled",
    "kummer_u",
    "ln_gamma",
    "log_kummer_u",
    "ContourConfig",
    "EgbmgSpec",
    "GammaBlock",
    "MeijerGSpec",
    "MellinResult",
    "bivariate_line_sum",
    "egbmg",
    "meijer_g",
]
