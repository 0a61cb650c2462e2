r"""Ergodic capacity with optimal rate adaptation (constant transmit power).

``C = E[log2(1 + gamma)]`` evaluated in two steps: first conditioned on the
double-Rayleigh factor ``x = |G3|^2`` (a shadowed Rician channel), then
averaged over ``x ~ Exp(1)``.

Closed forms
------------
For integer ``m`` the conditional density is a finite mixture of Gamma laws
and the capacity is a finite sum of extended generalized bivariate Meijer G
(EGBMG) functions in the arguments ``x = (k+1)/gamma_bar`` and ``y = k/m``:

.. math::

    \bar C = \frac{\Gamma(m)}{\ln 2}\sum_{i=0}^{m-1}
             \frac{(k/m)^i}{(i!)^2\,\Gamma(m-i)}\;
             \mathcal G_i\bigl(\tfrac{k+1}{\bar\gamma}, \tfrac{k}{m}\bigr),

where ``G_i`` has kernels ``Psi_1(s+t) = Gamma(1-i+s+t) Gamma(m-1-s-t)``,
``Psi_2(s) = Gamma(s)^2 Gamma(1+i+s) Gamma(1-s) / (Gamma(1+s) Gamma(m-1-s))``
and ``Psi_3(t) = Gamma(t)``. For ``m = 1`` the pole families of ``Psi_1`` and
``Psi_3`` cannot be separated by straight lines; the integral is taken along
fixed lines and the residue at ``s + t = 0`` is added back as a univariate
``G^{2,1}_{1,2}``.

For noninteger ``m`` the conditional capacity is

.. math::

    \bar C_x = \frac{(1-p)^{m-1}}{\Gamma(1-m)\ln 2}\,
               \mathcal G\bigl(1/\lambda,\, q\bigr)

with ``Psi_1 = Gamma(1-s-t)``, ``Psi_2 = Gamma(1+s) Gamma(-s)^2 / Gamma(1-s)``
and ``Psi_3 = Gamma(t) Gamma(1-m-t) / Gamma(1-t)``;
the poles ``t = 1 - m + n`` that fall left of the ``t`` line contribute
explicit univariate ``G^{1,3}_{3,2}`` residue terms. ``Gamma(1-m)`` changes
sign with ``m``; only the product is asserted nonnegative.
"""

from __future__ import annotations

import math
import time

import numpy as np
from scipy import special as sc

from ..channel import (
    QuadratureGrid,
    _conditional_terms,
    conditional_expectation,
    laguerre_average,
)
from ..errors import DomainError
from ..specfun import ContourConfig, EgbmgSpec, GammaBlock, MeijerGSpec, egbmg, meijer_g
from ._types import LN2, CapacityEstimate, NumericsConfig, integer_m

__all__ = [
    "ora_quadrature",
    "ora_conditional_closed",
    "ora_closed_integer",
    "ora_closed",
]


def ora_quadrature(p, grid=None):
    """ORA capacity by two-step numerical integration.

    Parameters
    ----------
    p : ChannelParams
    grid : QuadratureGrid, optional

    Returns
    -------
    CapacityEstimate
        ``method="quadrature"``; ``err_est`` combines the change between the
        last two outer refinements and the inner trapezoid error.
    """
    grid = grid or QuadratureGrid()
    t0 = time.perf_counter()

    def cond(x):
        return conditional_expectation(np.log1p, x, p, tol=grid.gamma_tol)

    val, err, info = laguerre_average(cond, grid)
    info = dict(info, seconds=time.perf_counter() - t0)
    return CapacityEstimate(max(val, 0.0) / LN2, "quadrature", err / LN2, info)


# ---------------------------------------------------------------------------
# conditional capacity


def _g3132(shift, arg, cfg=None):
    """``G^{1,3}_{3,2}((1, 1, shift), (1, 0) | arg)``: ``E[ln(1 + arg*Y)]``-type kernel."""
    spec = MeijerGSpec.standard(1, 3, [1.0, 1.0, shift], [1.0, 0.0])
    return meijer_g(spec, arg, cfg)


def _conditional_integer(x, p, m_int, cfg):
    pref, lam, q = _conditional_terms(np.atleast_1d(float(x)), p)
    # pref = (1-p)^{m-1}; every term is a nonnegative mixture weight times
    # the Gamma(i+1)-distributed log moment
    lam = float(lam[0])
    q = float(q[0])
    omp = float(pref[0])
    total = 0.0
    err = 0.0
    for i in range(m_int):
        coef = math.exp(
            sc.gammaln(m_int) - sc.gammaln(m_int - i) - 2 * sc.gammaln(i + 1)
        ) * q**i
        r = _g3132(-float(i), 1.0 / lam, cfg)
        total += coef * r.value
        err += coef * r.err_est
    return omp * total / LN2, omp * err / LN2


def _lemma_blocks(m):
    return EgbmgSpec(
        block1=GammaBlock(a_front=[0.0]),
        block2=GammaBlock(b_front=[1.0], a_front=[1.0, 1.0], b_back=[0.0]),
        block3=GammaBlock(b_front=[0.0], a_front=[m], b_back=[0.0]),
    )


def _lemma_t_line(m, sigma_s):
    """Abscissa of the ``t`` line: middle of the widest gap left by the poles
    ``1 - m + n`` inside the admissible strip ``(0, 1 - sigma_s)``."""
    hi = 1.0 - sigma_s
    poles = [1.0 - m + n for n in range(int(math.ceil(m)) + 3)]
    pts = sorted([0.0, hi] + [t for t in poles if 0.0 < t < hi])
    gaps = [(b - a, 0.5 * (a + b)) for a, b in zip(pts[:-1], pts[1:])]
    return max(gaps)[1], poles


def _conditional_lemma(x, p, cfg):
    m = p.m
    pref, lam, q = _conditional_terms(np.atleast_1d(float(x)), p)
    lam = float(lam[0])
    q = float(q[0])
    omp = float(pref[0])
    if p.k == 0.0:
        r = _g3132(0.0, 1.0 / lam, cfg)
        return r.value / LN2, r.err_est / LN2
    sigma_s = -0.5
    sigma_t, poles = _lemma_t_line(m, sigma_s)
    res = egbmg(
        _lemma_blocks(m),
        1.0 / lam,
        q,
        ContourConfig(sigma=sigma_s, tol=cfg.tol),
        ContourConfig(sigma=sigma_t, tol=cfg.tol),
        line_only=True,
    )
    val, err = res.value, res.err_est
    for n, t in enumerate(poles):
        if t < sigma_t:
            coef = (
                (-1.0) ** n
                / math.factorial(n)
                * sc.gamma(1.0 - m + n)
                * sc.rgamma(m - n)
                * q ** (m - 1.0 - n)
            )
            r = _g3132(1.0 - m + n, 1.0 / lam, cfg)
            val += coef * r.value
            err += abs(coef) * r.err_est
    fac = omp / (sc.gamma(1.0 - m) * LN2)
    return fac * val, abs(fac) * err


def ora_conditional_closed(x, p, cfg=None, *, full_output=False):
    """Conditional ORA capacity ``E[log2(1 + gamma) | x]`` in closed form.

    Parameters
    ----------
    x : float
        Positive value of the double-Rayleigh power ``|G3|^2``.
    p : ChannelParams
    cfg : ContourConfig, optional
        Tolerance of the contour integrals (abscissae are set internally).
    full_output : bool, optional
        Also return the absolute error estimate.

    Returns
    -------
    float or (float, float)
        Capacity in bit/s/Hz (and its error estimate).

    Notes
    -----
    If ``m`` is within ``1e-6`` of an integer the finite mixture of
    ``G^{1,3}_{3,2}`` terms is used; otherwise the bivariate representation
    with explicit residue terms.
    """
    x = float(x)
    if not x > 0:
        raise DomainError("ora_conditional_closed: x must be positive")
    cfg = cfg or ContourConfig()
    m_int = integer_m(p.m)
    if m_int is not None:
        val, err = _conditional_integer(x, p.replace(m=float(m_int)), m_int, cfg)
    else:
        val, err = _conditional_lemma(x, p, cfg)
    if val < -(err + 1e-9):
        raise DomainError(f"conditional capacity evaluated negative ({val:.3e})")
    val = max(val, 0.0)
    return (val, err) if full_output else val


# ---------------------------------------------------------------------------
# unconditional closed forms


def _rayleigh_product(gamma_bar, cfg):
    """``E[ln(1 + gamma_bar * E1 * E2)]`` for independent unit exponentials."""
    spec = MeijerGSpec.standard(1, 4, [1.0, 1.0, 0.0, 0.0], [1.0, 0.0])
    return meijer_g(spec, gamma_bar, cfg)


def _integer_blocks(m, i):
    return EgbmgSpec(
        block1=GammaBlock(b_front=[1.0 - i], a_front=[2.0 - m]),
        block2=GammaBlock(b_front=[0.0, 0.0, 1.0 + i], a_front=[0.0], a_back=[1.0], b_back=[2.0 - m]),
        block3=GammaBlock(b_front=[0.0]),
    )


def ora_closed_integer(p, cfg=None):
    """ORA capacity for integer ``m`` as a finite sum of EGBMG functions.

    Parameters
    ----------
    p : ChannelParams
        ``m`` must be a positive integer (within ``1e-6``).
    cfg : ContourConfig, optional
        Contour tolerance; line abscissae are chosen automatically.

    Returns
    -------
    CapacityEstimate
        ``method="closed_form"``.

    Raises
    ------
    DomainError
        If ``m`` is not an integer.
    """
    m = integer_m(p.m)
    if m is None:
        raise DomainError("ora_closed_integer requires an integer shadowing parameter m")
    cfg = cfg or ContourConfig()
    t0 = time.perf_counter()
    k, gb = p.k, p.gamma_bar
    terms = []
    if k == 0.0:
        r = _rayleigh_product(gb, cfg)
        val, err = r.value, r.err_est
        terms.append({"i": 0, "value": r.value, "sigma": r.diagnostics["sigma"]})
        path = "double_rayleigh"
    elif m == 1:
        x, y = (k + 1.0) / gb, k
        line = egbmg(
            _integer_blocks(1, 0),
            x,
            y,
            ContourConfig(sigma=1.0 / 3.0, tol=cfg.tol),
            ContourConfig(sigma=1.0 / 3.0, tol=cfg.tol),
            line_only=True,
        )
        corr = meijer_g(MeijerGSpec(b_front=[0.0, 0.0], a_front=[0.0]), x / y, cfg)
        val = line.value + corr.value
        err = line.err_est + corr.err_est
        terms.append({"i": 0, "value": line.value, "residue": corr.value})
        path = "egbmg+residue"
    else:
        x, y = (k + 1.0) / gb, k / m
        val = 0.0
        err = 0.0
        for i in range(m):
            coef = math.exp(
                sc.gammaln(m) + i * math.log(y) - 2 * sc.gammaln(i + 1) - sc.gammaln(m - i)
            )
            r = egbmg(_integer_blocks(m, i), x, y, ContourConfig(tol=cfg.tol), ContourConfig(tol=cfg.tol))
            val += coef * r.value
            err += coef * r.err_est
            terms.append(
                {"i": i, "value": r.value, "sigma": (r.diagnostics["sigma_s"], r.diagnostics["sigma_t"])}
            )
        path = "egbmg"
    diag = {"path": path, "terms": terms, "seconds": time.perf_counter() - t0}
    val /= LN2
    err /= LN2
    return CapacityEstimate(max(val, 0.0), "closed_form", err, diag)


def ora_closed(p, numerics=None):
    """ORA capacity by the closed-form route appropriate for ``m``.

    Integer ``m`` (within ``1e-6``) uses :func:`ora_closed_integer`; any
    other ``m`` averages :func:`ora_conditional_closed` over ``x`` with the
    same outer quadrature as :func:`ora_quadrature`.

    Parameters
    ----------
    p : ChannelParams
    numerics : NumericsConfig, optional

    Returns
    -------
    CapacityEstimate
    """
    numerics = numerics or NumericsConfig()
    m_int = integer_m(p.m)
    if m_int is not None:
        return ora_closed_integer(p.replace(m=float(m_int)), numerics.contour)
    t0 = time.perf_counter()
    cfg = numerics.contour

    def cond(xs):
        out = np.array([ora_conditional_closed(xv, p, cfg, full_output=True) for xv in xs])
        return out[:, 0] * LN2, out[:, 1] * LN2

    val, err, info = laguerre_average(cond, numerics.grid)
    info = dict(info, path="conditional_egbmg", seconds=time.perf_counter() - t0)
    return CapacityEstimate(max(val, 0.0) / LN2, "closed_form", err / LN2, info)

