r"""Ergodic capacity with optimal simultaneous power and rate adaptation.

The transmitter uses water-filling power ``P(gamma)/P = 1/gamma0 - 1/gamma``
above the cut-off ``gamma0`` fixed by the average-power constraint

.. math::

    \int_{\gamma_0}^\infty \Bigl(\frac{1}{\gamma_0} - \frac{1}{\gamma}\Bigr)
    f_\gamma(\gamma)\,d\gamma = 1,

and the capacity is ``E[log2(gamma/gamma0); gamma > gamma0]``.

Closed form
-----------
With the Gamma-mixture representation of the SNR (weights ``P_i``, see
:mod:`fdrlos.capacity.asymptotic`) and the substitution ``gamma = gamma0 t``,

.. math::

    \bar C = \frac{1}{\Gamma(m)\ln 2}\sum_{i\ge 0}
             \frac{\mathcal G_i\bigl((k+1)\gamma_0/\bar\gamma,\;k/m\bigr)}{(i!)^2}

with EGBMG kernels ``Psi_1(s+t) = Gamma(1+s+t)``,
``Psi_2(s) = Gamma(i+1+s) Gamma(s)^2 / Gamma(1+s)^2`` and
``Psi_3(t) = Gamma(i+t) Gamma(m-t)``, valid for every ``m > 0``. The
``i``-th term equals ``P_i g_i`` where ``g_i`` is the OPRA capacity of the
``i``-th mixture component; ``g_i`` tends to
``g_inf = E[log2(u0 Y / gamma0)^+]`` with ``Y ~ Gamma(m+1)`` and
``u0 = k gamma_bar/(m(k+1))``. Because ``P_i ~ k/i^2`` the plain partial
sums converge only like ``1/N``; the remaining mass ``1 - sum_{i<N} P_i`` is
therefore closed with ``g_inf``, which leaves an error expanding in
``N^-2, N^-3, ...``; a Richardson table over doubling ``N`` removes the
leading terms.
"""

from __future__ import annotations

import math
import time

import numpy as np
from scipy import special as sc
from scipy.optimize import brentq

from ..channel import QuadratureGrid, conditional_expectation, laguerre_average
from ..errors import ConvergenceError, DomainError
from ..specfun import (
    ContourConfig,
    EgbmgSpec,
    GammaBlock,
    accelerate,
    bivariate_line_sum,
    egbmg,
    gen_exp_integral_dnu,
    richardson_doubling,
)
from ._types import LN2, CapacityEstimate, OpraCutoff
from .asymptotic import mixture_weights

__all__ = ["opra_cutoff", "opra_constraint", "opra_quadrature", "opra_closed", "opra_term"]


# ---------------------------------------------------------------------------
# cut-off


def opra_constraint(gamma0, p, grid=None):
    """Left-hand side of the power constraint minus one.

    Parameters
    ----------
    gamma0 : float
        Trial cut-off SNR, ``> 0``.
    p : ChannelParams
    grid : QuadratureGrid, optional

    Returns
    -------
    value, err_est : float
    """
    gamma0 = float(gamma0)
    if not gamma0 > 0:
        raise DomainError("gamma0 must be positive")
    grid = grid or QuadratureGrid()
    inv = 1.0 / gamma0

    def cond(x):
        return conditional_expectation(
            lambda g: inv - 1.0 / g, x, p, lower=gamma0, tol=grid.gamma_tol
        )

    val, err, _ = laguerre_average(cond, grid)
    return val - 1.0, err


def opra_cutoff(p, grid=None, tol=1e-10, *, bracket=(1e-12, 1.0), scan_points=9):
    """Solve the average-power constraint for the cut-off SNR.

    The objective is evaluated on a logarithmic grid spanning ``bracket``;
    it must decrease along the grid (the integrand decreases pointwise in
    ``gamma0``). The sign change found there is refined with Brent's method
    in ``log gamma0``.

    Parameters
    ----------
    p : ChannelParams
    grid : QuadratureGrid, optional
    tol : float
        Required ``|residual|``.
    bracket : (float, float)
        Search interval for ``gamma0``.
    scan_points : int
        Points of the monotonicity scan.

    Returns
    -------
    OpraCutoff

    Raises
    ------
    ConvergenceError
        If the objective has no sign change on the bracket (the message
        reports the objective at both ends), is not decreasing on the scan,
        or the residual tolerance is not met.
    """
    grid = grid or QuadratureGrid()
    lo, hi = (float(b) for b in bracket)
    if not 0 < lo < hi:
        raise DomainError("bracket must satisfy 0 < lo < hi")
    logs = np.linspace(math.log(lo), math.log(hi), int(scan_points))
    cache = {}

    def obj(lg):
        if lg not in cache:
            cache[lg] = opra_constraint(math.exp(lg), p, grid)
        return cache[lg][0]

    vals = np.array([obj(lg) for lg in logs])
    errs = np.array([cache[lg][1] for lg in logs])
    slack = 10 * (errs[:-1] + errs[1:]) + 1e-12 * np.abs(vals[:-1])
    if np.any(np.diff(vals) > slack):
        raise ConvergenceError(f"power-constraint objective is not decreasing on the scan: {vals}")
    if not (vals[0] > 0 > vals[-1]):
        if vals[-1] == 0.0:
            return OpraCutoff(hi, 0.0, 0.0)
        raise ConvergenceError(
            f"no sign change of the power constraint on [{lo:.3g}, {hi:.3g}]: "
            f"objective {vals[0]:.6g} at the lower end, {vals[-1]:.6g} at the upper end"
        )
    j = int(np.nonzero(vals < 0)[0][0])
    a, b = logs[j - 1], logs[j]
    root = brentq(obj, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    gamma0 = math.exp(root)
    residual, err = opra_constraint(gamma0, p, grid)
    if abs(residual) > max(tol, 10 * err):
        raise ConvergenceError(f"cut-off residual {residual:.3e} exceeds tolerance {tol:.1e}")
    # error of gamma0 implied by the objective's error and its slope
    slope = abs(vals[j] - vals[j - 1]) / (math.exp(b) - math.exp(a))
    return OpraCutoff(min(gamma0, 1.0), residual, err / max(slope, 1e-300))


def _gamma0(p, cutoff, grid):
    if cutoff is None:
        return opra_cutoff(p, grid).gamma0
    if isinstance(cutoff, OpraCutoff):
        return cutoff.gamma0
    return float(cutoff)


# ---------------------------------------------------------------------------
# quadrature


def opra_quadrature(p, cutoff=None, grid=None):
    """OPRA capacity by two-step numerical integration.

    Parameters
    ----------
    p : ChannelParams
    cutoff : OpraCutoff or float, optional
        Solved cut-off; computed with :func:`opra_cutoff` if omitted.
    grid : QuadratureGrid, optional

    Returns
    -------
    CapacityEstimate
        ``method="quadrature"``; ``diagnostics["gamma0"]`` records the
        cut-off.
    """
    grid = grid or QuadratureGrid()
    t0 = time.perf_counter()
    gamma0 = _gamma0(p, cutoff, grid)
    lg0 = math.log(gamma0)

    def cond(x):
        return conditional_expectation(
            lambda g: np.log(g) - lg0, x, p, lower=gamma0, tol=grid.gamma_tol
        )

    val, err, info = laguerre_average(cond, grid)
    info = dict(info, gamma0=gamma0, seconds=time.perf_counter() - t0)
    return CapacityEstimate(max(val, 0.0) / LN2, "quadrature", err / LN2, info)


# ---------------------------------------------------------------------------
# closed form


def _term_spec(m, i):
    return EgbmgSpec(
        block1=GammaBlock(b_front=[1.0]),
        block2=GammaBlock(b_front=[i + 1.0, 0.0, 0.0], a_back=[1.0, 1.0]),
        block3=GammaBlock(b_front=[float(i)], a_front=[1.0 - m]),
    )


def opra_term(p, gamma0, i, cfg=None):
    """Single series term ``G_i / ((i!)^2 Gamma(m) ln 2)`` by direct EGBMG evaluation.

    Parameters
    ----------
    p : ChannelParams
    gamma0 : float
    i : int
    cfg : ContourConfig, optional
        Tolerance (the abscissae are fixed at ``sigma_s = 1/4``,
        ``sigma_t = min(m/2, 1/2)``).

    Returns
    -------
    MellinResult-like tuple ``(value, err_est, diagnostics)``
    """
    cfg = cfg or ContourConfig()
    m = p.m
    x = (p.k + 1.0) * gamma0 / p.gamma_bar
    log_norm = 2 * sc.gammaln(i + 1) + sc.gammaln(m)
    res = egbmg(
        _term_spec(m, i),
        x,
        p.k / m,
        ContourConfig(sigma=_SIGMA_S, tol=cfg.tol),
        ContourConfig(sigma=_sigma_t(m), tol=cfg.tol),
        log_scale=log_norm,
    )
    return res.value / LN2, res.err_est / LN2, res.diagnostics


_SIGMA_S = 0.25


def _sigma_t(m):
    return min(0.5 * m, 0.5)


class _TermBatcher:
    """Evaluates blocks of series terms on shared tensor grids.

    Heights and step are taken from the adaptive single-term evaluator at
    the largest index of each block (the ``i``-dependent factors flatten as
    ``i`` grows, so the largest index needs the tallest window), never
    shrinking them between blocks; the step is fixed by the first block.
    """

    def __init__(self, p, gamma0, cfg):
        self.p = p
        self.m = p.m
        self.logx = math.log((p.k + 1.0) * gamma0 / p.gamma_bar)
        self.logy = math.log(p.k / p.m)
        self.gamma0 = gamma0
        self.cfg = cfg
        self.ss = _SIGMA_S
        self.st = _sigma_t(p.m)
        self.ts = 0.0
        self.tt = 0.0
        self.h = math.inf

    def _update_grid(self, i):
        _, _, d = opra_term(self.p, self.gamma0, i, self.cfg)
        self.ts = max(self.ts, d["height_s"])
        self.tt = max(self.tt, d["height_t"])
        if not math.isfinite(self.h):
            # The trapezoid error of these analytic integrands is set by the
            # distance of the lines to the nearest pole, which does not depend
            # on i; the step from the first (well-conditioned) block is kept.
            # Later terms are tiny relative to their absolute integrand, so
            # their own relative-tolerance refinement would stall on round-off.
            self.h = d["step"]

    def terms(self, i_lo, i_hi, chunk=256):
        """Terms ``i_lo <= i < i_hi`` (capacity units) and error estimates."""
        self._update_grid(i_hi - 1)
        h = self.h
        ns = int(math.ceil(self.ts / h))
        nt = int(math.ceil(self.tt / h))
        ys = np.arange(-ns, ns + 1) * h
        yt = np.arange(-nt, nt + 1) * h
        s = self.ss + 1j * ys
        t = self.st + 1j * yt
        m = self.m
        base_s = 2 * sc.loggamma(s) - 2 * sc.loggamma(1.0 + s) - s * self.logx
        base_t = sc.loggamma(m - t) - t * self.logy
        ysum = np.arange(ys.size + yt.size - 1) * h + ys[0] + yt[0]
        lp = sc.loggamma(1.0 + self.ss + self.st + 1j * ysum)
        out = []
        errs = []
        norm = -sc.gammaln(m) - math.log(LN2)
        for c0 in range(i_lo, i_hi, chunk):
            idx = np.arange(c0, min(c0 + chunk, i_hi), dtype=float)[:, None]
            # Gamma(i+1+s)/i! and Gamma(i+t)/i!; the factorials are folded in
            # so that the logs stay O(log i)
            lf = sc.loggamma(idx + 1.0 + s) - sc.gammaln(idx + 1.0) + base_s
            lg = sc.loggamma(idx + t) - sc.gammaln(idx + 1.0) + base_t
            val, absum = bivariate_line_sum(lf, lg, lp, h)
            fac = math.exp(norm)
            out.append(val * fac)
            errs.append(absum * fac * 16 * np.finfo(float).eps)
        return np.concatenate(out), np.concatenate(errs)


def _tail_capacity(p, gamma0):
    """``E[log2(u0 Y / gamma0)^+]`` for ``Y ~ Gamma(m+1)``: the OPRA capacity of
    mixture components with large index."""
    m = p.m
    u0 = p.k * p.gamma_bar / (m * (p.k + 1.0))
    c = gamma0 / u0
    # c^{m+1} int_1^inf ln(t) t^m e^{-ct} dt / Gamma(m+1)
    log_pref = (m + 1.0) * math.log(c) - sc.gammaln(m + 1.0)
    return -gen_exp_integral_dnu(-m, c) * math.exp(log_pref) / LN2


def _double_rayleigh_opra(gamma0, gamma_bar):
    """``E[log2(gamma_bar E1 E2 / gamma0)^+]`` = ``2 K_0(2 sqrt(gamma0/gamma_bar)) / ln 2``."""
    return 2.0 * sc.k0(2.0 * math.sqrt(gamma0 / gamma_bar)) / LN2


def opra_closed(p, cutoff=None, n_max=16384, tol=1e-7, *, cfg=None, grid=None, acceleration="richardson"):
    """OPRA capacity from the EGBMG series.

    Parameters
    ----------
    p : ChannelParams
        Any ``m > 0``.
    cutoff : OpraCutoff or float, optional
        Solved cut-off; computed with :func:`opra_cutoff` if omitted.
    n_max : int
        Largest number of series terms.
    tol : float
        Absolute tolerance (bit/s/Hz) between successive extrapolated
        values.
    cfg : ContourConfig, optional
        Contour tolerance.
    grid : QuadratureGrid, optional
        Used only when the cut-off has to be solved.
    acceleration : {"richardson", "shanks"}
        ``"richardson"`` (default) closes the truncated mass with the
        limiting component capacity and eliminates the ``N^-2, N^-3, N^-4``
        error terms by Richardson extrapolation over doubling ``N``;
        ``"shanks"`` applies the Shanks transformation to the last seven
        plain partial sums (kept for comparison; it does not remove the
        algebraic ``1/N`` tail).

    Returns
    -------
    CapacityEstimate
        ``method="closed_form"``; diagnostics hold ``terms`` (series terms
        evaluated), ``history`` of the accelerated values and ``converged``.
    """
    cfg = cfg or ContourConfig()
    t0 = time.perf_counter()
    gamma0 = _gamma0(p, cutoff, grid)
    if p.k == 0.0:
        val = _double_rayleigh_opra(gamma0, p.gamma_bar)
        diag = {"terms": 1, "gamma0": gamma0, "path": "double_rayleigh", "converged": True}
        return CapacityEstimate(val, "closed_form", 1e-15 * val, diag)
    if acceleration not in ("richardson", "shanks"):
        raise DomainError("acceleration must be 'richardson' or 'shanks'")
    n_max = int(n_max)
    if n_max < 16:
        raise DomainError("n_max must be at least 16")
    batcher = _TermBatcher(p, gamma0, cfg)
    terms = np.zeros(0)
    term_err = np.zeros(0)

    def extend(n):
        nonlocal terms, term_err
        if terms.size < n:
            v, e = batcher.terms(terms.size, n)
            terms = np.concatenate([terms, v])
            term_err = np.concatenate([term_err, e])

    history = []
    converged = False
    err = math.inf
    if acceleration == "shanks":
        n = min(16, n_max)
        while True:
            extend(n)
            partial = np.cumsum(terms)
            acc = accelerate(partial, "shanks", window=7)
            history.append((n, float(acc.value)))
            if len(history) > 1:
                err = abs(history[-1][1] - history[-2][1])
                if err <= tol:
                    converged = True
                    break
            if 2 * n > n_max:
                break
            n *= 2
        value = history[-1][1]
    else:
        g_inf = _tail_capacity(p, gamma0)
        weights = np.zeros(0)

        def closure(n):
            nonlocal weights
            extend(n)
            if weights.size < n:
                weights = np.concatenate([weights, mixture_weights(p.m, p.k / p.m, n, start=weights.size)])
            rest = 1.0 - weights[:n].sum()
            return terms[:n].sum() + rest * g_inf

        n = 16
        values = []
        while n <= n_max:
            values.append(closure(n))
            if len(values) >= 2:
                acc = richardson_doubling(values)
                history.append((n, acc.value))
                err = acc.delta
                if len(values) >= 3 and err <= tol:
                    converged = True
                    break
            n *= 2
        if not history:
            raise ConvergenceError("n_max too small for the OPRA series")
        value = history[-1][1]
    err_total = err + float(term_err.sum())
    diag = {
        "terms": int(terms.size),
        "gamma0": gamma0,
        "history": history,
        "converged": converged,
        "acceleration": acceleration,
        "grid": {"sigma_s": batcher.ss, "sigma_t": batcher.st, "height_s": batcher.ts,
                 "height_t": batcher.tt, "step": batcher.h},
        "seconds": time.perf_counter() - t0,
    }
    if not converged:
        diag["warning"] = "series not converged to tolerance within n_max terms"
    return CapacityEstimate(max(value, 0.0), "closed_form", err_total, diag)
