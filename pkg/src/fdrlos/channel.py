r"""Statistical model of the fluctuating double-Rayleigh with line-of-sight channel.

The received signal is ``S = omega0 * sqrt(xi) * exp(j*phi) + omega2 * G2 * G3``
with ``xi ~ Gamma(m, 1/m)`` (unit-mean shadowing of the line-of-sight term),
``phi ~ U[0, 2pi)``, ``G2, G3`` independent unit-variance circularly
symmetric complex normals, ``omega0**2 = k/(1+k)`` and
``omega2**2 = 1/(1+k)``. The instantaneous SNR is ``gamma = gamma_bar |S|^2``.

Conditioned on ``x = |G3|^2`` the channel is a shadowed Rician channel. Its
density is written here in the overflow-free form

.. math::

    f(\gamma \mid x) = (1-p)^{m-1}\,\lambda\,e^{-\lambda\gamma}\,
                       {}_1F_1(1-m;\,1;\,-q\lambda\gamma),

with :math:`p = k/(k+mx)`, :math:`q = k/(mx)` and
:math:`\lambda = m(k+1)/((k+mx)\bar\gamma)`. It is Kummer's transformation of
the textbook form
:math:`\frac{m^m(1+k_x)}{(m+k_x)^m\bar\gamma_x} e^{-(1+k_x)\gamma/\bar\gamma_x}
{}_1F_1(m;1;\frac{k_x(1+k_x)}{k_x+m}\frac{\gamma}{\bar\gamma_x})`, where
:math:`k_x = k/x` and :math:`\bar\gamma_x = (k+x)\bar\gamma/(k+1)`. The
unconditional density averages over ``x ~ Exp(1)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as sc
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, NumericalWarning

__all__ = [
    "ChannelParams",
    "QuadratureGrid",
    "conditional_pdf",
    "marginal_pdf",
    "conditional_expectation",
    "laguerre_average",
    "gauss_laguerre",
    "sample_snr",
]


@dataclass(frozen=True)
class ChannelParams:
    """Fading environment.

    Attributes
    ----------
    k : float
        Rician K-factor (linear), ``k >= 0``.
    m : float
        Shadowing shape parameter, ``m >= 0.5``.
    gamma_bar : float
        Average SNR (linear), ``gamma_bar > 0``.
    """

    k: float
    m: float
    gamma_bar: float

    def __post_init__(self):
        for name in ("k", "m", "gamma_bar"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"ChannelParams.{name} must be finite")
            object.__setattr__(self, name, v)
        if self.k < 0:
            raise DomainError("ChannelParams.k must be nonnegative")
        if self.m < 0.5:
            raise DomainError("ChannelParams.m must be at least 0.5")
        if not self.gamma_bar > 0:
            raise DomainError("ChannelParams.gamma_bar must be positive")

    @property
    def omega0_sq(self):
        """Line-of-sight power share ``k / (1 + k)``."""
        return self.k / (1.0 + self.k)

    @property
    def omega2_sq(self):
        """Scattered power share ``1 / (1 + k)``."""
        return 1.0 / (1.0 + self.k)

    @property
    def ratio(self):
        """The ratio ``k / m`` that governs the shadowing series."""
        return self.k / self.m

    def replace(self, **changes):
        """Copy with some fields changed."""
        fields = {"k": self.k, "m": self.m, "gamma_bar": self.gamma_bar}
        fields.update(changes)
        return ChannelParams(**fields)


@dataclass(frozen=True)
class QuadratureGrid:
    """Numerical integration settings for the two-step average.

    Attributes
    ----------
    laguerre_order : int
        Gauss--Laguerre nodes for the average over ``x ~ Exp(1)``.
    gamma_tol : float
        Relative tolerance of the inner integral over ``gamma``.
    max_doublings : int
        How many times the Laguerre order may be doubled while checking
        convergence of an outer average.
    outer_tol : float
        Change between successive orders accepted as converged: absolute
        for averages below one, relative above.
    """

    laguerre_order: int = 96
    gamma_tol: float = 1e-11
    max_doublings: int = 2
    outer_tol: float = 1e-8

    def __post_init__(self):
        if int(self.laguerre_order) < 32:
            raise DomainError("QuadratureGrid.laguerre_order must be at least 32")
        if not (0 < self.gamma_tol <= 1e-6):
            raise DomainError("QuadratureGrid.gamma_tol must lie in (0, 1e-6]")
        if self.max_doublings < 0:
            raise DomainError("QuadratureGrid.max_doublings must be nonnegative")


def _conditional_terms(x, p):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("x must be positive")
    k, m, gb = p.k, p.m, p.gamma_bar
    one_minus_p = m * x / (k + m * x)
    lam = m * (k + 1.0) / ((k + m * x) * gb)
    q = k / (m * x)
    pref = one_minus_p ** (m - 1.0)
    return pref, lam, q


_ASYMPTOTIC_ARG = 1e12


def _shadow_factor(pref, m, arg):
    """``pref * 1F1(1 - m; 1; -arg)`` without overflow for huge ``arg``.

    ``pref = (1 - p)^(m-1) = (1 + q)^(1-m)`` tends to zero as ``x -> 0`` while
    the Kummer function grows like ``arg^(m-1) / Gamma(m)``; beyond
    ``arg = 1e12`` the product is formed in logs from that leading term
    (relative error ``O(m^2 / arg)``).
    """
    pref, arg = np.broadcast_arrays(pref, arg)
    big = arg > _ASYMPTOTIC_ARG
    small_arg = np.where(big, 0.0, arg)
    out = pref * sc.hyp1f1(1.0 - m, 1.0, -small_arg)
    if np.any(big):
        with np.errstate(divide="ignore"):
            lead = np.exp(np.log(pref) + (m - 1.0) * np.log(np.where(big, arg, 1.0)) - sc.gammaln(m))
        out = np.where(big, lead, out)
    return out


def conditional_pdf(gamma, x, p):
    """Density of the SNR conditioned on ``x = |G3|^2``.

    Parameters
    ----------
    gamma : float or array_like
        Linear SNR values, ``>= 0``.
    x : float or array_like
        Conditioning value(s), ``> 0``; broadcast against ``gamma``.
    p : ChannelParams

    Returns
    -------
    float or ndarray
    """
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise DomainError("gamma must be nonnegative")
    pref, lam, q = _conditional_terms(x, p)
    t = lam * g
    out = lam * np.exp(-t) * _shadow_factor(pref, p.m, q * t)
    if np.ndim(out) == 0:
        return float(out)
    return out


def gauss_laguerre(order):
    """Gauss--Laguerre nodes and weights by the Golub--Welsch algorithm.

    Unlike the three-term-recurrence root polishing used by
    :func:`numpy.polynomial.laguerre.laggauss`, the symmetric tridiagonal
    eigenproblem stays finite for orders in the hundreds; weights of the
    largest nodes underflow harmlessly to zero.
    """
    n = int(order)
    i = np.arange(1, n)
    nodes, vecs = eigh_tridiagonal(2.0 * np.arange(n) + 1.0, i.astype(float))
    weights = vecs[0] ** 2
    return nodes, weights / weights.sum()


_laguerre = gauss_laguerre


def marginal_pdf(gamma, p, grid=None, full_output=False):
    """Unconditional SNR density by Gauss--Laguerre averaging over ``x``.

    Parameters
    ----------
    gamma : float or array_like
        Linear SNR values, ``>= 0``.
    p : ChannelParams
    grid : QuadratureGrid, optional
    full_output : bool
        If True, also return a dict with the largest relative change between
        the last two refinements (``err_est``) and a ``converged`` flag.

    Notes
    -----
    The order is doubled up to ``grid.max_doublings`` times. Values that
    still move by more than ``1e-6`` relative (a boundary layer at
    ``x -> 0``, met at small ``gamma`` when ``k`` is small) are recomputed
    with a trapezoid rule in ``ln x``; if that also fails, a
    :class:`NumericalWarning` is issued and the last estimate returned.
    """
    grid = grid or QuadratureGrid()
    g = np.atleast_1d(np.asarray(gamma, dtype=float))

    def at_order(n):
        xs, ws = _laguerre(n)
        vals = conditional_pdf(g[:, None], xs[None, :], p)
        return vals @ ws

    order = grid.laguerre_order
    cur = at_order(order)
    rel = np.full(g.shape, np.inf)
    for _ in range(max(grid.max_doublings, 1)):
        order *= 2
        nxt = at_order(order)
        rel = np.abs(nxt - cur) / np.maximum(np.abs(nxt), 1e-300)
        # densities underflowing to (near) zero are as converged as they get
        rel[np.maximum(np.abs(nxt), np.abs(cur)) < 1e-280] = 0.0
        cur = nxt
        if np.all(rel <= 1e-6):
            break
    # Entries with a boundary layer at x -> 0 (small gamma, small k): redo
    # them with the trapezoid rule in ln x.
    for j in np.nonzero(rel > 1e-6)[0]:
        gj = g[j]
        tol = 1e-9 * max(abs(cur[j]), 1e-300)
        est, d2, _, _ = _log_trapezoid_average(
            lambda xs: (conditional_pdf(gj, xs, p), np.zeros_like(xs)), tol
        )
        cur[j] = est
        rel[j] = d2 / max(abs(est), 1e-300)
    err = float(np.max(rel)) if rel.size else 0.0
    converged = err <= 1e-6
    if not converged:
        warnings.warn(
            f"marginal_pdf: Laguerre averaging not converged (rel. change {err:.2e})",
            NumericalWarning,
            stacklevel=2,
        )
    out = cur if np.ndim(gamma) else float(cur[0])
    if full_output:
        return out, {"err_est": float(err), "converged": converged, "order": order}
    return out


def _tail_extent(m):
    # t * exp(-t) * (1 + t)^max(m-1, 0) falls below ~1e-19 of its peak here
    return 45.0 + (m + 1.0) * math.log(45.0 + m)


def conditional_expectation(func, x, p, *, lower=0.0, tol=1e-11):
    """``E[func(gamma) ; gamma > lower | x]`` for an array of ``x`` values.

    Parameters
    ----------
    func : callable
        Vectorised function of the SNR, applied to a 2-D array
        (``x`` values by abscissae).
    x : array_like
        Positive conditioning values.
    p : ChannelParams
    lower : float
        Lower limit of the SNR integral (0 or a positive cut-off).
    tol : float
        Relative tolerance of the trapezoid refinement.

    Returns
    -------
    values, err_est : ndarray

    Notes
    -----
    For ``lower = 0`` the substitution ``gamma = exp(u) / lambda`` is used;
    for ``lower > 0``, ``gamma = lower * (1 + exp(w))``. Both map the
    integrand to a smooth function on the real line that decays
    exponentially to the left and double-exponentially to the right, so the
    trapezoid rule converges geometrically. The right end of the window is
    where the exponential envelope of the density is below about ``1e-19`` of
    its peak.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    pref, lam, q = _conditional_terms(x, p)
    t_max = _tail_extent(p.m)
    m = p.m
    pref = pref[:, None]
    lam_c = lam[:, None]
    q_c = q[:, None]
    if lower == 0.0:
        u_lo = np.full(x.shape, -42.0)
        u_hi = np.full(x.shape, math.log(t_max))

        def integrand(u):
            t = np.exp(u)
            dens = t * np.exp(-t) * _shadow_factor(pref, m, q_c * t)
            return func(t / lam_c) * dens

    else:
        lower = float(lower)
        u_lo = np.full(x.shape, -42.0)
        u_hi = np.log(np.maximum(t_max / (lam * lower) - 1.0, 1.0)) + 0.5

        def integrand(w):
            gam = lower * (1.0 + np.exp(w))
            t = lam_c * gam
            dens = lam_c * np.exp(-t) * _shadow_factor(pref, m, q_c * t)
            return func(gam) * dens * lower * np.exp(w)

    n = 257
    prev = None
    while True:
        s = np.linspace(0.0, 1.0, n)[None, :]
        u = u_lo[:, None] + (u_hi - u_lo)[:, None] * s
        vals = integrand(u)
        h = (u_hi - u_lo) / (n - 1)
        cur = h * (vals.sum(axis=1) - 0.5 * (vals[:, 0] + vals[:, -1]))
        if prev is not None:
            err = np.abs(cur - prev)
            scale = np.maximum(np.abs(cur), 1e-6 * np.max(np.abs(cur)))
            if np.all(err <= tol * scale) or n > 2**14:
                return cur, err
        prev = cur
        n = 2 * n - 1


def _log_trapezoid_average(cond, tol, h0=0.2, max_halvings=4):
    """``int_0^inf g(x) exp(-x) dx`` by the trapezoid rule in ``v = ln x``.

    Handles integrands with logarithmic behaviour at ``x -> 0`` (where
    Gauss--Laguerre converges only algebraically): after the substitution the
    integrand decays exponentially on the left and double-exponentially on
    the right.
    """
    v_lo, v_hi = -38.0, math.log(745.0)
    n = int(math.ceil((v_hi - v_lo) / h0))
    h = (v_hi - v_lo) / n
    v = v_lo + h * np.arange(n + 1)
    x = np.exp(v)
    vals, errs = cond(x)
    w = x * np.exp(-x)
    w[0] *= 0.5
    w[-1] *= 0.5
    acc = float(w @ vals)
    inner = float(w @ errs)
    est = h * acc
    delta = math.inf
    for _ in range(max_halvings):
        vm = v_lo + h * (np.arange(n) + 0.5)
        xm = np.exp(vm)
        vm_vals, vm_errs = cond(xm)
        wm = xm * np.exp(-xm)
        acc += float(wm @ vm_vals)
        inner += float(wm @ vm_errs)
        n *= 2
        h *= 0.5
        new = h * acc
        delta = abs(new - est)
        est = new
        if delta <= tol:
            break
    return est, delta, h * inner, 2 * n + 1


def laguerre_average(cond, grid=None):
    """Average a function of ``x`` against ``exp(-x)`` on ``[0, inf)``.

    Gauss--Laguerre quadrature of order ``grid.laguerre_order`` is doubled up
    to ``grid.max_doublings`` times; if successive orders still differ by
    more than ``grid.outer_tol``, the average is recomputed with a
    trapezoid rule in ``ln x``, which copes with the logarithmic behaviour
    at ``x -> 0`` that appears for small ``k`` at high SNR.

    Parameters
    ----------
    cond : callable
        Maps an array of ``x`` nodes to ``(values, err_est)`` arrays.
    grid : QuadratureGrid, optional

    Returns
    -------
    value : float
    err_est : float
        Change between the last two refinements plus the inner error bound.
    info : dict
        ``rule``, ``nodes``, ``converged`` and the inner error contribution.
    """
    grid = grid or QuadratureGrid()
    order = int(grid.laguerre_order)
    xs, ws = _laguerre(order)
    vals, errs = cond(xs)
    cur = float(ws @ vals)
    inner = float(ws @ errs)
    delta = 0.0 if grid.max_doublings == 0 else math.inf
    for _ in range(grid.max_doublings):
        order *= 2
        xs, ws = _laguerre(order)
        vals, errs = cond(xs)
        nxt = float(ws @ vals)
        inner = float(ws @ errs)
        delta = abs(nxt - cur)
        cur = nxt
        if delta <= grid.outer_tol * max(1.0, abs(cur)):
            break
    if delta <= grid.outer_tol * max(1.0, abs(cur)):
        info = {"rule": "laguerre", "nodes": order, "converged": True, "inner_err": inner}
        return cur, delta + inner, info
    tol = grid.outer_tol * max(1.0, abs(cur))
    est, d2, inner2, nodes = _log_trapezoid_average(cond, tol)
    converged = d2 <= tol
    if not converged:
        warnings.warn(
            f"average over x not converged (change {d2:.2e} with {nodes} nodes)",
            NumericalWarning,
            stacklevel=2,
        )
    info = {"rule": "log_trapezoid", "nodes": nodes, "converged": converged, "inner_err": inner2}
    return est, d2 + inner2, info


def sample_snr(p, rng, size=None):
    """Draw instantaneous SNR values from the physical channel model.

    Parameters
    ----------
    p : ChannelParams
    rng : numpy.random.Generator
        Explicit random stream (no global state is used).
    size : int or tuple, optional
        Output shape; a scalar is returned if omitted.

    Returns
    -------
    float or ndarray
        ``gamma_bar * |omega0 sqrt(xi) e^{j phi} + omega2 G2 G3|^2``.

    Notes
    -----
    ``xi`` is drawn with :meth:`numpy.random.Generator.standard_gamma`
    (an exact rejection sampler) and rescaled to unit mean.
    """
    shape = () if size is None else size
    xi = rng.standard_gamma(p.m, size=shape) / p.m
    phi = rng.uniform(0.0, 2.0 * math.pi, size=shape)
    g = rng.standard_normal(size=(4,) + (shape if isinstance(shape, tuple) else (shape,)))
    g2 = (g[0] + 1j * g[1]) * math.sqrt(0.5)
    g3 = (g[2] + 1j * g[3]) * math.sqrt(0.5)
    s = math.sqrt(p.omega0_sq) * np.sqrt(xi) * np.exp(1j * phi) + math.sqrt(p.omega2_sq) * g2 * g3
    out = p.gamma_bar * (s.real**2 + s.imag**2)
    if size is None:
        return float(out)
    return out
