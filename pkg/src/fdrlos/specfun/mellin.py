r"""Meijer G and bivariate Meijer G functions by Mellin--Barnes quadrature.

Both functions are written as integrals over vertical lines of gamma-function
ratios. A *gamma block* with parameter lists ``b_front``, ``a_front``,
``a_back`` and ``b_back`` denotes the kernel

.. math::

    \Psi(\tau) = \frac{\prod_j \Gamma(b^{f}_j + \tau)\,\prod_j \Gamma(1 - a^{f}_j - \tau)}
                      {\prod_j \Gamma(a^{b}_j + \tau)\,\prod_j \Gamma(1 - b^{b}_j - \tau)} ,

so that, in standard notation,
:math:`G^{m,n}_{p,q}\left({a_1..a_n;\,a_{n+1}..a_p \atop b_1..b_m;\,b_{m+1}..b_q}\,\middle|\,z\right)
= \frac{1}{2\pi i}\int_L \Psi(s)\, z^{-s}\,ds` and the bivariate function is

.. math::

    \frac{1}{(2\pi i)^2}\int_{L_s}\int_{L_t}\Psi_1(s+t)\,\Psi_2(s)\,\Psi_3(t)\,x^{-s}y^{-t}\,ds\,dt .

The lines are discretised with the trapezoid rule, which converges
geometrically for these analytic, exponentially decaying integrands. All
kernels are assembled from log-gamma values; exponentiation happens once,
after subtracting the running maximum. The bivariate sum over the tensor grid
collapses to a one-dimensional FFT convolution because ``Psi_1`` depends on
``s + t`` only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy import special as sc
from scipy.optimize import linprog, minimize_scalar
from scipy.signal import fftconvolve

from ..errors import ContourError, DivergenceError, DomainError, NumericalOverflowError

__all__ = [
    "GammaBlock",
    "MeijerGSpec",
    "EgbmgSpec",
    "ContourConfig",
    "MellinResult",
    "meijer_g",
    "egbmg",
    "bivariate_line_sum",
]

_EPS = np.finfo(float).eps
#: log of the relative magnitude below which the integrand is treated as zero
_LOG_TAIL = math.log(1e-16)


def _as_floats(values, name):
    out = tuple(float(v) for v in values)
    if not all(math.isfinite(v) for v in out):
        raise DomainError(f"{name}: parameters must be finite reals")
    return out


def _loggamma_recip_safe(z):
    """``loggamma`` with ``+inf`` at the poles, so that reciprocal-gamma
    factors evaluate to an exact zero instead of NaN."""
    out = sc.loggamma(z)
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(pole):
        out = np.where(pole, np.inf + 0j, out)
    return out


@dataclass(frozen=True)
class GammaBlock:
    """Parameter lists of one gamma-ratio kernel ``Psi``.

    Attributes
    ----------
    a_front : tuple of float
        Upper parameters entering as ``Gamma(1 - a - tau)`` in the numerator.
    a_back : tuple of float
        Upper parameters entering as ``Gamma(a + tau)`` in the denominator.
    b_front : tuple of float
        Lower parameters entering as ``Gamma(b + tau)`` in the numerator.
    b_back : tuple of float
        Lower parameters entering as ``Gamma(1 - b - tau)`` in the denominator.
    """

    a_front: Sequence[float] = ()
    a_back: Sequence[float] = ()
    b_front: Sequence[float] = ()
    b_back: Sequence[float] = ()

    def __post_init__(self):
        for name in ("a_front", "a_back", "b_front", "b_back"):
            object.__setattr__(self, name, _as_floats(getattr(self, name), name))

    @property
    def orders(self):
        """``(m, n, p, q)`` in standard Meijer-G notation."""
        return (
            len(self.b_front),
            len(self.a_front),
            len(self.a_front) + len(self.a_back),
            len(self.b_front) + len(self.b_back),
        )

    @property
    def decay_rate(self):
        """Exponential decay rate of ``|Psi(sigma + iy)|`` as ``|y| -> inf``."""
        num = len(self.b_front) + len(self.a_front)
        den = len(self.a_back) + len(self.b_back)
        return 0.5 * math.pi * (num - den)

    def log_kernel(self, tau):
        """Complex ``log Psi(tau)`` (principal log-gamma branches)."""
        tau = np.asarray(tau, dtype=complex)
        out = np.zeros(tau.shape, dtype=complex)
        for b in self.b_front:
            out += sc.loggamma(b + tau)
        for a in self.a_front:
            out += sc.loggamma(1.0 - a - tau)
        for a in self.a_back:
            out -= _loggamma_recip_safe(a + tau)
        for b in self.b_back:
            out -= _loggamma_recip_safe(1.0 - b - tau)
        return out

    def kernel_real(self, tau, *, skip=None):
        """Real value of ``Psi(tau)`` for real ``tau``.

        ``skip`` names one numerator factor, ``("b", j)`` or ``("a", j)``,
        to leave out (used when forming residues at its pole).
        """
        val = 1.0
        for j, b in enumerate(self.b_front):
            if skip != ("b", j):
                val *= sc.gamma(b + tau)
        for j, a in enumerate(self.a_front):
            if skip != ("a", j):
                val *= sc.gamma(1.0 - a - tau)
        for a in self.a_back:
            val *= sc.rgamma(a + tau)
        for b in self.b_back:
            val *= sc.rgamma(1.0 - b - tau)
        return float(val)

    def numerator_pole_multiplicity(self, tau, tol=1e-10):
        """Number of numerator gamma factors singular at real ``tau``."""
        count = 0
        for b in self.b_front:
            v = b + tau
            count += v <= tol and abs(v - round(v)) < tol
        for a in self.a_front:
            v = 1.0 - a - tau
            count += v <= tol and abs(v - round(v)) < tol
        return count

    def denominator_zero_multiplicity(self, tau, tol=1e-10):
        """Number of reciprocal-gamma factors vanishing at real ``tau``."""
        count = 0
        for a in self.a_back:
            v = a + tau
            count += v <= tol and abs(v - round(v)) < tol
        for b in self.b_back:
            v = 1.0 - b - tau
            count += v <= tol and abs(v - round(v)) < tol
        return count


@dataclass(frozen=True)
class MeijerGSpec(GammaBlock):
    """Parameters of a univariate Meijer G-function.

    ``G^{m,n}_{p,q}`` has ``n = len(a_front)``, ``p = n + len(a_back)``,
    ``m = len(b_front)`` and ``q = m + len(b_back)``.

    Raises
    ------
    ContourError
        If some ``a_front[j] - b_front[k]`` is a positive integer: a pole of
        the ascending family then coincides with one of the descending
        family, and no contour can separate them.
    """

    def __post_init__(self):
        super().__post_init__()
        for a in self.a_front:
            for b in self.b_front:
                d = a - b
                if d > 0.5 and abs(d - round(d)) < 1e-12:
                    raise ContourError(
                        f"pole families cannot be separated: a={a} and b={b} differ "
                        "by a positive integer"
                    )

    @classmethod
    def standard(cls, m, n, a, b):
        """Build from the standard notation ``G^{m,n}_{p,q}((a_p); (b_q))``."""
        a = list(a)
        b = list(b)
        return cls(a_front=a[:n], a_back=a[n:], b_front=b[:m], b_back=b[m:])

    def shifted(self, alpha):
        """Parameters of ``z^alpha G(z)``: every entry increased by ``alpha``."""
        return MeijerGSpec(
            a_front=[v + alpha for v in self.a_front],
            a_back=[v + alpha for v in self.a_back],
            b_front=[v + alpha for v in self.b_front],
            b_back=[v + alpha for v in self.b_back],
        )

    def inverted(self):
        """Parameters ``G^{n,m}_{q,p}(1-(b); 1-(a))`` representing ``G(1/z)``."""
        return MeijerGSpec(
            a_front=[1.0 - v for v in self.b_front],
            a_back=[1.0 - v for v in self.b_back],
            b_front=[1.0 - v for v in self.a_front],
            b_back=[1.0 - v for v in self.a_back],
        )


@dataclass(frozen=True)
class EgbmgSpec:
    """Parameters of the extended generalized bivariate Meijer G-function.

    Attributes
    ----------
    block1 : GammaBlock
        Kernel ``Psi_1`` evaluated at ``s + t``.
    block2 : GammaBlock
        Kernel ``Psi_2`` evaluated at ``s`` (paired with ``x^{-s}``).
    block3 : GammaBlock
        Kernel ``Psi_3`` evaluated at ``t`` (paired with ``y^{-t}``).
    """

    block1: GammaBlock = field(default_factory=GammaBlock)
    block2: GammaBlock = field(default_factory=GammaBlock)
    block3: GammaBlock = field(default_factory=GammaBlock)

    def __post_init__(self):
        for name in ("block1", "block2", "block3"):
            blk = getattr(self, name)
            if not isinstance(blk, GammaBlock):
                object.__setattr__(self, name, GammaBlock(**dict(blk)))

    @property
    def orders(self):
        """``(n1, m1, m2, n2, m3, n3)``: numerator counts of each block."""
        b1, b2, b3 = self.block1, self.block2, self.block3
        return (
            len(b1.a_front),
            len(b1.b_front),
            len(b2.b_front),
            len(b2.a_front),
            len(b3.b_front),
            len(b3.a_front),
        )


@dataclass(frozen=True)
class ContourConfig:
    """Discretisation of one vertical integration line.

    Attributes
    ----------
    sigma : float or None
        Abscissa of the line ``Re(s) = sigma``; chosen automatically if None.
    height : float or None
        Truncation ``|Im(s)| <= height``; chosen from the integrand decay
        (twice the height at which it falls below ``1e-16`` of its peak) if
        None.
    nodes : int
        Initial number of trapezoid nodes on ``[-height, height]``; the step
        is halved from there until the tolerance is met.
    tol : float
        Relative tolerance between successive refinements.
    """

    sigma: float | None = None
    height: float | None = None
    nodes: int = 64
    tol: float = 1e-10

    def __post_init__(self):
        if self.height is not None and not self.height > 0:
            raise DomainError("ContourConfig.height must be positive")
        if int(self.nodes) < 64:
            raise DomainError("ContourConfig.nodes must be at least 64")
        if not (0 < self.tol <= 1e-3):
            raise DomainError("ContourConfig.tol must lie in (0, 1e-3]")


class MellinResult(NamedTuple):
    """Value of a contour integral with its error estimate."""

    value: float
    err_est: float
    diagnostics: dict


# ---------------------------------------------------------------------------
# univariate


def _left_heads(block):
    return [-b for b in block.b_front]


def _right_heads(block):
    return [1.0 - a for a in block.a_front]


def _pole_list(block, lo, hi):
    """Poles of the numerator in ``[lo, hi]`` as ``(position, family, j, n)``."""
    poles = []
    for j, b in enumerate(block.b_front):
        head = -b
        if head >= lo:
            nmax = int(math.floor(head - lo))
            for n in range(nmax + 1):
                if head - n <= hi:
                    poles.append((head - n, "b", j, n))
    for j, a in enumerate(block.a_front):
        head = 1.0 - a
        if head <= hi:
            nmax = int(math.floor(hi - head))
            for n in range(nmax + 1):
                if head + n >= lo:
                    poles.append((head + n, "a", j, n))
    return poles


def _misplaced_poles(block, sigma):
    """Poles lying on the wrong side of the line ``Re(s) = sigma``."""
    out = []
    for j, b in enumerate(block.b_front):
        head = -b
        n = 0
        while head - n > sigma:
            out.append((head - n, "b", j, n))
            n += 1
    for j, a in enumerate(block.a_front):
        head = 1.0 - a
        n = 0
        while head + n < sigma:
            out.append((head + n, "a", j, n))
            n += 1
    return out


def _pole_distance(block, sigma):
    d = math.inf
    for c in block.b_front:
        v = c + sigma
        d = min(d, abs(v - round(v)) if v < 0.5 else v)
    for a in block.a_front:
        v = 1.0 - a - sigma
        d = min(d, abs(v - round(v)) if v < 0.5 else v)
    return d


def _choose_sigma(block, logz):
    lefts = _left_heads(block)
    rights = _right_heads(block)
    lo = max(lefts) if lefts else -math.inf
    hi = min(rights) if rights else math.inf
    if not lefts and not rights:
        raise DivergenceError("kernel has no gamma factors in its numerator")
    if lo < hi:
        if math.isfinite(lo) and math.isfinite(hi):
            margin = min(0.25 * (hi - lo), 0.5)
            a, b = lo + margin, hi - margin
        elif math.isfinite(lo):
            a, b = lo + 0.5, lo + 60.0
        else:
            a, b = hi - 60.0, hi - 0.5
        if b - a < 1e-12:
            return 0.5 * (a + b)

        def objective(sig):
            return float(np.real(block.log_kernel(complex(sig)))) - sig * logz

        res = minimize_scalar(objective, bounds=(a, b), method="bounded", options={"xatol": 1e-3})
        return float(res.x)
    # No straight separating line: pick the gap between consecutive poles
    # that minimises the number of misplaced poles, preferring wide gaps.
    poles = sorted({round(p[0], 12) for p in _pole_list(block, hi - 2.0, lo + 2.0)})
    cands = [hi - 1.0] + [0.5 * (u + v) for u, v in zip(poles[:-1], poles[1:])] + [lo + 1.0]
    widths = [1.0] + [v - u for u, v in zip(poles[:-1], poles[1:])] + [1.0]
    best = min(
        zip(cands, widths),
        key=lambda cw: (len(_misplaced_poles(block, cw[0])), -cw[1]),
    )
    return best[0]


def _residue_correction(block, sigma, logz):
    """Sum of residue terms converting the line integral into the G value."""
    total = 0.0
    terms = []
    for pos, fam, j, n in _misplaced_poles(block, sigma):
        mult = block.numerator_pole_multiplicity(pos)
        zeros = block.denominator_zero_multiplicity(pos)
        if mult - zeros <= 0:
            continue
        if mult > 1:
            raise ContourError(
                f"higher-order pole at s={pos} lies on the wrong side of the contour"
            )
        rest = block.kernel_real(pos, skip=(fam, j))
        term = (-1.0) ** n / math.factorial(n) * rest * math.exp(-pos * logz)
        terms.append((pos, term))
        total += term
    return total, terms


def _line_height(block, sigma, logz, nodes_hint=None):
    """Smallest ``Y`` beyond which the line integrand is below 1e-16 of its peak."""
    if block.decay_rate <= 0:
        raise DivergenceError("kernel does not decay along vertical lines")
    y_max = 16.0
    while True:
        y = np.linspace(0.0, y_max, int(8 * y_max) + 1)
        lv = np.real(block.log_kernel(sigma + 1j * y)) - sigma * logz
        peak = lv.max()
        above = np.nonzero(lv > peak + _LOG_TAIL)[0]
        last = y[above[-1]] if above.size else 0.0
        if last < 0.75 * y_max:
            return max(last + 1.0, 4.0), peak
        y_max *= 2.0
        if y_max > 1e5:
            raise DivergenceError("contour integrand does not decay within |Im s| <= 1e5")


def meijer_g(spec, z, cfg=None):
    """Evaluate the Meijer G-function ``G^{m,n}_{p,q}(z)`` for real ``z > 0``.

    Parameters
    ----------
    spec : MeijerGSpec
        Parameter blocks.
    z : float
        Positive argument.
    cfg : ContourConfig, optional
        Line placement and discretisation; defaults are automatic.

    Returns
    -------
    MellinResult
        ``value``, ``err_est`` (absolute) and ``diagnostics`` holding the
        line abscissa, truncation height, node count and the residue terms
        that were added.

    Notes
    -----
    When the pole families are separable only by a curved contour (some
    ``a_front - b_front`` is a non-integer exceeding 1), the integral is
    taken along a straight line through a gap between poles and the residues
    of the simple poles left on the wrong side are added explicitly.
    """
    if not isinstance(spec, MeijerGSpec):
        raise TypeError("spec must be a MeijerGSpec")
    z = float(z)
    if not z > 0:
        raise DomainError("meijer_g: z must be positive")
    cfg = cfg or ContourConfig()
    logz = math.log(z)
    sigma = cfg.sigma if cfg.sigma is not None else _choose_sigma(spec, logz)
    dist = _pole_distance(spec, sigma)
    if dist < 1e-8:
        raise ContourError(f"integration line Re(s)={sigma} passes through a pole")
    correction, res_terms = _residue_correction(spec, sigma, logz)

    y_min, _ = _line_height(spec, sigma, logz)
    height = cfg.height if cfg.height is not None else 2.0 * y_min
    h = min(0.25, dist / 3.0, 2.0 * height / cfg.nodes)
    n = int(math.ceil(height / h))
    h = height / n

    def integrand(y):
        lv = spec.log_kernel(sigma + 1j * y) - (sigma + 1j * y) * logz
        return lv

    # y >= 0 only: the integrand at -y is the complex conjugate of that at y.
    y = np.linspace(0.0, height, n + 1)
    lv = integrand(y)
    scale = float(np.max(lv.real))
    vals = np.exp(lv - scale)
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    total = float(np.real(np.dot(w, vals)))
    absum = float(np.dot(w, np.abs(vals)))
    est = h * total
    err = math.inf
    while True:
        ym = (np.arange(n) + 0.5) * h
        vm = np.exp(integrand(ym) - scale)
        total += float(np.real(vm.sum()))
        absum += float(np.abs(vm).sum())
        n *= 2
        h *= 0.5
        new = h * total
        err = abs(new - est)
        est = new
        if err <= cfg.tol * abs(est) or err <= 4 * _EPS * h * absum or n > 2**22:
            break
    floor = 8 * _EPS * h * absum
    tail = float(np.abs(vals[-1])) / max(spec.decay_rate, 1e-3)
    factor = math.exp(scale) / math.pi if scale < 700 else None
    if factor is None:
        raise NumericalOverflowError("meijer_g: value exceeds double precision")
    value = est * factor + correction
    err_est = (err + floor + tail) * factor
    diag = {
        "sigma": sigma,
        "height": height,
        "nodes": 2 * n + 1,
        "step": h,
        "residues": res_terms,
    }
    return MellinResult(float(value), float(err_est), diag)


# ---------------------------------------------------------------------------
# bivariate


def _constraints(spec):
    """Linear constraints ``c0 + cs*sigma_s + ct*sigma_t > 0`` on the lines."""
    rows = []
    for blk, cs, ct in ((spec.block1, 1.0, 1.0), (spec.block2, 1.0, 0.0), (spec.block3, 0.0, 1.0)):
        for b in blk.b_front:
            rows.append((b, cs, ct))
        for a in blk.a_front:
            rows.append((1.0 - a, -cs, -ct))
    return rows


def _choose_lines(spec):
    rows = _constraints(spec)
    if not rows:
        raise DivergenceError("bivariate kernel has no numerator gamma factors")
    # maximise delta subject to c0 + cs*ss + ct*st >= delta
    a_ub = [[-cs, -ct, 1.0] for _, cs, ct in rows]
    b_ub = [c0 for c0, _, _ in rows]
    res = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=[(-30, 30), (-30, 30), (None, 2.0)],
        method="highs",
    )
    if not res.success or res.x[2] <= 1e-9:
        raise ContourError("no pair of straight contours separates the pole families")
    # The margin optimum is not unique when a variable has poles on one side
    # only; among the optimal lines take those nearest the origin, so that
    # x^{-s} y^{-t} does not swamp the kernel (minimise |ss| + |st|).
    delta = float(res.x[2]) * (1.0 - 1e-9)
    a2 = [[-cs, -ct, 0.0, 0.0] for _, cs, ct in rows]
    b2 = [c0 - delta for c0, _, _ in rows]
    a2 += [[1.0, 0.0, -1.0, 0.0], [-1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0], [0.0, -1.0, 0.0, -1.0]]
    b2 += [0.0, 0.0, 0.0, 0.0]
    res2 = linprog(
        c=[0.0, 0.0, 1.0, 1.0],
        A_ub=a2,
        b_ub=b2,
        bounds=[(-30, 30), (-30, 30), (0, None), (0, None)],
        method="highs",
    )
    if res2.success:
        return float(res2.x[0]), float(res2.x[1])
    return float(res.x[0]), float(res.x[1])


def _line_margin(spec, ss, st):
    """Smallest distance between the lines and a numerator pole (in Re)."""
    d = math.inf
    for c0, cs, ct in _constraints(spec):
        v = c0 + cs * ss + ct * st
        d = min(d, abs(v - round(v)) if v < 0.5 else v)
    return d


def bivariate_line_sum(log_f, log_g, log_p, h):
    """Trapezoid sum of ``F(y_s) G(y_t) P(y_s + y_t)`` over a tensor grid.

    Parameters
    ----------
    log_f : ndarray, shape (..., n_s)
        Log of the ``s``-factor on a uniform grid of step ``h``.
    log_g : ndarray, shape (..., n_t)
        Log of the ``t``-factor on a uniform grid of the same step.
    log_p : ndarray, shape (n_s + n_t - 1,)
        Log of the ``s+t`` factor on the summed grid.
    h : float
        Grid step.

    Returns
    -------
    value : ndarray
        ``h^2 / (4 pi^2) * sum`` as a real array (leading batch shape).
    abs_sum : ndarray
        Same sum with absolute values (for cancellation estimates).

    Notes
    -----
    Each factor is normalised by its maximum modulus before exponentiation,
    and the scale factors are reinstated in log space at the end.
    """
    log_f = np.atleast_2d(log_f)
    log_g = np.atleast_2d(log_g)
    cf = log_f.real.max(axis=-1, keepdims=True)
    cg = log_g.real.max(axis=-1, keepdims=True)
    cp = float(log_p.real.max())
    f = np.exp(log_f - cf)
    g = np.exp(log_g - cg)
    p = np.exp(log_p - cp)
    conv = fftconvolve(f, g, axes=-1)
    total = np.real((conv * p).sum(axis=-1))
    aconv = fftconvolve(np.abs(f), np.abs(g), axes=-1)
    absum = (np.abs(aconv) * np.abs(p)).sum(axis=-1)
    logscale = cf[..., 0] + cg[..., 0] + cp + 2 * math.log(h) - 2 * math.log(2 * math.pi)
    if np.any(logscale > 700):
        raise NumericalOverflowError("bivariate Meijer G value exceeds double precision")
    sc_ = np.exp(logscale)
    return total * sc_, absum * sc_


def _egbmg_logs(spec, ss, st, logx, logy, ys, yt, log_scale=0.0):
    s = ss + 1j * ys
    t = st + 1j * yt
    lf = spec.block2.log_kernel(s) - s * logx - log_scale
    lg = spec.block3.log_kernel(t) - t * logy
    ysum = (np.arange(ys.size + yt.size - 1) * (ys[1] - ys[0])) + ys[0] + yt[0]
    lp = spec.block1.log_kernel(ss + st + 1j * ysum)
    return lf, lg, lp


def egbmg(spec, x, y, cfg_s=None, cfg_t=None, *, line_only=False, log_scale=0.0):
    """Evaluate the extended generalized bivariate Meijer G-function.

    Parameters
    ----------
    spec : EgbmgSpec
        The three gamma-ratio blocks.
    x, y : float
        Positive arguments (paired with ``s`` and ``t`` respectively).
    cfg_s, cfg_t : ContourConfig, optional
        Lines for the ``s`` and ``t`` integrals. If both abscissae are
        omitted they are placed by a linear program maximising the distance
        to the nearest pole.
    line_only : bool, optional
        If True, integrate along the given lines even when they do not
        separate the pole families (the caller is then responsible for the
        residue terms). The lines must still avoid the poles.
    log_scale : float, optional
        Return ``exp(-log_scale) * G`` (and its error) instead of ``G``;
        lets callers evaluate functions whose magnitude exceeds double
        precision but whose normalised value does not.

    Returns
    -------
    MellinResult

    Raises
    ------
    ContourError
        If the lines are not admissible.
    DivergenceError
        If the integrand does not decay within the search window.
    """
    x = float(x)
    y = float(y)
    if not (x > 0 and y > 0):
        raise DomainError("egbmg: x and y must be positive")
    cfg_s = cfg_s or ContourConfig()
    cfg_t = cfg_t or ContourConfig()
    if cfg_s.sigma is None or cfg_t.sigma is None:
        if line_only:
            raise DomainError("line_only evaluation requires explicit abscissae")
        ss, st = _choose_lines(spec)
        ss = cfg_s.sigma if cfg_s.sigma is not None else ss
        st = cfg_t.sigma if cfg_t.sigma is not None else st
    else:
        ss, st = float(cfg_s.sigma), float(cfg_t.sigma)
    if not line_only:
        bad = [r for r in _constraints(spec) if r[0] + r[1] * ss + r[2] * st <= 0]
        if bad:
            raise ContourError("the requested lines do not separate the pole families")
    margin = _line_margin(spec, ss, st)
    if margin < 1e-6:
        raise ContourError("an integration line passes through a pole")
    logx, logy = math.log(x), math.log(y)

    # truncation heights from a coarse scan of the tensor-grid magnitude
    hc = 0.25
    ts, tt = 12.0, 12.0
    for _ in range(40):
        ys = np.arange(-ts, ts + 0.5 * hc, hc)
        yt = np.arange(-tt, tt + 0.5 * hc, hc)
        lf, lg, lp = _egbmg_logs(spec, ss, st, logx, logy, ys, yt, log_scale)
        mag = lf.real[:, None] + lg.real[None, :]
        idx = np.arange(ys.size)[:, None] + np.arange(yt.size)[None, :]
        mag = mag + lp.real[idx]
        peak = mag.max()
        edge_s = max(mag[0].max(), mag[-1].max())
        edge_t = max(mag[:, 0].max(), mag[:, -1].max())
        grow_s = edge_s > peak + _LOG_TAIL
        grow_t = edge_t > peak + _LOG_TAIL
        if not (grow_s or grow_t):
            break
        if grow_s:
            ts *= 1.5
        if grow_t:
            tt *= 1.5
        if max(ts, tt) > 2000:
            raise DivergenceError("bivariate integrand does not decay within |Im| <= 2000")
    edge = max(edge_s, edge_t)
    ts = cfg_s.height if cfg_s.height is not None else 1.2 * ts
    tt = cfg_t.height if cfg_t.height is not None else 1.2 * tt
    tol = min(cfg_s.tol, cfg_t.tol)
    nodes = max(cfg_s.nodes, cfg_t.nodes)
    h = min(0.25, margin / 3.0, 2.0 * max(ts, tt) / nodes)
    prev = None
    while True:
        ns = int(math.ceil(ts / h))
        nt = int(math.ceil(tt / h))
        ys = np.arange(-ns, ns + 1) * h
        yt = np.arange(-nt, nt + 1) * h
        lf, lg, lp = _egbmg_logs(spec, ss, st, logx, logy, ys, yt, log_scale)
        val, absum = bivariate_line_sum(lf, lg, lp, h)
        val, absum = float(val[0]), float(absum[0])
        if prev is not None:
            err = abs(val - prev)
            if err <= tol * abs(val) or err <= 16 * _EPS * absum or h < 1e-3:
                break
        prev = val
        h *= 0.5
    floor = 16 * _EPS * absum
    tail = absum * math.exp(edge - peak)
    diag = {
        "sigma_s": ss,
        "sigma_t": st,
        "height_s": ts,
        "height_t": tt,
        "step": h,
        "nodes": (2 * ns + 1, 2 * nt + 1),
        "tail_rel": math.exp(edge - peak),
    }
    return MellinResult(val, err + floor + tail, diag)
