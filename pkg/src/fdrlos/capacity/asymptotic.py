r"""Approximate capacities: small/large ``k/m`` forms and high-SNR asymptotes.

Mixture weights
---------------
Conditioned on ``x`` the SNR is a Gamma mixture: ``I | x ~ NegBin(m, p)``
with ``p = k/(k + m x)`` and ``gamma | I ~ Gamma(I + 1)``. Averaging the
negative-binomial law over ``x ~ Exp(1)`` gives the unconditional weights

.. math::

    P_i = \frac{1}{i!\,\Gamma(m)}\,G^{2,1}_{1,2}\!\left(\left.
          {1-m \atop i,\,1}\right| \frac{k}{m}\right)
        = m\,\frac{\Gamma(m+i)}{i!}\,z^i\,U(m+i, i, z),
    \qquad z = k/m,

which are evaluated through the Kummer ``U`` function. They sum to one and
decay like ``z m / i^2``.

High-SNR asymptotes
-------------------
With ``E[ln E_1] = -C_e`` for unit exponentials and
``E[ln Gamma(i+1)] = psi(i+1) = H_i - C_e``,

.. math::

    \bar C_{ORA}  &\simeq \log_2\frac{\bar\gamma}{k+1} - \frac{2C_e}{\ln 2}
                    + \frac{1}{\ln 2}\sum_i H_i P_i, \\
    \bar C_{OPRA} &\simeq \log_2\frac{\bar\gamma}{\gamma_0(k+1)}
                    - \frac{C_e}{\ln 2} + \frac{1}{\ln 2}\sum_i \psi(i+1) P_i .

The harmonic series converges slowly (terms ``~ ln(i)/i^2``). It is
truncated at ``N``, the remaining mass ``1 - sum_{i<N} P_i`` is assigned
the tail mean ``H_N + N psi'(N+1)`` of a ``1/i^2`` law (leaving an
error expanding in ``N^-2, N^-3, ...``), and a Richardson table over
doubling ``N`` removes the leading terms.
"""

from __future__ import annotations

import math
import time

import numpy as np
from scipy import special as sc

from ..errors import ConvergenceError, DomainError
from ..specfun import ContourConfig, MeijerGSpec, log_kummer_u, meijer_g, richardson_doubling
from ._types import LN2, CapacityEstimate, OpraCutoff, integer_m

__all__ = [
    "mixture_weights",
    "harmonic_mixture_mean",
    "ora_approx_low_ratio",
    "ora_approx_high_ratio",
    "ora_high_snr",
    "opra_high_snr",
]

EULER = float(np.euler_gamma)


def mixture_weights(m, z, n, start=0):
    """Weights ``P_start .. P_{n-1}`` of the Gamma mixture of the SNR.

    Parameters
    ----------
    m : float
        Shadowing parameter, ``m > 0``.
    z : float
        Ratio ``k/m >= 0``.
    n : int
        One past the last index.
    start : int, optional
        First index.

    Returns
    -------
    ndarray
        ``P_i = m Gamma(m+i)/i! z^i U(m+i, i, z)``.
    """
    n = int(n)
    start = int(start)
    if not 0 <= start < n:
        raise DomainError("mixture_weights: need 0 <= start < n")
    if not (m > 0 and z >= 0):
        raise DomainError("mixture_weights: need m > 0 and z >= 0")
    i = np.arange(start, n, dtype=float)
    if z == 0:
        return (i == 0).astype(float)
    # chunked: the U evaluation works on (indices x quadrature nodes) arrays
    lu = np.concatenate(
        [log_kummer_u(m + c, c, np.full(c.size, float(z)))[0] for c in np.array_split(i, -(-i.size // 1024))]
    )
    logp = math.log(m) + sc.gammaln(m + i) - sc.gammaln(i + 1) + i * math.log(z) + lu
    return np.exp(logp)


def _tail_mean_harmonic(n):
    """``E[H_I | I >= n]`` for tail weights proportional to ``1/(i(i+1))``."""
    return sc.digamma(n + 1.0) + EULER + n * sc.polygamma(1, n + 1.0)


def harmonic_mixture_mean(m, z, tol=1e-9, n_max=16384, *, factorial_power=1):
    """``sum_i H_i P_i / (i!)^(factorial_power - 1)``.

    Parameters
    ----------
    m, z : float
        Shadowing parameter and ``k/m``.
    tol : float
        Absolute tolerance (natural units).
    n_max : int
        Largest truncation index.
    factorial_power : {1, 2}
        ``1`` gives the mean harmonic number ``E[H_I]``. ``2`` gives the
        variant with an extra ``1/i!`` (a candidate reading of the
        high-SNR series kept for comparison; it is not a mixture mean).

    Returns
    -------
    value : float
    err_est : float
    diagnostics : dict
        ``terms`` (final truncation), ``history`` of extrapolated values,
        ``converged``.
    """
    if factorial_power not in (1, 2):
        raise DomainError("factorial_power must be 1 or 2")
    if z == 0:
        return 0.0, 0.0, {"terms": 1, "history": [0.0], "converged": True}
    if factorial_power == 2:
        n = 64
        while True:
            i = np.arange(n, dtype=float)
            w = mixture_weights(m, z, n)
            h = sc.digamma(i + 1) + EULER
            terms = h * w * np.exp(-sc.gammaln(i + 1))
            if abs(terms[-1]) < 1e-3 * tol or n >= n_max:
                break
            n *= 2
        return float(terms.sum()), float(abs(terms[-1])), {"terms": n, "history": [], "converged": True}

    weights = np.zeros(0)
    s = r = None

    def extend(n):
        nonlocal weights, s, r
        if weights.size < n:
            weights = np.concatenate([weights, mixture_weights(m, z, n, start=weights.size)])
            harm = sc.digamma(np.arange(n) + 1.0) + EULER
            s = np.cumsum(harm * weights)
            r = 1.0 - np.cumsum(weights)

    closed = {}

    def closure(n):
        if n not in closed:
            extend(n)
            closed[n] = s[n - 1] + r[n - 1] * _tail_mean_harmonic(n)
        return closed[n]

    n = 16
    history = []
    values = []
    err = math.inf
    while n <= n_max:
        values.append(closure(n))
        if len(values) >= 2:
            acc = richardson_doubling(values)
            history.append((n, acc.value))
            err = acc.delta
            if len(values) >= 3 and err <= tol:
                break
        n *= 2
    converged = err <= tol
    if not history:
        raise ConvergenceError("n_max too small for the harmonic series (need >= 32)")
    diag = {"terms": history[-1][0], "history": history, "converged": converged}
    return history[-1][1], err, diag


# ---------------------------------------------------------------------------
# k/m-ratio approximations


def ora_approx_low_ratio(p, cfg=None):
    """Two-term ORA approximation for small ``k/m``.

    .. math::

        \\bar C \\approx \\frac{1}{\\ln 2} G^{1,4}_{4,2}\\!\\left(\\left.
        {1,1,0,0 \\atop 1,0}\\right|\\frac{\\bar\\gamma}{k+1}\\right)
        + \\frac{k(m-1)}{m\\ln 2} G^{1,4}_{4,2}\\!\\left(\\left.
        {1,1,-1,1 \\atop 1,0}\\right|\\frac{\\bar\\gamma}{k+1}\\right)

    The first term is the capacity of the product of two unit
    exponentials at SNR ``gamma_bar/(k+1)``; the second is the first-order
    correction in ``k``. Exactly two Meijer-G terms are evaluated for every
    ``m``.

    Parameters
    ----------
    p : ChannelParams
    cfg : ContourConfig, optional

    Returns
    -------
    CapacityEstimate
        ``method="approx_low_ratio"``.
    """
    cfg = cfg or ContourConfig()
    w = p.gamma_bar / (p.k + 1.0)
    g0 = meijer_g(MeijerGSpec.standard(1, 4, [1.0, 1.0, 0.0, 0.0], [1.0, 0.0]), w, cfg)
    g1 = meijer_g(MeijerGSpec.standard(1, 4, [1.0, 1.0, -1.0, 1.0], [1.0, 0.0]), w, cfg)
    c1 = p.k * (p.m - 1.0) / p.m
    val = (g0.value + c1 * g1.value) / LN2
    err = (g0.err_est + abs(c1) * g1.err_est) / LN2
    diag = {"terms": 2, "g0": g0.value, "g1": g1.value}
    return CapacityEstimate(max(val, 0.0), "approx_low_ratio", err, diag)


def _g4323(m, i, l, u, cfg):
    spec = MeijerGSpec.standard(2, 3, [1.0, 1.0, -float(i), m - 1.0], [1.0, l + m - 1.0, 0.0])
    return meijer_g(spec, u, cfg)


def ora_approx_high_ratio(p, n_terms=0, cfg=None):
    """ORA approximation for large ``k/m`` (integer ``m``).

    Parameters
    ----------
    p : ChannelParams
        ``m`` must be an integer.
    n_terms : int
        Number ``n`` of terms of the inner expansion in ``m/k``:

        .. math::

            \\bar C \\approx \\frac{\\Gamma(m)}{\\ln 2}\\sum_{i<m}\\sum_{l<n}
            \\frac{(-1)^l z^{i+1-m-l} (m-i)_l}{(i!)^2\\, l!}
            G^{2,3}_{4,3}\\!\\left(\\left.{1,1,-i,m-1 \\atop 1,\\,l+m-1,\\,0}
            \\right| u\\right),

        with ``z = k/m`` and ``u = k gamma_bar/(m(k+1))``. ``n_terms = 0``
        selects the simplified single-sum form

        .. math::

            \\bar C \\approx \\frac{k\\,\\Gamma(m)}{m \\ln 2}\\sum_{i<m}
            \\frac{(m/(k+m))^{m-i}}{(i!)^2}
            G^{2,3}_{4,3}\\!\\left(\\left.{1,1,-i,m-1 \\atop 1,\\,m-1,\\,0}
            \\right| u\\right).
    cfg : ContourConfig, optional

    Returns
    -------
    CapacityEstimate
        ``method="approx_high_ratio"``.
    """
    m = integer_m(p.m)
    if m is None:
        raise DomainError("ora_approx_high_ratio requires an integer shadowing parameter m")
    n_terms = int(n_terms)
    if n_terms < 0:
        raise DomainError("n_terms must be nonnegative")
    if p.k <= 0:
        raise DomainError("ora_approx_high_ratio requires k > 0")
    cfg = cfg or ContourConfig()
    k = p.k
    z = k / m
    u = k * p.gamma_bar / (m * (k + 1.0))
    val = 0.0
    err = 0.0
    count = 0
    if n_terms == 0:
        for i in range(m):
            coef = (
                k
                / m
                * math.exp(sc.gammaln(m) - 2 * sc.gammaln(i + 1))
                * (m / (k + m)) ** (m - i)
            )
            r = _g4323(m, i, 0, u, cfg)
            val += coef * r.value
            err += abs(coef) * r.err_est
            count += 1
        form = "simplified"
    else:
        for i in range(m):
            for l in range(n_terms):
                coef = (
                    (-1.0) ** l
                    * math.exp(
                        sc.gammaln(m)
                        + (i + 1 - m - l) * math.log(z)
                        - 2 * sc.gammaln(i + 1)
                        - sc.gammaln(l + 1)
                    )
                    * sc.poch(m - i, l)
                )
                r = _g4323(m, i, l, u, cfg)
                val += coef * r.value
                err += abs(coef) * r.err_est
                count += 1
        form = "expansion"
    val /= LN2
    err /= LN2
    diag = {"form": form, "n_terms": n_terms, "terms": count}
    return CapacityEstimate(max(val, 0.0), "approx_high_ratio", err, diag)


# ---------------------------------------------------------------------------
# high SNR


def ora_high_snr(p, series_tol=1e-7, *, factorial_power=1, n_max=16384):
    """High-SNR asymptote of the ORA capacity.

    Parameters
    ----------
    p : ChannelParams
    series_tol : float
        Absolute tolerance of the harmonic series (bit/s/Hz).
    factorial_power : {1, 2}
        Weight ``H_i / (i!)^power`` of the series in its Meijer-G form.
        ``1`` is the consistent reading (the series is then the mean
        harmonic number of the mixture index) and the default; ``2`` is
        provided for comparison only.
    n_max : int
        Largest truncation index of the series.

    Returns
    -------
    CapacityEstimate
        ``method="high_snr"``; ``diagnostics["certified"]`` is False when
        ``k/m >= 1``, outside the range for which convergence of the
        original series is proven (the mixture-weight evaluation used here
        converges for all ``k/m``).
    """
    t0 = time.perf_counter()
    z = p.k / p.m
    eh, err, info = harmonic_mixture_mean(p.m, z, series_tol * LN2, n_max, factorial_power=factorial_power)
    val = math.log2(p.gamma_bar / (p.k + 1.0)) - 2.0 * EULER / LN2 + eh / LN2
    diag = dict(info, certified=z < 1.0, factorial_power=factorial_power, seconds=time.perf_counter() - t0)
    return CapacityEstimate(max(val, 0.0), "high_snr", err / LN2, diag)


def opra_high_snr(p, cutoff, series_tol=1e-7, *, n_max=16384):
    """High-SNR asymptote of the OPRA capacity.

    Parameters
    ----------
    p : ChannelParams
    cutoff : OpraCutoff or float
        Cut-off SNR ``gamma0``.
    series_tol : float
        Absolute tolerance of the digamma series (bit/s/Hz).
    n_max : int

    Returns
    -------
    CapacityEstimate
        ``method="high_snr"``.

    Notes
    -----
    ``sum_i psi(i+1) P_i = E[H_I] - C_e``, so this equals the ORA asymptote
    evaluated at ``gamma_bar / gamma0``.
    """
    gamma0 = cutoff.gamma0 if isinstance(cutoff, OpraCutoff) else float(cutoff)
    if not gamma0 > 0:
        raise DomainError("opra_high_snr: gamma0 must be positive")
    t0 = time.perf_counter()
    z = p.k / p.m
    eh, err, info = harmonic_mixture_mean(p.m, z, series_tol * LN2, n_max)
    series = eh - EULER
    val = math.log2(p.gamma_bar / (gamma0 * (p.k + 1.0))) - EULER / LN2 + series / LN2
    diag = dict(info, certified=z < 1.0, gamma0=gamma0, seconds=time.perf_counter() - t0)
    return CapacityEstimate(max(val, 0.0), "high_snr", err / LN2, diag)
