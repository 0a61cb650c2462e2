"""Gamma family, confluent hypergeometric functions and exponential integrals.

The gamma-family functions and Kummer's ``M`` delegate to :mod:`scipy.special`;
Kummer's ``U`` and the generalized exponential integral are evaluated from
their Laplace-type integral representations, computed in log space so that
very large or very small values (as met in long capacity series) neither
overflow nor underflow.
"""

from __future__ import annotations

import numpy as np
from scipy import special as sc

from ..errors import DomainError, NumericalOverflowError

__all__ = [
    "ln_gamma",
    "gamma_sign",
    "digamma",
    "kummer_m",
    "kummer_m_scaled",
    "kummer_u",
    "log_kummer_u",
    "gen_exp_integral",
    "gen_exp_integral_dnu",
]


def _scalar_or_array(out, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return out.item() if isinstance(out, np.ndarray) else out
    return out


def _is_nonpositive_integer(x):
    x = np.asarray(x, dtype=float)
    return (x <= 0) & (x == np.round(x))


def ln_gamma(x):
    """Logarithm of the gamma function.

    Parameters
    ----------
    x : float, complex or array_like
        Argument. Real input returns ``log|Gamma(x)|``; complex input returns
        the principal branch of ``log Gamma(x)``, continuous along vertical
        lines, which is what Mellin--Barnes integrands require.

    Returns
    -------
    float, complex or ndarray

    Raises
    ------
    DomainError
        If any argument is a pole (a nonpositive integer).
    """
    arr = np.asarray(x)
    if np.iscomplexobj(arr):
        poles = (arr.imag == 0) & _is_nonpositive_integer(arr.real)
        if np.any(poles):
            raise DomainError("ln_gamma: argument is a pole of the gamma function")
        return _scalar_or_array(sc.loggamma(arr), x)
    arr = arr.astype(float)
    if np.any(_is_nonpositive_integer(arr)):
        raise DomainError("ln_gamma: argument is a pole of the gamma function")
    return _scalar_or_array(sc.gammaln(arr), x)


def gamma_sign(x):
    """Sign of ``Gamma(x)`` for real ``x`` (companion of :func:`ln_gamma`)."""
    arr = np.asarray(x, dtype=float)
    if np.any(_is_nonpositive_integer(arr)):
        raise DomainError("gamma_sign: argument is a pole of the gamma function")
    return _scalar_or_array(sc.gammasgn(arr), x)


def digamma(x):
    """Digamma function ``psi(x)`` for real ``x > 0``.

    For positive integers ``psi(n) = H_{n-1} - C_e`` with ``H`` the harmonic
    numbers and ``C_e`` the Euler--Mascheroni constant.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("digamma: argument must be positive")
    return _scalar_or_array(sc.psi(arr), x)


def _check_finite(out, name):
    if np.any(np.isinf(out)):
        raise NumericalOverflowError(f"{name}: result overflows double precision")
    if np.any(np.isnan(out)):
        raise DomainError(f"{name}: result undefined for the given arguments")
    return out


def kummer_m(a, b, z):
    """Kummer's confluent hypergeometric function ``M(a, b, z) = 1F1(a; b; z)``.

    Parameters
    ----------
    a, b : float or array_like
        Parameters; ``b`` must not be a nonpositive integer.
    z : float or array_like
        Argument, ``z >= 0``.

    Raises
    ------
    NumericalOverflowError
        If the value exceeds the double-precision range (use
        :func:`kummer_m_scaled` for large ``z``).
    """
    if np.any(_is_nonpositive_integer(b)):
        raise DomainError("kummer_m: b must not be a nonpositive integer")
    z_arr = np.asarray(z, dtype=float)
    if np.any(~(z_arr >= 0)):
        raise DomainError("kummer_m: z must be nonnegative")
    with np.errstate(over="ignore"):
        out = sc.hyp1f1(np.asarray(a, float), np.asarray(b, float), z_arr)
    return _scalar_or_array(_check_finite(np.asarray(out), "kummer_m"), a, b, z)


def kummer_m_scaled(a, b, z):
    """Exponentially scaled Kummer function ``exp(-z) M(a, b, z)``.

    Uses Kummer's transformation ``exp(-z) M(a, b, z) = M(b - a, b, -z)``,
    which stays finite where ``M`` itself overflows.
    """
    if np.any(_is_nonpositive_integer(b)):
        raise DomainError("kummer_m_scaled: b must not be a nonpositive integer")
    z_arr = np.asarray(z, dtype=float)
    if np.any(~(z_arr >= 0)):
        raise DomainError("kummer_m_scaled: z must be nonnegative")
    a_arr = np.asarray(a, float)
    b_arr = np.asarray(b, float)
    out = sc.hyp1f1(b_arr - a_arr, b_arr, -z_arr)
    return _scalar_or_array(_check_finite(np.asarray(out), "kummer_m_scaled"), a, b, z)


# ---------------------------------------------------------------------------
# log-space quadrature of unimodal positive integrands on the real line


def _lse_trapezoid(phi_vals, h):
    peak = phi_vals.max(axis=-1, keepdims=True)
    peak = np.where(np.isfinite(peak), peak, 0.0)
    s = np.exp(phi_vals - peak).sum(axis=-1)
    with np.errstate(divide="ignore"):
        return np.log(h * s) + peak[..., 0]


def _log_integral(phi, lo, hi, *, coarse_step=0.25, rtol=1e-13, max_points=2**14):
    """Return ``log int_lo^hi exp(phi(w)) dw`` for a batch of integrands.

    ``phi(rows, w)`` maps a ``(len(rows), n)`` array of abscissae to
    log-integrand values, row ``j`` of ``w`` belonging to batch element
    ``rows[j]``. The integrands must be
    essentially unimodal. A coarse scan locates the region where the
    integrand exceeds ``exp(-50)`` of its peak (widening ``[lo, hi]`` when the
    mass touches an end), then trapezoid sums on that window are refined by
    doubling until the relative change drops below ``rtol``. The trapezoid
    rule converges geometrically for such analytic, rapidly decaying
    integrands.

    Returns
    -------
    log_value, rel_err : ndarray
    """
    phi_rows = phi
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    all_rows = np.arange(lo.size)
    for _ in range(30):
        n_c = int(min(max(np.max(hi - lo) / coarse_step, 16), 40000)) + 1
        grid = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, n_c)[None, :]
        vals = phi_rows(all_rows, grid)
        vals = np.where(np.isnan(vals), -np.inf, vals)
        peak = vals.max(axis=1, keepdims=True)
        inside = vals >= peak - 50.0
        first = inside.argmax(axis=1)
        last = n_c - 1 - inside[:, ::-1].argmax(axis=1)
        grow_lo = first == 0
        grow_hi = last == n_c - 1
        if not (np.any(grow_lo) or np.any(grow_hi)):
            break
        span = hi - lo
        lo = np.where(grow_lo, lo - span, lo)
        hi = np.where(grow_hi, hi + span, hi)
    rows = np.arange(lo.size)
    step = (hi - lo) / (n_c - 1)
    wl = grid[rows, np.maximum(first - 2, 0)] - step
    wr = grid[rows, np.minimum(last + 2, n_c - 1)] + step
    out = np.empty(lo.size)
    err = np.full(lo.size, np.inf)
    active = np.arange(lo.size)
    n = 65
    prev = None
    while active.size:
        t = np.linspace(0.0, 1.0, n)
        sub_wl, sub_wr = wl[active], wr[active]
        grid = sub_wl[:, None] + (sub_wr - sub_wl)[:, None] * t[None, :]
        h = (sub_wr - sub_wl) / (n - 1)
        cur = _lse_trapezoid(phi_rows(active, grid), h)
        if prev is not None:
            delta = np.abs(np.expm1(prev - cur))
            err[active] = delta
            out[active] = cur
            done = (delta <= rtol) | (2 * n - 1 > max_points)
            active, cur = active[~done], cur[~done]
        prev = cur
        n = 2 * n - 1
    return out, err


def log_kummer_u(a, b, z):
    """Natural logarithm of Kummer's ``U(a, b, z)`` for ``a > 0`` and ``z > 0``.

    Evaluated from the integral representation
    ``U(a,b,z) = Gamma(a)^{-1} int_0^inf t^{a-1} (1+t)^{b-a-1} exp(-z t) dt``
    (positive in this regime) after the substitution ``t = exp(w)``.

    Returns
    -------
    log_u, rel_err : ndarray
        Broadcast result and its estimated relative error.
    """
    a, b, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, z)))
    shape = a.shape
    a, b, z = a.ravel(), b.ravel(), z.ravel()
    if np.any(~(a > 0)) or np.any(~(z > 0)):
        raise DomainError("log_kummer_u: requires a > 0 and z > 0")
    c = (b - a - 1.0)[:, None]
    aa = a[:, None]
    zz = z[:, None]

    def phi(rows, w):
        return aa[rows] * w + c[rows] * np.logaddexp(0.0, w) - zz[rows] * np.exp(w)

    lo = -60.0 / a - 40.0
    hi = np.log((60.0 + a + np.abs(b - a - 1.0)) / z + 1.0) + 2.0
    val, err = _log_integral(phi, lo, hi)
    val = val - sc.gammaln(a)
    return val.reshape(shape), err.reshape(shape)


def _kummer_u_positive_a(a, b, z):
    val, err = log_kummer_u(a, b, z)
    with np.errstate(over="ignore"):
        return np.exp(val), err


def kummer_u(a, b, z, full_output=False):
    """Kummer's confluent hypergeometric function of the second kind ``U(a, b, z)``.

    Parameters
    ----------
    a, b : float
        Parameters (scalars).
    z : float
        Argument, ``z > 0``.
    full_output : bool, optional
        If True, also return the estimated relative error.

    Notes
    -----
    For ``a > 0`` the integral representation is used directly. Otherwise
    Kummer's transformation ``U(a,b,z) = z^{1-b} U(a-b+1, 2-b, z)`` is applied
    when it yields a positive first parameter; for a nonpositive integer
    ``a = -n`` the terminating polynomial is summed; and in the remaining
    case the three-term recurrence in ``a`` is run downwards from two values
    with positive first parameter (the stable direction for ``U``).
    """
    a = float(a)
    b = float(b)
    z = float(z)
    if not z > 0:
        raise DomainError("kummer_u: z must be positive")
    if a > 0:
        val, err = _kummer_u_positive_a(a, b, z)
        val, err = float(val), float(err)
    elif a - b + 1.0 > 0:
        v, err = _kummer_u_positive_a(a - b + 1.0, 2.0 - b, z)
        val, err = float(np.exp((1.0 - b) * np.log(z)) * v), float(err)
    elif a == np.round(a):
        n = int(-a)
        s = np.arange(n + 1)
        terms = sc.comb(n, s) * sc.poch(b + s, n - s) * (-z) ** s
        val, err = float((-1) ** n * terms.sum()), float(np.finfo(float).eps * n)
    else:
        shift = int(np.ceil(-a)) + 1
        a_hi = a + shift
        u_next, e1 = _kummer_u_positive_a(a_hi + 1.0, b, z)
        u_cur, e2 = _kummer_u_positive_a(a_hi, b, z)
        u_next, u_cur = float(u_next), float(u_cur)
        aa = a_hi
        for _ in range(shift):
            u_prev = -(b - 2.0 * aa - z) * u_cur - aa * (aa - b + 1.0) * u_next
            u_next, u_cur = u_cur, u_prev
            aa -= 1.0
        val, err = u_cur, float(max(e1, e2)) * (shift + 1)
    if not np.isfinite(val):
        raise NumericalOverflowError("kummer_u: result overflows double precision")
    return (val, err) if full_output else val


def gen_exp_integral(nu, z):
    """Generalized exponential integral ``E_nu(z) = int_1^inf t^{-nu} exp(-z t) dt``.

    Computed as ``exp(-z) U(1, 2 - nu, z)``; ``E_0(z) = exp(-z)/z`` exactly.

    Parameters
    ----------
    nu : float or array_like
        Real order.
    z : float or array_like
        Argument, ``z > 0``.
    """
    nu_a, z_a = np.broadcast_arrays(np.asarray(nu, float), np.asarray(z, float))
    if np.any(~(z_a > 0)):
        raise DomainError("gen_exp_integral: z must be positive")
    logu, _ = log_kummer_u(np.ones_like(nu_a), 2.0 - nu_a, z_a)
    with np.errstate(over="ignore"):
        out = np.exp(logu - z_a)
    out = np.where(nu_a == 0, np.exp(-z_a) / z_a, out)
    return _scalar_or_array(_check_finite(out, "gen_exp_integral"), nu, z)


def gen_exp_integral_dnu(nu, z):
    """Derivative ``d E_nu(z) / d nu = -int_1^inf ln(t) t^{-nu} exp(-z t) dt``.

    Evaluated by log-space quadrature after ``t = 1 + exp(w)``.
    """
    nu_a, z_a = np.broadcast_arrays(np.asarray(nu, float), np.asarray(z, float))
    shape = nu_a.shape
    nu_f, z_f = nu_a.ravel(), z_a.ravel()
    if np.any(~(z_f > 0)):
        raise DomainError("gen_exp_integral_dnu: z must be positive")
    nn = nu_f[:, None]
    zz = z_f[:, None]

    def phi(rows, w):
        l1p = np.logaddexp(0.0, w)
        return np.log(l1p) - nn[rows] * l1p - zz[rows] * (1.0 + np.exp(w)) + w

    lo = np.full(nu_f.shape, -80.0)
    hi = np.log((60.0 + np.abs(nu_f)) / z_f + 1.0) + 2.0
    val, _ = _log_integral(phi, lo, hi)
    with np.errstate(over="ignore"):
        out = -np.exp(val).reshape(shape)
    return _scalar_or_array(_check_finite(out, "gen_exp_integral_dnu"), nu, z)
