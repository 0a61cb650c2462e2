"""Acceleration of slowly converging sequences of partial sums."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..errors import DomainError

__all__ = ["AccelerationResult", "accelerate", "shanks", "richardson", "richardson_doubling"]


class AccelerationResult(NamedTuple):
    """Accelerated limit estimate.

    Attributes
    ----------
    value : float
        Estimated limit.
    delta : float
        Absolute difference between the last two transformed values (a
        stability indicator; small means the transform has settled).
    degenerate : bool
        True if the transform hit a vanishing denominator and fell back to
        the last partial sum.
    """

    value: float
    delta: float
    degenerate: bool


def shanks(partial_sums):
    """One pass of the Shanks transformation.

    ``T_n = (S_{n+1} S_{n-1} - S_n^2) / (S_{n+1} - 2 S_n + S_{n-1})``.
    Entries with a vanishing denominator are replaced by ``S_{n+1}``.

    Returns
    -------
    transformed : ndarray
        ``len(partial_sums) - 2`` values.
    degenerate : bool
        Whether any denominator vanished.
    """
    s = np.asarray(partial_sums, dtype=float)
    s0, s1, s2 = s[:-2], s[1:-1], s[2:]
    den = s2 - 2.0 * s1 + s0
    scale = np.maximum(np.abs(s2), 1e-300)
    bad = np.abs(den) <= 64 * np.finfo(float).eps * scale
    safe = np.where(bad, 1.0, den)
    out = s2 - (s2 - s1) ** 2 / safe
    out = np.where(bad, s2, out)
    return out, bool(np.any(bad))


def richardson(partial_sums, order=4, start=1):
    """Richardson extrapolation in the style of Bender and Orszag.

    Assumes ``S_n = S + a_1/n + a_2/n^2 + ...`` and combines the last
    ``order + 1`` partial sums ``S_N .. S_{N+order}``:
    ``S ~ sum_k S_{N+k} (N+k)^order (-1)^{k+order} / (k! (order-k)!)``.

    Parameters
    ----------
    partial_sums : sequence of float
        ``partial_sums[j]`` is ``S_{start+j}``.
    order : int
        Extrapolation order (reduced if too few sums are given).
    start : int
        Index of the first partial sum.
    """
    s = np.asarray(partial_sums, dtype=float)
    order = min(order, s.size - 1)
    big_n = start + s.size - 1 - order
    k = np.arange(order + 1)
    n = (big_n + k).astype(float)
    coef = np.array(
        [(-1.0) ** (kk + order) / (math.factorial(kk) * math.factorial(order - kk)) for kk in k]
    )
    return float(np.sum(s[-(order + 1):] * n**order * coef))


def richardson_doubling(values, exponents=(2, 3, 4)):
    """Richardson table for values computed at ``N, 2N, 4N, ...``.

    Assumes ``E(N) = E + c_1 N^{-p_1} + c_2 N^{-p_2} + ...`` with the
    exponents ``p_l`` given, and eliminates them one level at a time:
    ``T_{j,l} = T_{j,l-1} + (T_{j,l-1} - T_{j-1,l-1}) / (2^{p_l} - 1)``.

    Parameters
    ----------
    values : sequence of float
        ``E(N 2^j)`` for ``j = 0, 1, ...`` (at least two).
    exponents : sequence of float
        Error exponents to eliminate, in increasing order.

    Returns
    -------
    AccelerationResult
        ``value`` is the highest-level entry of the last row, ``delta`` its
        difference to the same-level entry of the previous row.
    """
    e = [float(v) for v in values]
    if len(e) < 2:
        raise DomainError("richardson_doubling: at least two values are required")
    rows = [[e[0]]]
    for j in range(1, len(e)):
        row = [e[j]]
        for lvl in range(1, min(j, len(exponents)) + 1):
            d = row[lvl - 1] - rows[j - 1][lvl - 1]
            row.append(row[lvl - 1] + d / (2.0 ** exponents[lvl - 1] - 1.0))
        rows.append(row)
    last, prev = rows[-1], rows[-2]
    return AccelerationResult(float(last[-1]), float(abs(last[-1] - prev[-1])), False)


def accelerate(partial_sums, method="shanks", *, window=7, order=4, start=1):
    """Estimate the limit of a sequence of partial sums.

    Parameters
    ----------
    partial_sums : sequence of float
        At least three partial sums.
    method : {"shanks", "richardson"}
        ``"shanks"`` applies one Shanks pass to the last ``window`` sums;
        ``"richardson"`` applies :func:`richardson` of the given ``order``.
    window : int
        Number of trailing partial sums used by the Shanks pass.
    order : int
        Richardson order.
    start : int
        Index of the first partial sum (Richardson only).

    Returns
    -------
    AccelerationResult
    """
    s = np.asarray(partial_sums, dtype=float)
    if s.ndim != 1 or s.size < 3:
        raise DomainError("accelerate: at least three partial sums are required")
    if method == "shanks":
        tail = s[-window:]
        t, degenerate = shanks(tail)
        if degenerate and t.size and t[-1] == tail[-1]:
            return AccelerationResult(float(tail[-1]), float(abs(tail[-1] - tail[-2])), True)
        delta = float(abs(t[-1] - t[-2])) if t.size > 1 else float(abs(t[-1] - tail[-1]))
        return AccelerationResult(float(t[-1]), delta, degenerate)
    if method == "richardson":
        r1 = richardson(s, order=order, start=start)
        r0 = richardson(s[:-1], order=order, start=start)
        if not np.isfinite(r1):
            return AccelerationResult(float(s[-1]), float(abs(s[-1] - s[-2])), True)
        return AccelerationResult(r1, float(abs(r1 - r0)), False)
    raise DomainError(f"accelerate: unknown method {method!r}")
