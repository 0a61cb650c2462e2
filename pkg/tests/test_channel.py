"""Channel model: densities, quadrature averaging and the physical sampler.

Oracles: mpmath evaluation of the textbook (untransformed) conditional
density, scipy quadrature, the noncentral chi-square law of the unshadowed
model, the Bessel-K law of the double-Rayleigh product, and Monte-Carlo
samples of the physical channel.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special, stats

from fdrlos.channel import (
    ChannelParams,
    QuadratureGrid,
    conditional_expectation,
    conditional_pdf,
    gauss_laguerre,
    laguerre_average,
    marginal_pdf,
    sample_snr,
)
from fdrlos.errors import DomainError

# ---------------------------------------------------------------- parameters


def test_params_validation():
    with pytest.raises(DomainError):
        ChannelParams(-1.0, 2.0, 10.0)
    with pytest.raises(DomainError):
        ChannelParams(1.0, 0.4, 10.0)
    with pytest.raises(DomainError):
        ChannelParams(1.0, 2.0, 0.0)
    with pytest.raises(DomainError):
        ChannelParams(float("nan"), 2.0, 1.0)


@given(st.floats(min_value=0.0, max_value=1e4))
def test_unit_power_split(k):
    p = ChannelParams(k, 2.0, 1.0)
    assert p.omega0_sq + p.omega2_sq == pytest.approx(1.0, abs=1e-15)


def test_replace_and_ratio():
    p = ChannelParams(20.0, 2.0, 10.0)
    assert p.ratio == 10.0
    assert p.replace(m=4.0) == ChannelParams(20.0, 4.0, 10.0)


def test_grid_validation():
    with pytest.raises(DomainError):
        QuadratureGrid(laguerre_order=16)
    with pytest.raises(DomainError):
        QuadratureGrid(gamma_tol=1e-3)


# ---------------------------------------------------------------- conditional pdf


def _textbook_conditional(g, x, p):
    """Untransformed shadowed-Rician form, evaluated with mpmath at 50 digits
    (the exponential and the Kummer function cancel strongly)."""
    with mp.workdps(50):
        k, m, gb, x, g = (mp.mpf(v) for v in (p.k, p.m, p.gamma_bar, x, g))
        kx = k / x
        gbx = (k + x) * gb / (k + 1)
        pref = m**m * (1 + kx) / ((m + kx) ** m * gbx)
        return float(pref * mp.exp(-(1 + kx) * g / gbx) * mp.hyp1f1(m, 1, kx * (1 + kx) / (kx + m) * g / gbx))


@pytest.mark.parametrize(
    "k,m,gb,x,g",
    [(2.0, 3.0, 5.0, 1.0, 3.0), (20.0, 2.0, 10.0, 0.3, 12.0), (0.5, 0.7, 1.0, 2.5, 0.1), (200.0, 4.5, 100.0, 0.01, 80.0)],
)
def test_conditional_pdf_matches_textbook_form(k, m, gb, x, g):
    p = ChannelParams(k, m, gb)
    assert conditional_pdf(g, x, p) == pytest.approx(_textbook_conditional(g, x, p), rel=1e-10)


def test_conditional_pdf_at_zero():
    p = ChannelParams(2.0, 3.0, 5.0)
    x = 1.0
    kx = p.k / x
    gbx = (p.k + x) / (p.k + 1) * p.gamma_bar
    expected = p.m**p.m * (1 + kx) / ((p.m + kx) ** p.m * gbx)
    assert conditional_pdf(0.0, x, p) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("x", [0.05, 1.0, 4.0])
def test_conditional_pdf_normalised(x):
    p = ChannelParams(2.0, 3.0, 5.0)
    val, _ = integrate.quad(lambda g: conditional_pdf(g, x, p), 0, np.inf, epsabs=0, epsrel=1e-12, limit=200)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_conditional_pdf_k_zero_is_exponential():
    p = ChannelParams(0.0, 2.0, 7.0)
    x = 0.6
    g = np.linspace(0, 50, 11)
    lam = 1.0 / (x * p.gamma_bar)
    np.testing.assert_allclose(conditional_pdf(g, x, p), lam * np.exp(-lam * g), rtol=1e-13)


def test_conditional_pdf_against_conditional_monte_carlo():
    """Empirical CDF of the channel with |G3|^2 held at x."""
    p = ChannelParams(2.0, 3.0, 5.0)
    x = 0.7
    rng = np.random.default_rng(12345)
    n = 400_000
    xi = rng.standard_gamma(p.m, n) / p.m
    phi = rng.uniform(0, 2 * np.pi, n)
    g2 = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    s = np.sqrt(p.omega0_sq * xi) * np.exp(1j * phi) + np.sqrt(p.omega2_sq * x) * g2
    samples = p.gamma_bar * np.abs(s) ** 2
    for q in (0.5, 2.0, 5.0, 10.0):
        cdf, _ = integrate.quad(lambda g: conditional_pdf(g, x, p), 0, q, epsabs=1e-13)
        emp = np.mean(samples <= q)
        assert abs(emp - cdf) < 4 * math.sqrt(cdf * (1 - cdf) / n)


def test_conditional_pdf_domain():
    p = ChannelParams(2.0, 3.0, 5.0)
    with pytest.raises(DomainError):
        conditional_pdf(1.0, 0.0, p)
    with pytest.raises(DomainError):
        conditional_pdf(-1.0, 1.0, p)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=1e3),
    st.floats(min_value=0.5, max_value=20.0),
    st.floats(min_value=1e-2, max_value=1e4),
    st.floats(min_value=1e-6, max_value=30.0),
    st.floats(min_value=1e-6, max_value=1e3),
)
def test_conditional_pdf_positive_and_finite(k, m, gb, x, ratio):
    p = ChannelParams(k, m, gb)
    v = conditional_pdf(ratio * gb, x, p)
    assert np.isfinite(v) and v >= 0
    ref = _textbook_conditional(ratio * gb, x, p)
    if ref > 1e-290:
        assert v > 0
        assert v == pytest.approx(ref, rel=1e-8)


def test_conditional_pdf_small_x_limit_is_finite():
    p = ChannelParams(200.0, 4.0, 1e4)
    v = conditional_pdf(1e-12, 1e-300, p)
    assert np.isfinite(v) and v >= 0


# ---------------------------------------------------------------- marginal pdf


def _log_grid_moments(p, n=6000):
    """Integral of f and gamma*f by a trapezoid rule in ln(gamma)."""
    u = np.linspace(math.log(p.gamma_bar) - 45, math.log(p.gamma_bar) + math.log(80 + 4 * p.m), n)
    g = np.exp(u)
    f = marginal_pdf(g, p)
    w = np.full(n, u[1] - u[0])
    w[[0, -1]] *= 0.5
    return float(np.sum(w * g * f)), float(np.sum(w * g * g * f))


@pytest.mark.parametrize("k,m,gb", [(0.1, 1.0, 10.0), (20.0, 2.0, 10.0), (200.0, 2.0, 100.0)])
def test_marginal_pdf_normalisation_and_mean(k, m, gb):
    p = ChannelParams(k, m, gb)
    total, mean = _log_grid_moments(p)
    assert total == pytest.approx(1.0, abs=1e-6)
    assert mean == pytest.approx(gb, rel=1e-4)


@pytest.mark.parametrize("k", [0.0, 3.0, 150.0])
@pytest.mark.parametrize("m", [0.5, 2.0, 7.5])
@pytest.mark.parametrize("gb", [0.5, 10.0, 1000.0])
def test_moments_sweep_by_two_step_average(k, m, gb):
    p = ChannelParams(k, m, gb)
    one, _, _ = laguerre_average(lambda x: conditional_expectation(lambda g: np.ones_like(g), x, p), QuadratureGrid())
    mean, _, _ = laguerre_average(lambda x: conditional_expectation(lambda g: g, x, p), QuadratureGrid())
    assert one == pytest.approx(1.0, abs=1e-6)
    assert mean == pytest.approx(gb, rel=1e-4)


def test_marginal_pdf_double_rayleigh_oracle():
    """k = 0: gamma / gamma_bar is a product of two Exp(1) variables."""
    p = ChannelParams(0.0, 2.0, 4.0)
    g = np.array([0.01, 0.5, 2.0, 9.0, 30.0])
    y = g / p.gamma_bar
    expected = 2.0 * special.k0(2.0 * np.sqrt(y)) / p.gamma_bar
    np.testing.assert_allclose(marginal_pdf(g, p), expected, rtol=1e-6)


def test_marginal_pdf_full_output():
    p = ChannelParams(20.0, 2.0, 10.0)
    v, info = marginal_pdf(3.0, p, full_output=True)
    assert info["converged"] and info["err_est"] < 1e-6 and v > 0


def test_marginal_pdf_against_histogram():
    """Chi-square goodness of fit of physical samples to binned marginal mass."""
    p = ChannelParams(20.0, 2.0, 10.0)
    rng = np.random.default_rng(2024)
    samples = sample_snr(p, rng, size=10**6)
    edges = np.quantile(samples, np.linspace(0, 1, 51)[1:-1])
    edges = np.concatenate([[0.0], edges, [np.inf]])
    counts = np.histogram(samples, edges)[0]
    probs = []
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(lambda g: marginal_pdf(g, p), a, b, epsabs=1e-12, epsrel=1e-10, limit=200)
        probs.append(val)
    probs = np.array(probs)
    assert probs.sum() == pytest.approx(1.0, abs=1e-6)
    chi2 = np.sum((counts - samples.size * probs) ** 2 / (samples.size * probs))
    assert stats.chi2.sf(chi2, len(probs) - 1) > 1e-3


# ---------------------------------------------------------------- quadrature pieces


def test_gauss_laguerre_matches_numpy():
    nodes, weights = gauss_laguerre(64)
    ref_n, ref_w = np.polynomial.laguerre.laggauss(64)
    np.testing.assert_allclose(nodes, ref_n, rtol=1e-10)
    np.testing.assert_allclose(weights, ref_w, rtol=0, atol=1e-12)


def test_gauss_laguerre_high_order_integrates_polynomials():
    nodes, weights = gauss_laguerre(384)
    assert np.all(np.isfinite(nodes)) and np.all(weights >= 0)
    for j in range(6):
        assert weights @ nodes**j == pytest.approx(math.factorial(j), rel=1e-10)


def test_laguerre_average_falls_back_for_log_singularity():
    """int ln(x) e^{-x} dx = -C_e: Gauss--Laguerre converges only slowly."""
    def cond(x):
        return np.log(x) ** 3, np.zeros_like(x)

    val, err, info = laguerre_average(cond, QuadratureGrid(outer_tol=1e-10))
    ref = float(mp.quad(lambda t: mp.log(t) ** 3 * mp.exp(-t), [0, 1, mp.inf]))
    assert val == pytest.approx(ref, rel=1e-9)
    assert info["rule"] in ("laguerre", "log_trapezoid")


def test_conditional_expectation_with_lower_limit():
    p = ChannelParams(2.0, 3.0, 5.0)
    x = np.array([0.4, 2.0])
    vals, errs = conditional_expectation(lambda g: np.log(g), x, p, lower=1.5)
    for xv, v in zip(x, vals):
        ref, _ = integrate.quad(lambda g: math.log(g) * conditional_pdf(g, xv, p), 1.5, np.inf, epsabs=0, epsrel=1e-12, limit=200)
        assert v == pytest.approx(ref, rel=1e-9)
    assert np.all(errs < 1e-9)


# ---------------------------------------------------------------- sampler


def test_sampler_mean():
    p = ChannelParams(20.0, 2.0, 10.0)
    s = sample_snr(p, np.random.default_rng(7), size=10**6)
    assert np.mean(s) == pytest.approx(10.0, rel=0.01)
    assert np.all(s >= 0)


def test_sampler_scalar_and_reproducible():
    p = ChannelParams(1.0, 1.5, 2.0)
    a = sample_snr(p, np.random.default_rng(99), size=1000)
    b = sample_snr(p, np.random.default_rng(99), size=1000)
    assert np.array_equal(a, b)
    assert isinstance(sample_snr(p, np.random.default_rng(1)), float)


def test_sampler_k_zero_double_rayleigh_law():
    p = ChannelParams(0.0, 2.0, 1.0)
    n = 400_000
    s = sample_snr(p, np.random.default_rng(3), size=n)
    for y in (0.05, 0.3, 1.0, 3.0):
        cdf = 1.0 - 2.0 * math.sqrt(y) * special.k1(2.0 * math.sqrt(y))
        assert abs(np.mean(s <= y) - cdf) < 4 * math.sqrt(cdf * (1 - cdf) / n)


def _unshadowed_cdf(y, p, order=96):
    """CDF of the m -> infinity model: noncentral chi-square given x, averaged over x."""
    xs, ws = np.polynomial.laguerre.laggauss(order)
    scale = p.gamma_bar * p.omega2_sq * xs / 2.0
    nc = 2.0 * p.omega0_sq / (p.omega2_sq * xs)
    return np.array([ws @ stats.ncx2.cdf(v / scale, 2, nc) for v in np.atleast_1d(y)])


def test_sampler_large_m_approaches_unshadowed_model():
    base = ChannelParams(5.0, 5.0, 1.0)
    dist = []
    for m in (1.0, 5.0, 500.0):
        s = np.sort(sample_snr(base.replace(m=m), np.random.default_rng(11), size=20_000))
        cdf = _unshadowed_cdf(s, base)
        ecdf_hi = np.arange(1, s.size + 1) / s.size
        ecdf_lo = np.arange(0, s.size) / s.size
        dist.append(max(np.max(ecdf_hi - cdf), np.max(cdf - ecdf_lo)))
    assert dist[0] > dist[1] > dist[2]
    assert dist[2] < 1.63 / math.sqrt(20_000)  # 1% KS critical value
