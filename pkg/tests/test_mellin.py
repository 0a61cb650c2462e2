"""Univariate and bivariate Meijer G-functions by Mellin--Barnes quadrature,
checked against mpmath and against closed-form reductions."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fdrlos.errors import ContourError, DomainError
from fdrlos.specfun import (
    ContourConfig,
    EgbmgSpec,
    GammaBlock,
    MeijerGSpec,
    egbmg,
    kummer_u,
    meijer_g,
)

mp.mp.dps = 25

LOG1P = MeijerGSpec.standard(1, 2, [1, 1], [1, 0])
EXP = MeijerGSpec.standard(1, 0, [], [0])


def _mp_meijerg(spec, z):
    v = mp.meijerg(
        [list(spec.a_front), list(spec.a_back)],
        [list(spec.b_front), list(spec.b_back)],
        z,
    )
    assert abs(mp.im(v)) <= 1e-15 * max(1, abs(v))
    return float(mp.re(v))


# ---------------------------------------------------------------- identity suite


@pytest.mark.parametrize("z", [0.1, 0.5, 1.0, 10.0])
def test_log1p_identity(z):
    r = meijer_g(LOG1P, z)
    assert r.value == pytest.approx(math.log1p(z), rel=1e-8)
    assert r.err_est < 1e-8 * math.log1p(z)


@pytest.mark.parametrize("z", [0.1, 1.0, 10.0])
def test_exponential_identity(z):
    assert meijer_g(EXP, z).value == pytest.approx(math.exp(-z), rel=1e-10, abs=1e-15)


def test_kummer_u_relation():
    """G^{2,1}_{1,2}(1-m; i, 1 | z) = Gamma(m+i) Gamma(m+1) z^i U(m+i, i, z)."""
    m, i, z = 2.0, 1, 0.4
    spec = MeijerGSpec.standard(2, 1, [1 - m], [i, 1])
    expected = z**i * math.gamma(m + i) * math.gamma(m + 1) * kummer_u(m + i, i, z)
    assert meijer_g(spec, z).value == pytest.approx(expected, rel=1e-9)
    assert meijer_g(spec, z).value == pytest.approx(_mp_meijerg(spec, z), rel=1e-9)


@pytest.mark.parametrize(
    "m,n,a,b,z",
    [
        (1, 3, [1, 1, -1], [1, 0], 0.02),
        (1, 4, [1, 1, 0, 0], [1, 0], 100.0),
        (2, 1, [-1.5], [0.3, 1.0], 3.0),
        (2, 0, [], [0.5, 0.0], 2.5),
        (1, 3, [1, 1, 0.7], [1, 0], 0.8),
        (2, 3, [1, 1, -2], [1, 0.5, 0], 5.0),
    ],
)
def test_against_mpmath(m, n, a, b, z):
    spec = MeijerGSpec.standard(m, n, a, b)
    r = meijer_g(spec, z)
    ref = _mp_meijerg(spec, z)
    assert r.value == pytest.approx(ref, rel=1e-8, abs=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=-1.0, max_value=1.0), st.floats(min_value=0.05, max_value=20.0))
def test_shift_identity(alpha, z):
    spec = MeijerGSpec.standard(2, 1, [-0.7], [0.2, 1.0])
    lhs = z**alpha * meijer_g(spec, z).value
    rhs = meijer_g(spec.shifted(alpha), z).value
    assert rhs == pytest.approx(lhs, rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.05, max_value=20.0))
def test_inversion_identity(z):
    for spec in (LOG1P, MeijerGSpec.standard(2, 1, [-0.7], [0.2, 1.0])):
        assert meijer_g(spec.inverted(), 1.0 / z).value == pytest.approx(meijer_g(spec, z).value, rel=1e-8)


@pytest.mark.parametrize("m,z", [(2.0, 0.4), (2.5, 0.7), (4.0, 3.0)])
def test_summation_identity(m, z):
    """sum_i G^{2,1}_{1,2}(1-m; i, 1 | z) / i! = Gamma(m).

    The terms decay like Gamma(m+1) z / i^2 (monotonically past their
    peak), so the partial sums converge as 1/N: the first 128 terms come
    from :func:`meijer_g`, the remainder from an independent summation.
    """
    n = 128
    terms = np.array(
        [meijer_g(MeijerGSpec.standard(2, 1, [1 - m], [i, 1]), z).value / math.factorial(i) for i in range(n)]
    )
    peak = int(np.argmax(terms))
    assert np.all(np.diff(terms[peak:]) < 0)
    assert terms[-1] * n**2 == pytest.approx(math.gamma(m + 1) * z, rel=0.1)
    # tail i >= n from the closed form (mpmath, Euler--Maclaurin summation)
    mp.mp.dps = 20

    def term(i):
        return mp.exp(
            mp.loggamma(m + i) + mp.loggamma(m + 1) + i * mp.log(z) + mp.log(mp.hyperu(m + i, i, z)) - mp.loggamma(i + 1)
        )

    tail = float(mp.nsum(term, [n, mp.inf], method="euler-maclaurin"))
    mp.mp.dps = 25
    assert math.fsum(terms) + tail == pytest.approx(math.gamma(m), rel=1e-8)


def test_halving_height_within_error():
    for spec, z in ((LOG1P, 2.0), (MeijerGSpec.standard(2, 1, [-1.5], [0.3, 1.0]), 3.0)):
        full = meijer_g(spec, z)
        half = meijer_g(spec, z, ContourConfig(height=full.diagnostics["height"] / 2))
        assert abs(full.value - half.value) <= max(full.err_est, 1e-15 * abs(full.value)) + 1e-15


def test_explicit_sigma_gives_same_value():
    r1 = meijer_g(LOG1P, 3.0)
    r2 = meijer_g(LOG1P, 3.0, ContourConfig(sigma=-0.3))
    assert r1.value == pytest.approx(r2.value, rel=1e-10)


def test_infeasible_pole_separation_is_reported():
    with pytest.raises(ContourError):
        MeijerGSpec.standard(1, 1, [2.0], [0.0])


def test_invalid_argument_and_config():
    with pytest.raises(DomainError):
        meijer_g(LOG1P, -1.0)
    with pytest.raises(DomainError):
        ContourConfig(nodes=10)
    with pytest.raises(DomainError):
        ContourConfig(tol=0.1)
    with pytest.raises(DomainError):
        ContourConfig(height=-1.0)


# ---------------------------------------------------------------- bivariate


def _appell_spec(a):
    # Gamma(a - s - t) Gamma(s) Gamma(t): (1 + x + y)^{-a} Gamma(a)
    return EgbmgSpec(
        block1=GammaBlock(a_front=[1 - a]),
        block2=GammaBlock(b_front=[0]),
        block3=GammaBlock(b_front=[0]),
    )


@pytest.mark.parametrize("a,x,y", [(1.5, 0.3, 0.7), (2.0, 5.0, 0.1), (0.8, 1.0, 1.0)])
def test_egbmg_power_identity(a, x, y):
    r = egbmg(_appell_spec(a), x, y)
    assert r.value == pytest.approx(math.gamma(a) * (1 + x + y) ** (-a), rel=1e-9)


def test_egbmg_separable_reduction():
    spec = EgbmgSpec(block2=GammaBlock(b_front=[0]), block3=GammaBlock(a_front=[1, 1], b_front=[1], b_back=[0]))
    x, y = 0.8, 2.5
    r = egbmg(spec, x, y)
    expected = meijer_g(EXP, x).value * meijer_g(LOG1P, y).value
    assert r.value == pytest.approx(expected, rel=1e-6)


def test_egbmg_against_direct_double_contour():
    """Nontrivial three-block kernel against an mpmath double line integral."""
    spec = EgbmgSpec(
        block1=GammaBlock(b_front=[1.0], a_back=[1.5]),
        block2=GammaBlock(b_front=[0.0], a_front=[0.5]),
        block3=GammaBlock(b_front=[0.0]),
    )
    x, y = 0.6, 1.7
    r = egbmg(spec, x, y)
    ss = r.diagnostics["sigma_s"]
    mp.mp.dps = 15

    def outer(u):
        s = mp.mpc(ss, u)
        # inner t-integral: G^{2,0}_{1,2}(-; 1.5+s | 0, 1+s | y)
        inner = mp.meijerg([[], [1.5 + s]], [[0, 1 + s], []], y)
        return mp.re(mp.gamma(s) * mp.gamma(0.5 - s) * x ** (-s) * inner)

    val = mp.quad(outer, [-40, -10, 0, 10, 40]) / (2 * mp.pi)
    mp.mp.dps = 25
    assert r.value == pytest.approx(float(val), rel=1e-7)


def test_egbmg_log_scale():
    spec = _appell_spec(1.5)
    r0 = egbmg(spec, 0.3, 0.7)
    r1 = egbmg(spec, 0.3, 0.7, log_scale=3.0)
    assert r1.value == pytest.approx(r0.value * math.exp(-3.0), rel=1e-12)


def test_egbmg_rejects_nonpositive_arguments():
    with pytest.raises(DomainError):
        egbmg(_appell_spec(1.5), 0.0, 1.0)


def test_egbmg_infeasible_lines():
    spec = _appell_spec(1.5)
    with pytest.raises(ContourError):
        egbmg(spec, 0.3, 0.7, ContourConfig(sigma=1.0), ContourConfig(sigma=1.0))


def test_egbmg_is_pure_and_thread_safe():
    from concurrent.futures import ThreadPoolExecutor

    spec = _appell_spec(1.5)
    args = [(0.3 + 0.1 * j, 0.7) for j in range(8)]
    serial = [egbmg(spec, x, y).value for x, y in args]
    with ThreadPoolExecutor(4) as pool:
        threaded = list(pool.map(lambda a: egbmg(spec, *a).value, args))
    assert serial == threaded
    assert np.all(np.isfinite(serial))
