import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oddpart.errors import ArgumentOutOfDomain, PrecisionLoss
from oddpart.specfun import (EULER_GAMMA, hurwitz_zeta, legendre_log_derivatives,
                             legendre_table, odd_power_tail, q_ratios, tau_zeta_bound,
                             zeta, zeta_minus_pole)

mpmath.mp.dps = 40

X_GRID = (1.05, 1.5, 2.0, 10.0)


def mp_P(n, m, x):
    return mpmath.re(mpmath.legenp(n, m, x, type=3))


def mp_Q(n, m, x):
    return mpmath.re(mpmath.legenq(n, m, x, type=3))


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# -- closed forms ------------------------------------------------------------

def test_low_degree_closed_forms():
    p00 = legendre_table(0, 0, 3.0)[0]
    assert (p00.P, p00.dP) == (1.0, 0.0)
    p10 = legendre_table(1, 0, 2.0)[1]
    assert p10.P == pytest.approx(2.0, rel=1e-15)
    assert p10.Q == pytest.approx(math.log(3) - 1, rel=1e-14)
    p11 = legendre_table(1, 1, 2.0)[0]
    assert p11.P == pytest.approx(math.sqrt(3), rel=1e-15)


def test_q_ratio_shapes():
    u = q_ratios(10, 3, 1.5)
    assert u.shape == (8,)
    u_all = q_ratios(10, np.arange(4), 1.5)
    assert u_all.shape == (11, 4)
    np.testing.assert_allclose(u_all[3:, 3], u, rtol=1e-15)


def test_domain_errors():
    with pytest.raises(ArgumentOutOfDomain):
        legendre_table(3, 0, 1.0)
    with pytest.raises(ArgumentOutOfDomain):
        legendre_table(3, 4, 2.0)
    with pytest.raises(ArgumentOutOfDomain):
        zeta(1.0)


def test_precision_loss_at_high_order():
    # P_100^100 overflows double precision
    with pytest.raises(PrecisionLoss):
        legendre_table(200, 100, 1.001)


# -- mpmath oracle grid ------------------------------------------------------

@pytest.mark.parametrize("x", X_GRID)
@pytest.mark.parametrize("m", [0, 1, 2, 5, 10])
def test_legendre_against_mpmath(x, m):
    table = legendre_table(50, m, x)
    for pair in table[:: max(1, len(table) // 8)] + [table[-1]]:
        n = pair.n
        assert rel(pair.P, float(mp_P(n, m, x))) < 1e-12
        assert rel(pair.Q, float(mp_Q(n, m, x))) < 1e-12


@pytest.mark.parametrize("x", X_GRID)
def test_wronskian_grid(x):
    worst = max(p.wronskian_residual() for m in range(11) for p in legendre_table(50, m, x))
    assert worst < 1e-10


@pytest.mark.parametrize("x", X_GRID)
@pytest.mark.parametrize("m", [0, 3, 7])
def test_derivatives_against_finite_differences(x, m):
    h = 1e-6 * (x - 1)
    lo = legendre_table(20, m, x - h)
    hi = legendre_table(20, m, x + h)
    for mid, a, b in zip(legendre_table(20, m, x), lo, hi):
        assert rel(mid.dP, (b.P - a.P) / (2 * h)) < 1e-5
        assert rel(mid.dQ, (b.Q - a.Q) / (2 * h)) < 1e-5


def test_signs_and_decay():
    for m in range(5):
        for p in legendre_table(12, m, 1.7):
            assert p.P > 0
            assert math.copysign(1, p.Q) == (-1) ** m
    q_far = legendre_table(3, 0, 1e4)[-1].Q
    q_near = legendre_table(3, 0, 10.0)[-1].Q
    assert abs(q_far) < abs(q_near) * 1e-8


def test_log_derivatives_match_table():
    x = 1.3
    rp, rq = legendre_log_derivatives(25, x)
    for m in (0, 4, 11):
        for p in legendre_table(25, m, x):
            assert rel(rp[p.n, m], p.dP / p.P) < 1e-12
            assert rel(rq[p.n, m], p.dQ / p.Q) < 1e-12
    assert np.isnan(rp[2, 5])


def test_extended_precision_table():
    rp, rq = legendre_log_derivatives(60, 1.01, np.longdouble)
    assert rp.dtype == np.longdouble
    n, m = 40, 6
    x = mpmath.mpf("1.01")
    want = mpmath.diff(lambda t: mpmath.log(mp_P(n, m, t)), x)
    assert rel(float(rp[n, m]), float(want)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(x=st.floats(1.02, 50.0), n=st.integers(0, 40), data=st.data())
def test_wronskian_property(x, n, data):
    m = data.draw(st.integers(0, min(n, 12)))
    assert legendre_table(n, m, x)[-1].wronskian_residual() < 1e-10


# -- zeta ---------------------------------------------------------------------

@pytest.mark.parametrize("s", [1.5, 2.0, 2.5, 3.0, 4.0, 7.25, 20.0, 50.0])
def test_zeta_against_mpmath(s):
    assert abs(zeta(s) - float(mpmath.zeta(s))) < 1e-12


def test_zeta_known_values():
    assert zeta(2.0) == pytest.approx(math.pi**2 / 6, abs=1e-15)
    assert zeta(4.0) == pytest.approx(math.pi**4 / 90, abs=1e-15)


@pytest.mark.parametrize("eps", [1e-3, 1e-6, 5e-9, 1e-12])
def test_zeta_minus_pole(eps):
    s = 1 + eps
    sm = mpmath.mpf(s)
    want = float(mpmath.zeta(sm) - 1 / (sm - 1))
    assert abs(zeta_minus_pole(s) - want) < 1e-13


def test_zeta_minus_pole_limit_is_euler_gamma():
    assert zeta_minus_pole(1 + 1e-14) == pytest.approx(EULER_GAMMA, abs=1e-13)
    assert EULER_GAMMA == pytest.approx(float(mpmath.euler), abs=1e-16)


@pytest.mark.parametrize("s,a", [(2.0, 0.5), (3.5, 7.25), (1.25, 2.0)])
def test_hurwitz(s, a):
    assert hurwitz_zeta(s, a) == pytest.approx(float(mpmath.zeta(s, a)), rel=1e-13)


def test_odd_power_tail():
    # sum over N >= 3 of (2N+1)^(-2)
    direct = math.fsum((2 * N + 1) ** -2.0 for N in range(3, 200000))
    assert odd_power_tail(2.0, 3) == pytest.approx(direct, abs=1e-5)
    assert odd_power_tail(2.0, 0) == pytest.approx(math.pi**2 / 8, rel=1e-14)


def test_tau_zeta_bound():
    assert tau_zeta_bound(3) == pytest.approx(math.pi**2 / 8, rel=1e-15)
    assert tau_zeta_bound(math.inf) == 1.0
    with pytest.raises(ArgumentOutOfDomain):
        tau_zeta_bound(2.0)
