import math

import numpy as np
import pytest

from oddpart.analysis import (GAMMA_TARGET, decay_fit, dyadic_probes, fit_sequence,
                              gamma_limit_probe, gamma_limit_value, liminf_probe,
                              neville_at_zero, tau_bracket)
from oddpart.errors import ArgumentOutOfDomain, InvalidExponent, WrongCardinality
from oddpart.families import equi_family, farey_family, random_odd_family
from oddpart.specfun import EULER_GAMMA, tau_zeta_bound


def test_gamma_target_value():
    assert GAMMA_TARGET == pytest.approx(0.5 * (math.log(2) + EULER_GAMMA), rel=1e-16)
    assert GAMMA_TARGET == pytest.approx(0.6351814227, abs=1e-10)


# -- tau -----------------------------------------------------------------------

@pytest.mark.parametrize("p", [2.5, 3.0, 4.0, 9.0])
def test_tau_equi_is_the_bound(p):
    b = tau_bracket(equi_family(), p, 500)
    assert b.contains(b.bound_ref)
    assert b.width < 1e-12


def test_tau_domain():
    with pytest.raises(InvalidExponent):
        tau_bracket(equi_family(), 2.0, 10)
    with pytest.raises(WrongCardinality):
        tau_bracket(farey_family(), 3.0, 10)


def test_tau_random_families_above_bound():
    for seed in range(5):
        b = tau_bracket(random_odd_family(seed, 0.5), 3.0, 200)
        assert b.lower >= b.bound_ref - 1e-12
        assert b.lower <= b.upper


def test_tau_bracket_shrinks_with_rows():
    fam = random_odd_family(11, 1.0)
    widths = [tau_bracket(fam, 2.5, r).width for r in (10, 50, 250)]
    assert widths[0] > widths[1] > widths[2]


# -- fitting --------------------------------------------------------------------

def test_dyadic_probes():
    probes = dyadic_probes(1000, 10000)
    assert probes[0] == 1000 and probes[-1] == 10000
    assert all(b > a for a, b in zip(probes, probes[1:]))


@pytest.mark.parametrize("alpha,C", [(-0.5, 0.7), (-1 / 3, 1.3), (-0.7, 0.2)])
def test_fit_recovers_synthetic_power_law(alpha, C):
    j = np.arange(1, 50001, dtype=float)
    values = C * j**alpha * (1 + 0.3 / j)
    fit = fit_sequence(list(values), (1000, 50000))
    assert fit.alpha_hat == pytest.approx(alpha, abs=1e-3)
    assert fit.C_hat == pytest.approx(C, rel=1e-3)
    assert fit.method == ("richardson" if alpha == -0.5 else "powerlaw")


def test_richardson_removes_half_order_correction():
    j = np.arange(1, 20001, dtype=float)
    values = 0.5 * j**-0.5 + 0.4 / j
    fit = fit_sequence(list(values), (500, 20000))
    assert fit.method == "richardson"
    assert fit.C_hat == pytest.approx(0.5, abs=1e-9)
    assert abs(fit.C_powerlaw - 0.5) > 1e-3


def test_decay_fit_equi_small_window():
    fit = decay_fit(equi_family(), (100, 10000))
    assert fit.alpha_hat == pytest.approx(-0.5, abs=0.01)
    assert fit.C_hat == pytest.approx(0.5, abs=0.01)
    with pytest.raises(ValueError):
        decay_fit(equi_family(), (10, 100), budget=50)


def test_decay_fit_farey_exponent():
    fit = decay_fit(farey_family(), (1000, 100000))
    assert fit.alpha_hat == pytest.approx(-2 / 3, abs=0.01)
    assert fit.C_hat == pytest.approx((8 / math.pi**2) ** (2 / 3), rel=0.03)


# -- gamma limit ----------------------------------------------------------------

def test_neville():
    xs = [0.1, 0.2, 0.3, 0.4]
    assert neville_at_zero(xs, [1 + 2 * x - x**3 for x in xs]) == pytest.approx(1, abs=1e-14)


def test_gamma_probe():
    probe = gamma_limit_probe()
    assert abs(probe.error) < 1e-10
    values = [v for _, v in probe.values]
    assert all(abs(v - GAMMA_TARGET) < 0.1 for v in values)
    with pytest.raises(ArgumentOutOfDomain):
        gamma_limit_value(2.0)


def test_gamma_value_matches_direct_formula():
    p = 2.5
    direct = (1 - 2 ** (1 - p)) * (tau_zeta_bound(p) / (1 - 2 ** (1 - p))) - 1 / (2 * (p - 2))
    assert gamma_limit_value(p) == pytest.approx(direct, rel=1e-13)


# -- liminf ---------------------------------------------------------------------

def test_liminf_equi_windows():
    (w, v), = liminf_probe(equi_family(), [(10**4, 4 * 10**4)])
    assert w == (10**4, 4 * 10**4)
    # minimum sits just after a square, where sqrt(j)/(2 sqrt(j) + 1) ~ 1/2
    assert 0.45 <= v < 0.5


def test_liminf_random_family():
    out = liminf_probe(random_odd_family(3, 1.0), [(1000, 4000), (4000, 16000)])
    assert all(v > 0.45 for _, v in out)
