"""Quick invariant suite behind ``oddpart verify``.

Each check is small enough to finish in a few seconds; the output is one
``PASS``/``FAIL`` line per check.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .analysis import GAMMA_TARGET, gamma_limit_probe, tau_bracket
from .errors import OddPartError
from .families import equi_family, farey_family, farey_row, random_odd_family
from .np_spectrum import spectrum_table, willmore_energy, weyl_from_willmore
from .partition import enumerate_family, row_holder_margin, validate_row
from .specfun import legendre_table


def _equi_prefix():
    values = enumerate_family(equi_family(), 10_000, origins=False)
    return all(v == Fraction(1, 2 * math.isqrt(j - 1) + 1)
               for j, v in enumerate(values, 1))


def _farey_rows():
    want = {3: ["1/3", "1/6", "1/6", "1/3"],
            5: ["1/5", "1/20", "1/12", "1/15", "1/10", "1/10", "1/15", "1/12", "1/20", "1/5"]}
    return all(farey_row(o).lengths == [Fraction(s) for s in w] and sum(map(Fraction, w)) == 1
               for o, w in want.items())


def _farey_prefix():
    values = enumerate_family(farey_family(), 15, origins=False)
    want = [1] + [Fraction(1, q) for q in (2, 2, 3, 3, 4, 4, 5, 5)] + [Fraction(1, 6)] * 6
    return values == want


def _tau_equi():
    b = tau_bracket(equi_family(), 3, 1000)
    return b.contains(math.pi**2 / 8) and b.lower >= b.bound_ref - 1e-12


def _holder_random():
    for seed in range(10):
        fam = random_odd_family(seed, 2.0)
        for N in range(20):
            row = validate_row(fam.row(N), tol=0)
            if row_holder_margin(row, 3) < 0:
                return False
    return True


def _gamma():
    return abs(gamma_limit_probe().extrapolated - GAMMA_TARGET) < 1e-6


def _trace():
    for xi0 in (1.05, 1.5, 3.0, 10.0):
        lam = spectrum_table(xi0, 30)
        for n in range(31):
            if abs(lam[n, 0] + 2 * lam[n, 1:n + 1].sum() - 0.5) > 1e-10:
                return False
    return True


def _sphere_limit():
    lam = spectrum_table(1e3, 5)
    return all(abs(lam[n, m] - 1 / (2 * (2 * n + 1))) < 1e-4
               for n in range(6) for m in range(n + 1))


def _wronskian():
    for x in (1.05, 1.5, 2.0, 10.0):
        for m in range(0, 11):
            if any(p.wronskian_residual() > 1e-10 for p in legendre_table(50, m, x)):
                return False
    return True


def _sphere_weyl():
    return abs(weyl_from_willmore(willmore_energy(math.inf)) - 0.25) < 1e-10


CHECKS = [
    ("equi prefix exact (10^4 terms)", _equi_prefix),
    ("farey rows of order 3 and 5", _farey_rows),
    ("farey enumeration prefix", _farey_prefix),
    ("tau(3) bracket for equi contains pi^2/8", _tau_equi),
    ("Hölder margin on random odd rows", _holder_random),
    ("gamma-limit extrapolation", _gamma),
    ("spheroid trace identity n <= 30", _trace),
    ("sphere limit at xi0 = 1e3", _sphere_limit),
    ("Legendre Wronskian residual < 1e-10", _wronskian),
    ("sphere Weyl coefficient 1/4", _sphere_weyl),
]


def run_checks():
    """Return (lines, all_passed)."""
    lines = []
    ok = True
    for name, fn in CHECKS:
        try:
            passed = bool(fn())
            detail = ""
        except OddPartError as err:
            passed = False
            detail = f" ({type(err).__name__}: {err})"
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'}  {name}{detail}\n")
    return lines, ok
