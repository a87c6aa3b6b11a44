"""Quantitative checks on enumerated families: tau(p) enclosures, decay
fits, the Euler-constant limit probe and windowed liminf diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentOutOfDomain, InvalidExponent, WrongCardinality
from .partition import enumerate_family
from .specfun import EULER_GAMMA, odd_power_tail, tau_zeta_bound, zeta_minus_pole

GAMMA_TARGET = 0.5 * (math.log(2.0) + EULER_GAMMA)
RICHARDSON_WINDOW = 0.02
# relative slack for floating-point rounding in the bracket ends
BRACKET_ROUNDING = 64 * np.finfo(float).eps
ENUMERATION_BUDGET = 10**6


@dataclass
class TauBracket:
    p: float
    lower: float
    upper: float
    rows_used: int
    bound_ref: float

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, value):
        return self.lower <= value <= self.upper


@dataclass
class DecayFit:
    """a_j ~ C_hat j^alpha_hat over ``window``.

    ``C_hat`` is the Richardson limit of sqrt(j) a_j when the exponent is
    within 0.02 of -1/2 (``method == "richardson"``), otherwise the power-law
    prefactor ``C_powerlaw``.
    """

    C_hat: float
    alpha_hat: float
    window: tuple
    residual: float
    method: str = "powerlaw"
    C_powerlaw: float = float("nan")
    probes: list = field(default_factory=list, repr=False)


def tau_bracket(family, p, rows):
    """Two-sided enclosure of tau(p) = sum over all rows of sum_k L^p.

    Rows below ``rows`` are summed directly. The remainder is bounded below
    by Hölder, sum_{N >= rows} (2N+1)^(1-p) T^p, and above by the family's
    envelope E / (2N+1), giving E^p sum_{N >= rows} (2N+1)^(1-p); without an
    envelope the upper end is infinite. Both ends are pushed outward by a
    small multiple of machine epsilon to cover rounding in the sums.
    """
    if not p > 2:
        raise InvalidExponent(f"tau(p) needs p > 2, got {p}")
    if family.kind != "odd":
        raise WrongCardinality(f"{family.name} is not an odd family")
    if rows < 1:
        raise ValueError("rows must be positive")
    T = float(family.target_sum)
    partial = math.fsum(family.row(N).power_sum(p) for N in range(rows))
    tail = odd_power_tail(p - 1, rows)
    lower = partial + T**p * tail
    upper = math.inf
    if family.envelope is not None:
        E, start = family.envelope
        if rows >= start:
            upper = partial + float(E) ** p * tail
    lower -= BRACKET_ROUNDING * abs(lower)
    upper += BRACKET_ROUNDING * abs(upper)
    return TauBracket(p, float(lower), float(upper), rows, T**p * tau_zeta_bound(p))


def dyadic_probes(j_lo, j_hi):
    """floor(j_lo 2^(k/4)) for k = 0, 1, ... up to j_hi, plus j_hi."""
    out = []
    k = 0
    while True:
        j = math.floor(j_lo * 2 ** (k / 4))
        if j > j_hi:
            break
        if not out or j != out[-1]:
            out.append(j)
        k += 1
    if out[-1] != j_hi:
        out.append(j_hi)
    return out


def fit_sequence(values, window):
    """Fit a_j ~ C j^alpha on ``values`` (a_1 first) over ``window``."""
    j_lo, j_hi = window
    if not 1 <= j_lo < j_hi:
        raise ValueError(f"bad window {window}")
    if len(values) < j_hi:
        raise ValueError(f"need {j_hi} values, got {len(values)}")
    probes = dyadic_probes(j_lo, j_hi)
    j = np.array(probes, dtype=float)
    a = np.array([float(values[i - 1]) for i in probes])
    alpha, log_c = np.polyfit(np.log(j), np.log(a), 1)
    c_pow = math.exp(log_c)
    fit = DecayFit(c_pow, float(alpha), (j_lo, j_hi), 0.0, "powerlaw", c_pow, probes)
    if abs(alpha + 0.5) <= RICHARDSON_WINDOW:
        # sqrt(j) a_j = C + D j^(-1/2) + ..., least squares over the window
        jj = np.arange(j_lo, j_hi + 1, dtype=float)
        cj = np.sqrt(jj) * np.array([float(v) for v in values[j_lo - 1:j_hi]])
        D, C = np.polyfit(jj ** -0.5, cj, 1)
        fit.C_hat = float(C)
        fit.method = "richardson"
    model = fit.C_hat * j ** fit.alpha_hat
    fit.residual = float(np.max(np.abs(a / model - 1)))
    return fit


def decay_fit(family, j_window, budget=ENUMERATION_BUDGET):
    j_lo, j_hi = j_window
    if j_hi > budget:
        raise ValueError(f"window end {j_hi} exceeds the enumeration budget {budget}")
    values = enumerate_family(family, j_hi, origins=False)
    return fit_sequence(values, (j_lo, j_hi))


def gamma_limit_value(p):
    """(1 - 2^(1-p)) zeta(p-1) - 1/(2(p-2)), with the pole cancelled
    analytically."""
    p = float(p)
    if not 2 < p <= 3:
        raise ArgumentOutOfDomain(f"probe needs p in (2, 3], got {p}")
    eps = p - 2
    weight = -math.expm1(-(p - 1) * math.log(2.0))
    # (1 - 2^(1-p)) - 1/2 = -expm1(-eps ln 2)/2
    return weight * zeta_minus_pole(p - 1) - 0.5 * math.expm1(-eps * math.log(2.0)) / eps


def neville_at_zero(xs, ys):
    """Value at 0 of the interpolating polynomial through (xs, ys)."""
    xs = list(xs)
    t = list(ys)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            t[i] = (xs[i + k] * t[i] - xs[i] * t[i + 1]) / (xs[i + k] - xs[i])
    return t[0]


@dataclass
class GammaProbe:
    values: list
    extrapolated: float
    target: float = GAMMA_TARGET

    @property
    def error(self):
        return self.extrapolated - self.target


def gamma_limit_probe(p_list=None):
    """Probe values at each p and their polynomial extrapolation to p = 2."""
    if p_list is None:
        p_list = [2 + 0.25 * 2.0**-k for k in range(8)]
    p_list = [float(p) for p in p_list]
    values = [(p, gamma_limit_value(p)) for p in p_list]
    extrap = neville_at_zero([p - 2 for p, _ in values], [v for _, v in values])
    return GammaProbe(values, extrap)


def liminf_probe(family, windows):
    """Exact minimum of sqrt(j) a_j over each window (every j enumerated)."""
    if family.kind != "odd":
        raise WrongCardinality(f"{family.name} is not an odd family")
    windows = [tuple(w) for w in windows]
    top = max(hi for _, hi in windows)
    values = enumerate_family(family, top, origins=False)
    out = []
    for lo, hi in windows:
        j = np.arange(lo, hi + 1, dtype=float)
        a = np.array([float(v) for v in values[lo - 1:hi]])
        out.append(((lo, hi), float(np.min(np.sqrt(j) * a))))
    return out
