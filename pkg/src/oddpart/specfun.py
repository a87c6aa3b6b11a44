"""Special functions: Riemann/Hurwitz zeta for real s > 1 and associated
Legendre functions of both kinds on the exterior interval x > 1.

Legendre convention (Hobson, real argument)::

    P_n^m(x) = (x^2 - 1)^(m/2) d^m/dx^m P_n(x)
    Q_n^m(x) = (x^2 - 1)^(m/2) d^m/dx^m Q_n(x)

so P_n^m > 0 on x > 1 while Q_n^m carries the sign (-1)^m, and

    P dQ - dP Q = (-1)^m (n+m)!/(n-m)! / (1 - x^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import bernoulli

from .errors import ArgumentOutOfDomain, PrecisionLoss

EULER_GAMMA = float(np.euler_gamma)
# zeta(s) = 1/(s-1) + sum_n (-1)^n gamma_n (s-1)^n / n!
STIELTJES = (EULER_GAMMA, -0.0728158454836767248605863758749547,
             -0.00969036319287231848453038603521)
STIELTJES_CUTOFF = 1e-8

_EM_SHIFT = 24
_EM_TERMS = 12
_B2J = [float(b) for b in bernoulli(2 * _EM_TERMS)[2::2]]
_FACT2J = [math.factorial(2 * j) for j in range(1, _EM_TERMS + 1)]


def _em_tail(s, base):
    """sum_{k>=0} (base + k)^-s for base >= _EM_SHIFT, without the head."""
    out = [base ** (1.0 - s) / (s - 1.0), 0.5 * base ** -s]
    out.extend(_em_corrections(s, base))
    return math.fsum(out)


def _em_corrections(s, base):
    term = s * base ** (-s - 1.0)
    corr = []
    for j in range(1, _EM_TERMS + 1):
        corr.append(_B2J[j - 1] / _FACT2J[j - 1] * term)
        term *= (s + 2 * j - 1) * (s + 2 * j) / (base * base)
    return corr


def hurwitz_zeta(s, a=1.0):
    """Hurwitz zeta sum_{k>=0} (k + a)^-s for real s > 1, a > 0.

    Direct summation up to a shifted base, then Euler-Maclaurin with
    compensated summation.
    """
    s = float(s)
    a = float(a)
    if not s > 1.0:
        raise ArgumentOutOfDomain(f"hurwitz_zeta needs s > 1, got {s}")
    if not a > 0.0:
        raise ArgumentOutOfDomain(f"hurwitz_zeta needs a > 0, got {a}")
    n_head = max(0, math.ceil(_EM_SHIFT - a))
    head = [(a + k) ** -s for k in range(n_head)]
    return math.fsum(head + [_em_tail(s, a + n_head)])


def zeta_minus_pole(s):
    """zeta(s) - 1/(s - 1), evaluated without cancellation against the pole."""
    s = float(s)
    if not s > 1.0:
        raise ArgumentOutOfDomain(f"zeta needs s > 1, got {s}")
    e = s - 1.0
    if e < STIELTJES_CUTOFF:
        g0, g1, g2 = STIELTJES
        return g0 - g1 * e + 0.5 * g2 * e * e
    base = 1.0 + _EM_SHIFT
    head = [k ** -s for k in range(1, _EM_SHIFT + 1)]
    # base^(1-s)/(s-1) - 1/(s-1)
    pole_part = math.expm1(-e * math.log(base)) / e
    return math.fsum(head + [pole_part, 0.5 * base ** -s] + _em_corrections(s, base))


def zeta(s):
    """Riemann zeta for real s > 1."""
    s = float(s)
    if not s > 1.0:
        raise ArgumentOutOfDomain(f"zeta needs s > 1, got {s}")
    if s - 1.0 < STIELTJES_CUTOFF:
        return 1.0 / (s - 1.0) + zeta_minus_pole(s)
    return hurwitz_zeta(s, 1.0)


def odd_power_tail(s, start):
    """sum_{N >= start} (2N + 1)^-s."""
    return 2.0 ** -s * hurwitz_zeta(s, start + 0.5)


def tau_zeta_bound(p):
    """Lower bound (1 - 2^(1-p)) zeta(p - 1) on the p-th power sum of an odd
    partition family; attained only by equi-partitions."""
    p = float(p)
    if not p > 2.0:
        raise ArgumentOutOfDomain(f"tau bound needs p > 2, got {p}")
    if math.isinf(p):
        return 1.0
    return -math.expm1((1.0 - p) * math.log(2.0)) * zeta(p - 1.0)


# ---------------------------------------------------------------------------
# Legendre functions on x > 1


@dataclass(frozen=True)
class LegendrePair:
    n: int
    m: int
    x: float
    P: float
    dP: float
    Q: float
    dQ: float

    def wronskian_residual(self):
        expected = _wronskian(self.n, self.m, self.x)
        got = self.P * self.dQ - self.dP * self.Q
        return abs(got - expected) / abs(expected)


def _wronskian(n, m, x):
    ratio = math.prod(range(n - m + 1, n + m + 1))
    sign = -1 if m % 2 else 1
    return sign * ratio / (1 - x * x)


def miller_start(n_max, x):
    """Trial degree for the backward recurrence of Q."""
    return n_max + 20 + math.ceil(10.0 / (float(x) - 1.0))


def _check_x(x):
    if not float(x) > 1.0:
        raise ArgumentOutOfDomain(f"Legendre argument must exceed 1, got {x}")


def q_ratios(n_max, m, x, dtype=np.float64):
    """u[i] = Q_{m+i+1}^m / Q_{m+i}^m for degrees m..n_max (Miller recurrence).

    ``m`` may be an integer or an integer array, in which case the ratios are
    computed for every order at once and ``u`` has shape (n_max + 1, len(m));
    row n holds the degree-n ratio (meaningless where n < m).
    """
    _check_x(x)
    x = dtype(x)
    ms = np.asarray(m, dtype=dtype)
    u = np.zeros_like(ms)
    out = np.zeros((n_max + 1,) + ms.shape, dtype=dtype)
    for n in range(miller_start(n_max, x), 0, -1):
        u = (n + ms) / ((2 * n + 1) * x - (n - ms + 1) * u)
        if n - 1 <= n_max:
            out[n - 1] = u
    if np.ndim(m) == 0:
        return out[int(m):]
    return out


def legendre_table(n_max, m, x, dtype=np.float64):
    """P, Q and their x-derivatives for degrees n = m..n_max at one order m.

    P comes from the forward recurrence in n (dominant on x > 1). Q is the
    minimal solution: ratios from a Miller backward recurrence, normalised
    by the diagonal chain Q_0^0 -> Q_1^1 -> ... -> Q_m^m anchored on
    Q_0(x) = artanh(1/x).
    """
    _check_x(x)
    if not 0 <= m <= n_max:
        raise ArgumentOutOfDomain(f"need 0 <= m <= n_max, got m={m}, n_max={n_max}")
    x = dtype(x)
    x2m1 = (x - 1) * (x + 1)
    sq = np.sqrt(x2m1)

    # Q_m^m along the diagonal
    qmm = np.arctanh(1 / x)
    if m:
        # u[k, k] = Q_{k+1}^k / Q_k^k for every k < m in one backward pass
        diag = np.diagonal(q_ratios(m - 1, np.arange(m), x, dtype))
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(m):
                qmm = qmm * (x * diag[k] - (2 * k + 1)) / sq

    u = q_ratios(n_max, m, x, dtype)
    degrees = range(m, n_max + 1)
    Q = np.empty(len(degrees) + 1, dtype=dtype)
    Q[0] = qmm
    for i in range(len(degrees)):
        Q[i + 1] = Q[i] * u[i]

    P = np.empty(len(degrees), dtype=dtype)
    with np.errstate(over="ignore", invalid="ignore"):
        dfact = dtype(float(math.prod(range(1, 2 * m, 2)))) if m < 150 else dtype(np.inf)
        P[0] = dfact * sq ** m
        if len(degrees) > 1:
            P[1] = (2 * m + 1) * x * P[0]
        for i in range(2, len(degrees)):
            n = m + i - 1
            P[i] = ((2 * n + 1) * x * P[i - 1] - (n + m) * P[i - 2]) / (n - m + 1)

    out = []
    for i, n in enumerate(degrees):
        p_prev = P[i - 1] if i else 0
        with np.errstate(over="ignore", invalid="ignore"):
            dp = (n * x * P[i] - (n + m) * p_prev) / x2m1
            dq = (-(n + 1) * x * Q[i] + (n - m + 1) * Q[i + 1]) / x2m1
        pair = LegendrePair(n, m, float(x), float(P[i]), float(dp), float(Q[i]), float(dq))
        vals = (pair.P, pair.dP, pair.Q, pair.dQ)
        if not all(math.isfinite(v) for v in vals):
            raise PrecisionLoss(f"non-finite Legendre value at n={n}, m={m}, x={float(x)}")
        if pair.wronskian_residual() > 1e-8:
            raise PrecisionLoss(
                f"Wronskian residual {pair.wronskian_residual():.2e} at n={n}, m={m}, x={float(x)}")
        out.append(pair)
    return out


def legendre_log_derivatives(n_max, x, dtype=np.float64):
    """Logarithmic derivatives P'/P and Q'/Q for all 0 <= m <= n <= n_max.

    Returns two (n_max+1, n_max+1) arrays indexed [n, m]; entries with m > n
    are NaN. Only value ratios enter, so nothing overflows at large n or m.
    """
    _check_x(x)
    x = dtype(x)
    x2m1 = (x - 1) * (x + 1)
    ms = np.arange(n_max + 1, dtype=dtype)
    u = q_ratios(n_max, ms, x, dtype)
    rp = np.full((n_max + 1, n_max + 1), np.nan, dtype=dtype)
    rq = np.full_like(rp, np.nan)
    # t = P_{n-1}^m / P_n^m, zero on the diagonal n = m
    t = np.zeros_like(ms)
    with np.errstate(divide="ignore", invalid="ignore"):
        for n in range(n_max + 1):
            live = ms <= n
            rp[n, live] = ((n * x - (n + ms) * t) / x2m1)[live]
            rq[n, live] = ((-(n + 1) * x + (n - ms + 1) * u[n]) / x2m1)[live]
            grow = ((2 * n + 1) * x - (n + ms) * t) / (n - ms + 1)
            t = np.where(ms <= n, 1 / grow, 0)
    return rp, rq
