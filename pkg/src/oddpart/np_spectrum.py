"""Neumann-Poincaré spectra of prolate spheroids.

A prolate spheroid with foci at z = +-1 is the level set xi = xi0 of
prolate spheroidal coordinates, with semi-axes sqrt(xi0^2 - 1) (equatorial)
and xi0 (polar). Separating the single-layer potential in these coordinates
gives, for each degree n >= 0 and order |m| <= n, the NP eigenvalue

    lambda_{n,m} = 1/2 - (-1)^m (n-m)!/(n+m)! (xi0^2 - 1) P_n^m'(xi0) Q_n^m(xi0).

Dividing by the Legendre Wronskian turns this into a ratio of logarithmic
derivatives, ``(rP + rQ) / (2 (rQ - rP))``, which is what :func:`spectrum_table`
evaluates so that nothing overflows at high degree.
"""
from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import (ArgumentOutOfDomain, BracketNotFound, BudgetExceeded,
                     EigenSolveFailure, GateFailure, NonMonotoneMap,
                     NonPositiveEigenvalue, PrecisionLoss, QuadratureNonConvergence,
                     RowLimitExceeded, TraceIdentityViolation)
from .specfun import legendre_log_derivatives, legendre_table

PRECISION_ENV = "ODDPART_PRECISION"
PRECISION_WALL = 1.02
EXTENDED_FLOOR = 1.001
XI0_CAP = 1e6
TRACE_TOL = 1e-8
EULER_CHAR = 2


def default_precision():
    mode = os.environ.get(PRECISION_ENV, "double")
    if mode not in ("double", "extended"):
        raise ValueError(f"{PRECISION_ENV} must be 'double' or 'extended', got {mode!r}")
    return mode


def _dtype(precision):
    return np.longdouble if precision == "extended" else np.float64


@dataclass(frozen=True)
class SpheroidShape:
    """Prolate spheroid xi = xi0; ``xi0 = inf`` is the round sphere."""

    xi0: float

    def __post_init__(self):
        if not self.xi0 > 1:
            raise ArgumentOutOfDomain(f"xi0 must exceed 1, got {self.xi0}")

    @property
    def is_sphere(self):
        return math.isinf(self.xi0)

    @property
    def eccentricity(self):
        return 0.0 if self.is_sphere else 1.0 / self.xi0

    @property
    def aspect_ratio(self):
        if self.is_sphere:
            return 1.0
        return self.xi0 / math.sqrt((self.xi0 - 1) * (self.xi0 + 1))

    def semi_axes(self, scale=1.0):
        """(equatorial, polar) semi-axes with the polar one equal to ``scale``."""
        e = self.eccentricity
        return scale * math.sqrt((1 - e) * (1 + e)), scale


@dataclass(frozen=True)
class ModeEigenvalue:
    n: int
    m: int
    value: float


def _as_shape(shape):
    return shape if isinstance(shape, SpheroidShape) else SpheroidShape(float(shape))


@functools.lru_cache(maxsize=32)
def _spectrum_table(xi0, n_max, precision):
    if math.isinf(xi0):
        lam = np.full((n_max + 1, n_max + 1), np.nan)
        for n in range(n_max + 1):
            lam[n, : n + 1] = 1.0 / (2 * (2 * n + 1))
        lam.flags.writeable = False
        return lam
    if xi0 < PRECISION_WALL and precision != "extended":
        raise PrecisionLoss(
            f"xi0 = {xi0} is below {PRECISION_WALL}; use the extended precision mode")
    if xi0 < EXTENDED_FLOOR:
        raise PrecisionLoss(f"xi0 = {xi0} is below the supported floor {EXTENDED_FLOOR}")
    rp, rq = legendre_log_derivatives(n_max, xi0, _dtype(precision))
    lam = (rp + rq) / (2 * (rq - rp))
    if lam[0, 0] != 0.5:
        raise GateFailure(f"lambda_00 = {lam[0, 0]!r}, expected exactly 1/2")
    for n in range(n_max + 1):
        row = lam[n, : n + 1]
        trace = row[0] + 2 * row[1:].sum()
        if abs(trace - 0.5) > TRACE_TOL:
            raise TraceIdentityViolation(
                f"xi0={xi0}, n={n}: sum over m is {float(trace)!r}, expected 1/2")
        if not np.all(row > 0):
            raise NonPositiveEigenvalue(f"xi0={xi0}, n={n}: min eigenvalue {float(row.min())!r}")
    out = lam.astype(np.float64)
    out.flags.writeable = False
    return out


def spectrum_table(shape, n_max, precision=None):
    """lambda[n, m] for 0 <= m <= n <= n_max (NaN above the diagonal).

    Every row is checked against the trace identity
    lambda_{n,0} + 2 sum_{m>=1} lambda_{n,m} = 1/2 and for positivity.
    """
    shape = _as_shape(shape)
    precision = precision or default_precision()
    return _spectrum_table(float(shape.xi0), int(n_max), precision)


def np_eigenvalue(shape, n, m, precision=None):
    """NP eigenvalue lambda_{n,m}; symmetric in m."""
    if n < 0 or abs(m) > n:
        raise ArgumentOutOfDomain(f"need n >= 0 and |m| <= n, got n={n}, m={m}")
    return float(spectrum_table(shape, max(n, 8), precision)[n, abs(m)])


def eigenvalue_from_legendre(shape, n, m):
    """The same eigenvalue evaluated literally from P, Q and the factorial
    ratio; fine while those stay finite (moderate n, m)."""
    shape = _as_shape(shape)
    m = abs(m)
    x = shape.xi0
    pair = legendre_table(n, m, x)[-1]
    ratio = math.prod(range(n - m + 1, n + m + 1))
    sign = -1 if m % 2 else 1
    return 0.5 - sign / ratio * (x * x - 1) * pair.dP * pair.Q


def mode_eigenvalues(shape, n, precision=None):
    """All 2n+1 eigenvalues of degree n as ModeEigenvalue records, m = -n..n."""
    lam = spectrum_table(shape, max(n, 8), precision)
    return [ModeEigenvalue(n, m, float(lam[n, abs(m)])) for m in range(-n, n + 1)]


def spectral_row(shape, n, doubled=False, n_max=None, precision=None):
    """Degree-n row as a PartitionRow (see ``families.spheroid_row``)."""
    from .families import spheroid_row

    shape = _as_shape(shape)
    return spheroid_row(shape.xi0, n, doubled=doubled,
                        n_max=n_max if n_max is not None else max(n, 200),
                        precision=precision)


# ---------------------------------------------------------------------------
# Willmore energy

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)
_GL_COARSE = np.polynomial.legendre.leggauss(10)


def _panel(f, lo, hi, rule):
    nodes, weights = rule
    half = 0.5 * (hi - lo)
    return half * float(np.dot(weights, f(lo + half + half * nodes)))


def adaptive_gauss_legendre(f, lo, hi, rel_tol=1e-12, max_panels=4096):
    """Integrate a vectorised f on [lo, hi] by bisecting panels until the
    10- and 20-point Gauss-Legendre rules agree."""
    fine = (_GL_NODES, _GL_WEIGHTS)
    scale = abs(_panel(f, lo, hi, fine)) or 1.0
    todo = [(lo, hi)]
    parts = []
    panels = 0
    while todo:
        a, b = todo.pop()
        panels += 1
        if panels > max_panels:
            raise QuadratureNonConvergence(f"more than {max_panels} panels on [{lo}, {hi}]")
        good = _panel(f, a, b, fine)
        rough = _panel(f, a, b, _GL_COARSE)
        if abs(good - rough) <= rel_tol * scale * (b - a) / (hi - lo):
            parts.append(good)
        else:
            mid = 0.5 * (a + b)
            todo.extend([(a, mid), (mid, b)])
    return math.fsum(parts)


def _willmore_axes(a, c):
    """Integral of H^2 dA over the spheroid with equatorial semi-axis a and
    polar semi-axis c, H the mean of the principal curvatures."""

    def integrand(theta):
        sin, cos = np.sin(theta), np.cos(theta)
        s = np.sqrt((a * cos) ** 2 + (c * sin) ** 2)
        k_meridian = a * c / s**3
        k_parallel = c / (a * s)
        return (0.5 * (k_meridian + k_parallel)) ** 2 * 2 * np.pi * a * sin * s

    # symmetric about the equator
    return 2 * adaptive_gauss_legendre(integrand, 0.0, 0.5 * math.pi)


def willmore_energy(shape, scale=1.0):
    """Willmore energy of the spheroid; scale-free and at least 4 pi."""
    shape = _as_shape(shape)
    a, c = shape.semi_axes(scale)
    return _willmore_axes(a, c)


def weyl_from_willmore(willmore, chi=EULER_CHAR):
    """Leading Weyl coefficient sqrt((3W - 2 pi chi) / (128 pi))."""
    return math.sqrt((3 * willmore - 2 * math.pi * chi) / (128 * math.pi))


@dataclass
class WeylReport:
    xi0: float
    willmore: float
    chi: int
    coeff: float
    coeff_doubled: float
    empirical_fit: object = None

    def to_dict(self):
        fit = None
        if self.empirical_fit is not None:
            f = self.empirical_fit
            fit = {"C_hat": f.C_hat, "alpha_hat": f.alpha_hat,
                   "window": list(f.window), "residual": f.residual}
        xi0 = "inf" if math.isinf(self.xi0) else self.xi0
        return {"xi0": xi0, "willmore": self.willmore, "chi": self.chi,
                "coeff": self.coeff, "coeff_doubled": self.coeff_doubled, "fit": fit}


def weyl_coefficient(shape, fit_window=(1000, 10000), fit=True, n_max=200,
                     precision=None, n_max_limit=3200):
    """Weyl coefficient from the Willmore energy, with an empirical check.

    The fit runs on the doubled spectral family; ``n_max`` is doubled until
    the window can be enumerated or ``n_max_limit`` is hit.
    """
    shape = _as_shape(shape)
    w = willmore_energy(shape)
    coeff = weyl_from_willmore(w)
    if coeff < 0.25 - 1e-12:
        raise GateFailure(f"Weyl coefficient {coeff} below the sphere value 1/4")
    report = WeylReport(shape.xi0, w, EULER_CHAR, coeff, 2 * coeff)
    if fit:
        from .analysis import decay_fit
        from .families import spheroid_family

        while True:
            fam = spheroid_family(shape.xi0, doubled=True, n_max=n_max, precision=precision)
            try:
                report.empirical_fit = decay_fit(fam, fit_window)
                break
            except RowLimitExceeded:
                if 2 * n_max > n_max_limit:
                    raise
                n_max *= 2
    return report


def _doubled_coeff(xi0):
    return 2 * weyl_from_willmore(willmore_energy(SpheroidShape(xi0)))


def solve_xi0(target_C, precision=None, tol=1e-8, samples=12):
    """Spheroid whose doubled spectrum has Weyl coefficient ``target_C``.

    ``target_C == 1/2`` returns the sphere. The bracket grows from xi0 = 2
    (doubling upward, halving xi0 - 1 downward) within [1.02, 1e6], or down
    to 1.001 in extended precision; bisection then runs on xi0.
    """
    precision = precision or default_precision()
    if target_C == 0.5:
        return SpheroidShape(math.inf)
    if not target_C > 0.5 + 1e-6:
        raise BracketNotFound(f"target {target_C} is not above the minimum coefficient 1/2")
    floor = EXTENDED_FLOOR if precision == "extended" else PRECISION_WALL

    lo = hi = 2.0
    g = _doubled_coeff(2.0)
    if g > target_C:
        while g > target_C:
            if hi >= XI0_CAP:
                raise BracketNotFound(f"target {target_C} needs xi0 beyond {XI0_CAP}")
            lo, hi = hi, min(2 * hi, XI0_CAP)
            g = _doubled_coeff(hi)
    else:
        while g <= target_C:
            if lo <= floor:
                raise BracketNotFound(
                    f"target {target_C} needs xi0 below {floor} ({precision} precision)")
            hi, lo = lo, max(1 + (lo - 1) / 2, floor)
            g = _doubled_coeff(lo)

    grid = np.geomspace(lo - 1, hi - 1, samples) + 1
    values = [_doubled_coeff(x) for x in grid]
    if any(b >= a for a, b in zip(values, values[1:])):
        raise NonMonotoneMap(f"coefficient not decreasing in xi0 on [{lo}, {hi}]")

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g = _doubled_coeff(mid)
        if abs(g - target_C) < tol:
            return SpheroidShape(mid)
        if g > target_C:
            lo = mid
        else:
            hi = mid
    raise BracketNotFound(f"bisection did not reach {tol} for target {target_C}")


# ---------------------------------------------------------------------------
# Nystrom oracle

NYSTROM_BUDGET = 4000


def spheroid_mesh(shape, n_polar, n_azimuth):
    """Product rule: Gauss-Legendre in u = cos(theta), trapezoid in phi.

    Returns points (N, 3), outward unit normals (N, 3) and area weights (N,).
    """
    a, c = _as_shape(shape).semi_axes()
    u, wu = np.polynomial.legendre.leggauss(n_polar)
    phi = 2 * np.pi * np.arange(n_azimuth) / n_azimuth
    U, PHI = np.meshgrid(u, phi, indexing="ij")
    r = a * np.sqrt(1 - U**2)
    pts = np.stack([r * np.cos(PHI), r * np.sin(PHI), c * U], axis=-1).reshape(-1, 3)
    jac = a * np.sqrt((a * U) ** 2 + c * c * (1 - U**2))
    weights = (jac * wu[:, None] * (2 * np.pi / n_azimuth)).ravel()
    normals = pts / np.array([a * a, a * a, c * c])
    normals /= np.linalg.norm(normals, axis=1)[:, None]
    return pts, normals, weights


def nystrom_matrix(pts, normals, weights):
    """Discretised double-layer operator <y - x, nu(y)> / (4 pi |x - y|^3).

    The weakly singular diagonal is removed by subtracting phi(x) under the
    integral and adding back phi(x) K[1](x) = phi(x)/2.
    """
    xn = np.einsum("ij,ij->i", pts, normals)
    num = xn[None, :] - pts @ normals.T
    sq = np.einsum("ij,ij->i", pts, pts)
    r2 = sq[:, None] + sq[None, :] - 2 * pts @ pts.T
    np.fill_diagonal(r2, 1.0)
    K = num / (4 * np.pi * r2**1.5) * weights[None, :]
    np.fill_diagonal(K, 0.0)
    K[np.diag_indices_from(K)] = 0.5 - K.sum(axis=1)
    return K


def nystrom_oracle(shape, mesh_size=2000, k=9, budget=NYSTROM_BUDGET):
    """The k largest eigenvalues of a dense Nyström discretisation."""
    shape = _as_shape(shape)
    if mesh_size > budget:
        raise BudgetExceeded(f"{mesh_size} nodes requested, budget is {budget}")
    n_polar = max(4, round(math.sqrt(mesh_size / 2)))
    n_azimuth = 2 * n_polar
    if n_polar * n_azimuth > budget:
        n_polar -= 1
        n_azimuth = 2 * n_polar
    K = nystrom_matrix(*spheroid_mesh(shape, n_polar, n_azimuth))
    try:
        ev = np.linalg.eigvals(K)
    except np.linalg.LinAlgError as err:
        raise EigenSolveFailure(str(err)) from err
    if not np.all(np.isfinite(ev)):
        raise EigenSolveFailure("non-finite eigenvalues")
    return np.sort(ev.real)[::-1][:k]
