"""Concrete partition families and the ``FamilySpec`` string syntax.

Spec strings::

    equi
    farey
    spheroid:xi0=1.5[,n_max=200]      NP spectrum, rows partition [0, 1/2]
    spheroid2:xi0=1.5[,n_max=200]     same spectrum doubled onto [0, 1]
    custom:path.json[,extend=0]
    random:seed=7,conc=10
"""
from __future__ import annotations

import heapq
import json
import math
from fractions import Fraction

import numpy as np

from .errors import (IncompleteFamily, NonPositiveEigenvalue,
                     TraceIdentityViolation, UbViolation)
from .np_spectrum import TRACE_TOL, default_precision, spectrum_table
from .partition import PartitionFamily, PartitionRow

SPHEROID_N_MAX = 200
RANDOM_QUANTUM = 2**16


# -- equi-partitions ---------------------------------------------------------

def equi_row(N):
    """2N+1 copies of 1/(2N+1)."""
    n = 2 * N + 1
    return PartitionRow(N, [(Fraction(1, n), n)], 1, exact=True)


def equi_family():
    return PartitionFamily(
        "equi", equi_row, lambda N: Fraction(1, 2 * N + 1),
        envelope=(1, 0), desc_runs=lambda N: iter(equi_row(N).runs))


# -- Farey differences -------------------------------------------------------

def farey_sequence(order):
    """F_order on [0, 1] as Fractions, by the next-term recurrence."""
    a, b, c, d = 0, 1, 1, order
    out = [Fraction(0)]
    while c <= order:
        k = (order + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        out.append(Fraction(a, b))
    return out


def farey_row(order):
    """Gaps between consecutive terms of F_order."""
    if order < 1:
        raise ValueError("Farey order starts at 1")
    f = farey_sequence(order)
    return PartitionRow.from_lengths(order, (y - x for x, y in zip(f, f[1:])), 1, exact=True)


def farey_desc_runs(order):
    """Gaps of F_order, largest first, without building the row.

    Neighbours a/q < c/q' in F_order correspond one-to-one to ordered coprime
    pairs (q, q') with q, q' <= order and q + q' > order; their gap is
    1/(q q'). Pairs are walked by increasing product with a heap that is
    seeded lazily in q: a placeholder keyed by q * max(q, order - q + 1)
    (a lower bound for every product involving q, non-decreasing in q)
    is resolved only when it reaches the top.
    """
    def first_partner(q):
        r = max(q, order - q + 1)
        while r <= order and math.gcd(q, r) != 1:
            r += 1
        return r

    def next_partner(q, r):
        r += 1
        while r <= order and math.gcd(q, r) != 1:
            r += 1
        return r

    heap = [(max(1, order), 0, 1, 0)]
    while heap:
        product = heap[0][0]
        count = 0
        while heap and heap[0][0] == product:
            _, real, q, r = heapq.heappop(heap)
            if real:
                count += 1 if q == r else 2
                r = next_partner(q, r)
                if r <= order:
                    heapq.heappush(heap, (q * r, 1, q, r))
            else:
                if q + 1 <= order:
                    heapq.heappush(heap, ((q + 1) * max(q + 1, order - q), 0, q + 1, 0))
                r = first_partner(q)
                if r <= order:
                    heapq.heappush(heap, (q * r, 1, q, r))
        if count:
            yield Fraction(1, product), count


def farey_family():
    return PartitionFamily(
        "farey", farey_row, lambda order: Fraction(1, order), kind="general",
        first_order=1, desc_runs=farey_desc_runs)


# -- prolate spheroid spectra ------------------------------------------------

def spheroid_row(xi0, n, doubled=False, n_max=SPHEROID_N_MAX, precision=None):
    """The 2n+1 NP eigenvalues of degree n, largest first.

    Sum 1/2 (raw) or 1 (doubled). Every value of the doubled row is exactly
    twice the raw one.
    """
    if n > n_max:
        raise ValueError(f"degree {n} above n_max {n_max}")
    lam = spectrum_table(xi0, n_max, precision)[n, : n + 1]
    scale = 2.0 if doubled else 1.0
    runs = [(scale * float(lam[0]), 1)] + [(scale * float(v), 2) for v in lam[1:]]
    runs.sort(key=lambda r: -r[0])
    target = 1.0 if doubled else 0.5
    row = PartitionRow(n, runs, target, exact=False)
    if any(v <= 0 for v, _ in runs):
        raise NonPositiveEigenvalue(f"xi0={xi0}, n={n}")
    if abs(row.total() - target) > TRACE_TOL:
        raise TraceIdentityViolation(f"xi0={xi0}, n={n}: row sums to {row.total()!r}")
    return row


def spheroid_family(xi0, doubled=False, n_max=SPHEROID_N_MAX, precision=None):
    """Rows n = 0..n_max of the spheroid spectrum; higher rows are refused.

    ub(n) is the largest eigenvalue of row n; the whole table is checked for
    non-increasing row maxima when the family is built.
    """
    precision = precision or default_precision()
    lam = spectrum_table(xi0, n_max, precision)
    scale = 2.0 if doubled else 1.0
    row_max = scale * np.nanmax(lam, axis=1)
    bad = np.nonzero(np.diff(row_max) > 0)[0]
    if bad.size:
        n = int(bad[0])
        raise UbViolation(f"xi0={xi0}: row max rises from n={n} to n={n + 1}")
    name = f"spheroid{'2' if doubled else ''}:xi0={xi0!r}"
    return PartitionFamily(
        name, lambda n: spheroid_row(xi0, n, doubled, n_max, precision),
        lambda n: float(row_max[n]), exact=False, target_sum=1.0 if doubled else 0.5,
        max_order=n_max,
        params={"xi0": xi0, "doubled": doubled, "n_max": n_max, "precision": precision})


# -- random odd families -----------------------------------------------------

def _random_weights(seed, N, concentration):
    n = 2 * N + 1
    spread = math.floor(RANDOM_QUANTUM / concentration)
    rng = np.random.default_rng([seed, N])
    return RANDOM_QUANTUM + rng.integers(0, spread + 1, size=n), spread


def random_odd_family(seed, concentration):
    """Random odd partitions with exact rational rows.

    Row N draws 2N+1 integer weights uniformly from
    [Q, Q + floor(Q / concentration)] with Q = 2^16, seeded by (seed, N),
    and normalises them exactly. Every length is then at most
    (1 + 1/concentration) / (2N+1), which is the ub contract; large
    concentration collapses onto the equi-partition.
    """
    if not concentration > 0:
        raise ValueError("concentration must be positive")
    spread = math.floor(RANDOM_QUANTUM / concentration)
    env = Fraction(RANDOM_QUANTUM + spread, RANDOM_QUANTUM)

    def row(N):
        w, _ = _random_weights(seed, N, concentration)
        total = int(w.sum())
        return PartitionRow.from_lengths(N, (Fraction(int(x), total) for x in w), 1, exact=True)

    return PartitionFamily(
        f"random:seed={seed},conc={concentration}", row,
        lambda N: env / (2 * N + 1), envelope=(env, 0),
        params={"seed": seed, "concentration": concentration})


# -- custom families from JSON ------------------------------------------------

def family_from_json(doc, extend=True):
    """Build a family from ``{"name", "target_sum", "rows", "kind"}``.

    Rationals are "p/q" strings. Rows beyond the listed ones continue as
    equi-partitions of ``target_sum`` when ``extend`` is true (the family is
    then flagged ``equi-tail``); otherwise a finite family is rejected.
    """
    if not isinstance(doc, dict):
        with open(doc) as fh:
            doc = json.load(fh)
    name = doc.get("name", "custom")
    kind = doc.get("kind", "odd")
    target = Fraction(doc.get("target_sum", "1"))
    listed = [[Fraction(v) for v in r] for r in doc["rows"]]
    if not extend:
        raise IncompleteFamily(f"{name}: finite family with {len(listed)} rows and no tail")
    L = len(listed)

    def row(N):
        if N < L:
            return PartitionRow.from_lengths(N, listed[N], target, exact=True)
        n = 2 * N + 1
        return PartitionRow(N, [(target / n, n)], target, exact=True)

    # suffix maxima so ub(N) bounds every row N' >= N
    suffix = [target / (2 * L + 1)] * (L + 1)
    for N in range(L - 1, -1, -1):
        suffix[N] = max(suffix[N + 1], max(listed[N]) if listed[N] else 0)

    def ub(N):
        return suffix[N] if N < L else target / (2 * N + 1)

    return PartitionFamily(name, row, ub, kind=kind, target_sum=target,
                           envelope=(target, L), flags=("equi-tail",),
                           params={"rows": L})


# -- spec strings ------------------------------------------------------------

def _kv(text):
    out = {}
    for part in filter(None, text.split(",")):
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {part!r}")
        out[key.strip()] = value.strip()
    return out


def parse_family_spec(spec, precision=None):
    """Family from a spec string such as ``spheroid2:xi0=1.5``."""
    head, _, rest = spec.partition(":")
    if head == "equi" and not rest:
        return equi_family()
    if head == "farey" and not rest:
        return farey_family()
    if head in ("spheroid", "spheroid2"):
        kv = _kv(rest)
        if "xi0" not in kv:
            raise ValueError(f"{spec!r}: xi0 is required")
        return spheroid_family(float(kv["xi0"]), doubled=head == "spheroid2",
                               n_max=int(kv.get("n_max", SPHEROID_N_MAX)),
                               precision=kv.get("precision", precision))
    if head == "custom":
        path, _, opts = rest.partition(",")
        extend = _kv(opts).get("extend", "1") not in ("0", "false", "no")
        return family_from_json(path, extend=extend)
    if head == "random":
        kv = _kv(rest)
        return random_odd_family(int(kv.get("seed", 0)), float(kv.get("conc", 1)))
    raise ValueError(f"unknown family spec {spec!r}")
