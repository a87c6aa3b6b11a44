"""Partition rows, families and the lazy decreasing enumerator.

A family is an infinite triangle of rows; row N splits an interval of length
``target_sum`` into positive pieces (2N+1 of them for odd families). All the
pieces of all rows, taken as one multiset, are listed largest first.

Rows are stored run-length encoded as ``(length, multiplicity)`` pairs in row
order, which keeps equi-partition rows O(1) in memory.
"""
from __future__ import annotations

import functools
import heapq
import math
from fractions import Fraction
from numbers import Rational

from .errors import (InvalidExponent, NonPositiveLength, RowLimitExceeded,
                     StalledStream, SumMismatch, UbViolation, WrongCardinality)

ROW_SUM_TOL = 1e-10
ROW_BUDGET = 10**6
ROW_CACHE = 10**4


class PartitionRow:
    """Row N of a partition diagram.

    Parameters
    ----------
    order : int
        Row index N.
    runs : sequence of (length, count)
        Consecutive equal lengths collapsed, in row order.
    target_sum : Fraction or float
        Length of the interval being partitioned.
    exact : bool
        True when every length is a ``Fraction``.
    """

    __slots__ = ("order", "runs", "target_sum", "exact")

    def __init__(self, order, runs, target_sum=1, exact=True):
        self.order = int(order)
        self.runs = tuple((v, int(c)) for v, c in runs)
        self.target_sum = target_sum
        self.exact = exact

    @classmethod
    def from_lengths(cls, order, lengths, target_sum=1, exact=None):
        lengths = list(lengths)
        if exact is None:
            exact = all(isinstance(v, Rational) for v in lengths)
        runs = []
        for v in lengths:
            if runs and runs[-1][0] == v:
                runs[-1][1] += 1
            else:
                runs.append([v, 1])
        return cls(order, runs, target_sum, exact)

    @property
    def lengths(self):
        return [v for v, c in self.runs for _ in range(c)]

    @property
    def size(self):
        return sum(c for _, c in self.runs)

    def total(self):
        if self.exact:
            return sum((v * c for v, c in self.runs), Fraction(0))
        return math.fsum(float(v) * c for v, c in self.runs)

    def max(self):
        return max(v for v, _ in self.runs)

    def power_sum(self, p):
        """sum_k L_k^p as a float."""
        return math.fsum(c * float(v) ** p for v, c in self.runs)

    def sorted_runs(self):
        """(length, first position k, count) largest first, ties by k."""
        out = []
        k = 1
        for v, c in self.runs:
            out.append((v, k, c))
            k += c
        out.sort(key=lambda r: (-r[0], r[1]))
        return out

    def __eq__(self, other):
        if not isinstance(other, PartitionRow):
            return NotImplemented
        return (self.order, self.lengths, self.target_sum) == (
            other.order, other.lengths, other.target_sum)

    def __repr__(self):
        body = ", ".join(f"{v}x{c}" if c > 1 else str(v) for v, c in self.runs[:6])
        if len(self.runs) > 6:
            body += ", ..."
        return f"PartitionRow(N={self.order}, [{body}], T={self.target_sum})"


def validate_row(row, tol=None, kind="odd"):
    """Check positivity, the row sum and (for odd families) the row size.

    Nothing is normalised: a mismatch raises. Exact rows are compared with
    zero tolerance.
    """
    if tol is None:
        tol = 0 if row.exact else ROW_SUM_TOL
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if row.exact and tol != 0:
        raise ValueError("exact rows are validated with tol = 0")
    for v, c in row.runs:
        if not v > 0:
            raise NonPositiveLength(f"row {row.order} contains length {v}")
        if c < 1:
            raise WrongCardinality(f"row {row.order} has a run of multiplicity {c}")
    if kind == "odd" and row.size != 2 * row.order + 1:
        raise WrongCardinality(
            f"row {row.order} has {row.size} entries, expected {2 * row.order + 1}")
    total = row.total()
    if row.exact:
        if total != row.target_sum:
            raise SumMismatch(f"row {row.order} sums to {total}, expected {row.target_sum}")
    elif abs(total - float(row.target_sum)) > tol:
        raise SumMismatch(
            f"row {row.order} sums to {total!r}, off by {total - float(row.target_sum):.3e}")
    return row


def row_holder_margin(row, p):
    """sum_k L_k^p - count^(1-p) T^p.

    Non-negative for every valid row by Hölder's inequality, zero exactly
    for equal pieces. Exact rows with integer p give an exact ``Fraction``.
    """
    if not p > 1:
        raise InvalidExponent(f"p must exceed 1, got {p}")
    n = row.size
    if row.exact and float(p).is_integer():
        p = int(p)
        power = sum((c * v**p for v, c in row.runs), Fraction(0))
        return power - Fraction(row.target_sum) ** p / Fraction(n) ** (p - 1)
    return row.power_sum(p) - n ** (1.0 - p) * float(row.target_sum) ** p


class PartitionFamily:
    """An infinite diagram of rows plus an upper-bound contract.

    ``ub(N)`` must bound the largest length in every row N' >= N; it is
    non-increasing and tends to zero. That is what makes the decreasing
    enumeration well defined: once ``ub(frontier)`` drops below a candidate
    value, no unseen row can beat it.

    Parameters
    ----------
    name : str
    row_fn : callable N -> PartitionRow
    ub : callable N -> number
    kind : {"odd", "general"}
    exact : bool
    target_sum : number
    first_order : int
        Index of the first row (1 for Farey orders, 0 otherwise).
    max_order : int or None
        Rows above this are refused.
    envelope : (E, N0) or None
        Promise that ub(N) <= E / (2N+1) for N >= N0; used for tail sums.
    desc_runs : callable N -> iterator of (length, count), optional
        Lazy largest-first stream of row N, used when origins are not needed.
    params : dict
        Free-form metadata.
    flags : tuple of str
    """

    def __init__(self, name, row_fn, ub, *, kind="odd", exact=True, target_sum=1,
                 first_order=0, max_order=None, envelope=None, desc_runs=None,
                 params=None, flags=(), cache_size=ROW_CACHE):
        if kind not in ("odd", "general"):
            raise ValueError(f"unknown family kind {kind!r}")
        self.name = name
        self.kind = kind
        self.exact = exact
        self.target_sum = target_sum
        self.first_order = first_order
        self.max_order = max_order
        self.envelope = envelope
        self.params = dict(params or {})
        self.flags = tuple(flags)
        self._row_fn = row_fn
        self._ub = ub
        self._desc_runs = desc_runs
        self._row = functools.lru_cache(maxsize=cache_size)(self._make_row)

    def __repr__(self):
        return f"PartitionFamily({self.name!r}, kind={self.kind})"

    def _check_order(self, N):
        if N < self.first_order:
            raise ValueError(f"{self.name}: rows start at {self.first_order}, got {N}")
        if self.max_order is not None and N > self.max_order:
            raise RowLimitExceeded(
                f"{self.name}: row {N} is beyond the configured maximum {self.max_order}")

    def _make_row(self, N):
        row = self._row_fn(N)
        validate_row(row, kind=self.kind)
        bound = self.ub(N)
        if row.max() > bound:
            raise UbViolation(f"{self.name}: row {N} has max {row.max()} > ub {bound}")
        return row

    def row(self, N):
        self._check_order(N)
        return self._row(N)

    def ub(self, N):
        self._check_order(N)
        return self._ub(N)

    def desc_runs(self, N):
        """Largest-first (length, count) runs of row N."""
        self._check_order(N)
        if self._desc_runs is None:
            return ((v, c) for v, _, c in self.row(N).sorted_runs())
        return self._desc_runs(N)

    def check_ub(self, horizon=2**20):
        """Sample ub on a doubling grid and require it to be non-increasing
        and to drop strictly below its starting value."""
        last = self.max_order if self.max_order is not None else horizon
        grid = [self.first_order]
        step = 1
        while grid[-1] + step <= last:
            grid.append(grid[-1] + step)
            step *= 2
        if grid[-1] != last:
            grid.append(last)
        values = [self.ub(N) for N in grid]
        for (n0, u0), (n1, u1) in zip(zip(grid, values), zip(grid[1:], values[1:])):
            if u1 > u0:
                raise UbViolation(f"{self.name}: ub({n1}) = {u1} > ub({n0}) = {u0}")
        if not values[0] > 0:
            raise UbViolation(f"{self.name}: ub must be positive")
        if len(values) > 1 and not values[-1] < values[0]:
            raise UbViolation(f"{self.name}: ub does not decay on the sampled grid")
        return self


class DecreasingStream:
    """Lazy largest-first cursor over all lengths of a family.

    Rows are merged k-way through a heap holding one pending run per row.
    Before a value v leaves the heap, rows are expanded until
    ``ub(frontier) < v``. Equal values come out in (N, k) order.

    With ``origins=False`` each item is the bare length and rows may be read
    through the family's lazy ``desc_runs`` stream; otherwise items are
    ``(length, (N, k))``.
    """

    def __init__(self, family, origins=True, row_budget=ROW_BUDGET):
        self.family = family
        self.origins = origins
        self.row_budget = row_budget
        self.frontier = family.first_order
        self.emitted = 0
        self._heap = []
        self._cursors = {}
        self._last_ub = None

    def _expand(self):
        N = self.frontier
        bound = self.family.ub(N)
        if self._last_ub is not None and bound > self._last_ub:
            raise UbViolation(f"{self.family.name}: ub({N}) = {bound} exceeds ub({N - 1})")
        self._last_ub = bound
        if self.origins:
            it = iter(self.family.row(N).sorted_runs())
        else:
            it = ((v, None, c) for v, c in self.family.desc_runs(N))
        self._cursors[N] = it
        self._push_next(N, bound)
        self.frontier += 1

    def _push_next(self, N, bound=None):
        nxt = next(self._cursors[N], None)
        if nxt is None:
            del self._cursors[N]
            return
        v, k, c = nxt
        if bound is not None and v > bound:
            raise UbViolation(f"{self.family.name}: row {N} has max {v} > ub {bound}")
        heapq.heappush(self._heap, (-v, N, v, k, c))

    def _settle(self):
        """Expand rows until the heap top is certified to be the maximum."""
        spent = 0
        while True:
            if self._heap and self.family.ub(self.frontier) < self._heap[0][2]:
                return
            if spent >= self.row_budget:
                top = self._heap[0][2] if self._heap else None
                raise StalledStream(
                    f"{self.family.name}: ub({self.frontier}) still >= {top} after "
                    f"{spent} more rows")
            self._expand()
            spent += 1

    def take(self, count):
        """The next ``count`` items."""
        if count < 1:
            raise ValueError("count must be positive")
        out = []
        heap = self._heap
        while len(out) < count:
            self._settle()
            neg, N, v, k, c = heapq.heappop(heap)
            n = min(c, count - len(out))
            if self.origins:
                out.extend((v, (N, k + i)) for i in range(n))
            else:
                out.extend([v] * n)
            if n < c:
                heapq.heappush(heap, (neg, N, v, None if k is None else k + n, c - n))
            else:
                self._push_next(N)
        self.emitted += len(out)
        return out

    def __iter__(self):
        return self

    def __next__(self):
        return self.take(1)[0]


def enumerate_family(family, count, origins=True, row_budget=ROW_BUDGET):
    """First ``count`` terms a_1 >= a_2 >= ... of the family.

    Returns ``(value, (N, k))`` pairs, or bare values with ``origins=False``.
    """
    if count < 1:
        raise ValueError("count must be positive")
    return DecreasingStream(family, origins=origins, row_budget=row_budget).take(count)


def c_sequence(family, j_values):
    """(j, sqrt(j) a_j) for sorted ``j_values``; exact when j is a square
    and the family is exact."""
    j_values = list(j_values)
    if j_values != sorted(j_values) or not j_values or j_values[0] < 1:
        raise ValueError("j_values must be positive and sorted ascending")
    values = enumerate_family(family, j_values[-1], origins=False)
    out = []
    for j in j_values:
        a = values[j - 1]
        r = math.isqrt(j)
        if r * r == j and isinstance(a, Rational):
            out.append((j, r * a))
        else:
            out.append((j, math.sqrt(j) * float(a)))
    return out
