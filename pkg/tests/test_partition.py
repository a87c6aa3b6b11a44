import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oddpart.errors import (InvalidExponent, NonPositiveLength, RowLimitExceeded,
                            StalledStream, SumMismatch, UbViolation, WrongCardinality)
from oddpart.families import equi_family
from oddpart.partition import (DecreasingStream, PartitionFamily, PartitionRow,
                               c_sequence, enumerate_family, row_holder_margin,
                               validate_row)


def F(*xs):
    return [Fraction(x) for x in xs]


# -- rows ------------------------------------------------------------------------

def test_row_run_length_encoding():
    row = PartitionRow.from_lengths(2, F("1/5", "1/5", "2/5", "1/10", "1/10"))
    assert row.runs == ((Fraction(1, 5), 2), (Fraction(2, 5), 1), (Fraction(1, 10), 2))
    assert row.size == 5 and row.total() == 1 and row.exact
    assert row.sorted_runs()[0] == (Fraction(2, 5), 3, 1)
    assert row.sorted_runs()[1] == (Fraction(1, 5), 1, 2)


def test_validate_row_errors():
    validate_row(PartitionRow.from_lengths(1, F("1/2", "1/4", "1/4")))
    with pytest.raises(SumMismatch):
        validate_row(PartitionRow.from_lengths(1, F("1/2", "1/4", "1/5")))
    with pytest.raises(WrongCardinality):
        validate_row(PartitionRow.from_lengths(1, F("1/2", "1/2")))
    with pytest.raises(NonPositiveLength):
        validate_row(PartitionRow.from_lengths(1, F("1", "0", "0")))
    with pytest.raises(ValueError):
        validate_row(PartitionRow.from_lengths(0, F("1")), tol=1e-3)


def test_validate_float_row_tolerance():
    row = PartitionRow.from_lengths(1, [0.2, 0.3, 0.5 + 5e-11], exact=False)
    validate_row(row)
    with pytest.raises(SumMismatch):
        validate_row(PartitionRow.from_lengths(1, [0.2, 0.3, 0.5 + 1e-9], exact=False))


def test_row_holder_margin_exact_zero_for_equi():
    row = equi_family().row(4)
    assert row_holder_margin(row, 3) == 0
    with pytest.raises(InvalidExponent):
        row_holder_margin(row, 1)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 1000), min_size=1, max_size=15).filter(lambda w: len(w) % 2),
       st.sampled_from([2, 3, 4, 2.5, 7.5]))
def test_holder_margin_nonnegative(weights, p):
    total = sum(weights)
    row = PartitionRow.from_lengths(len(weights) // 2, [Fraction(w, total) for w in weights])
    validate_row(row, tol=0)
    margin = row_holder_margin(row, p)
    assert margin >= -1e-15
    if len(set(weights)) == 1:
        assert margin == pytest.approx(0, abs=1e-15)


# -- families and the ub contract ---------------------------------------------

def test_family_rejects_bad_ub():
    fam = PartitionFamily("bad", lambda N: PartitionRow.from_lengths(
        N, [Fraction(1, 2)] + [Fraction(1, 4 * N)] * (2 * N), 1), lambda N: Fraction(1, 2 * N + 1))
    with pytest.raises(UbViolation):
        fam.row(1)


def test_constant_max_stalls():
    # every row starts with 1/2: no complete decreasing enumeration exists
    def row(N):
        if N == 0:
            return PartitionRow(0, [(Fraction(1), 1)], 1)
        return PartitionRow(N, [(Fraction(1, 2), 1), (Fraction(1, 4 * N), 2 * N)], 1)

    fam = PartitionFamily("half", row, lambda N: 1 if N == 0 else Fraction(1, 2))
    with pytest.raises(StalledStream):
        enumerate_family(fam, 3, row_budget=500)


def test_row_limit():
    fam = PartitionFamily("short", lambda N: PartitionRow(N, [(Fraction(1, 2 * N + 1), 2 * N + 1)], 1),
                          lambda N: Fraction(1, 2 * N + 1), max_order=3)
    with pytest.raises(RowLimitExceeded):
        fam.row(4)
    with pytest.raises(RowLimitExceeded):
        enumerate_family(fam, 20)


def test_check_ub():
    equi_family().check_ub()
    fam = PartitionFamily("flat", lambda N: None, lambda N: Fraction(1, 2))
    with pytest.raises(UbViolation):
        fam.check_ub()


# -- enumeration ---------------------------------------------------------------

def test_equi_prefix_with_origins():
    got = enumerate_family(equi_family(), 9)
    want = [(Fraction(1), (0, 1))] + [(Fraction(1, 3), (1, k)) for k in (1, 2, 3)] + \
        [(Fraction(1, 5), (2, k)) for k in range(1, 6)]
    assert got == want


def test_equi_closed_form():
    values = enumerate_family(equi_family(), 20000, origins=False)
    for j, v in enumerate(values, 1):
        assert v == Fraction(1, 2 * math.isqrt(j - 1) + 1)
    assert values[24 - 1] == Fraction(1, 9)


def test_stream_is_resumable():
    s = DecreasingStream(equi_family())
    first = s.take(7)
    rest = s.take(13)
    assert first + rest == enumerate_family(equi_family(), 20)
    assert s.emitted == 20
    assert next(iter(s)) == (Fraction(1, 9), (4, 5))


def test_c_sequence_exact_on_squares():
    out = dict(c_sequence(equi_family(), [1, 4, 9, 10, 1000000]))
    assert out[4] == Fraction(2, 3) and out[9] == Fraction(3, 5)
    assert out[10] == pytest.approx(math.sqrt(10) / 7)
    assert out[1000000] == Fraction(1000, 1999)


def _truncated_family(rng, n_rows):
    """Random odd rows for N < n_rows, then equi rows scaled below them."""
    rows = []
    for N in range(n_rows):
        w = [rng.randint(1, 6) for _ in range(2 * N + 1)]
        t = sum(w)
        rows.append([Fraction(x, t) for x in w])

    def row(N):
        if N < n_rows:
            return PartitionRow.from_lengths(N, rows[N], 1)
        return PartitionRow(N, [(Fraction(1, 2 * N + 1), 2 * N + 1)], 1)

    suffix = [Fraction(1, 2 * n_rows + 1)] * (n_rows + 1)
    for N in range(n_rows - 1, -1, -1):
        suffix[N] = max(suffix[N + 1], max(rows[N]))
    ub = lambda N: suffix[N] if N < n_rows else Fraction(1, 2 * N + 1)  # noqa: E731
    return PartitionFamily(f"trunc{n_rows}", row, ub), rows


@pytest.mark.parametrize("case", range(20))
def test_enumerator_matches_brute_force(case):
    rng = random.Random(1000 + case)
    n_rows = rng.randint(1, 25)
    fam, rows = _truncated_family(rng, n_rows)
    # every listed entry is at least 1/(2 * 6 * n_rows), so taking all listed
    # entries plus the equi tail down to that level covers the prefix
    floor = min(min(r) for r in rows)
    brute = []
    for N, r in enumerate(rows):
        brute += [(v, (N, k)) for k, v in enumerate(r, 1)]
    N = n_rows
    while Fraction(1, 2 * N + 1) >= floor:
        brute += [(Fraction(1, 2 * N + 1), (N, k)) for k in range(1, 2 * N + 2)]
        N += 1
    brute.sort(key=lambda item: (-item[0], item[1]))
    count = sum(1 for v, _ in brute if v >= floor)
    got = enumerate_family(fam, count)
    assert got == brute[:count]
    values = enumerate_family(fam, count, origins=False)
    assert values == [v for v, _ in brute[:count]]
