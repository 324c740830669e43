import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from minprod.errors import BoundExceeded, EntryAboveBound, NonPositiveMultiplicity, NonPositiveScale
from minprod.oracle import brute_force_pairs
from minprod.spectrum import (
    EMPTY,
    INF,
    Spectrum,
    as_rational,
    count_below,
    format_rational,
    make_spectrum,
    merge,
    minkowski_sum,
    multiplicity_at,
    scale,
    shift,
    truncate,
)

from conftest import rationals, spectra

F = Fraction


def sp(pairs, bound=INF):
    return make_spectrum(pairs, bound)


def entries(s):
    return [(v, m) for v, m in s.entries]


# -- construction ---------------------------------------------------------------

def test_make_spectrum_identity():
    s = sp([(0, 1), (3, 4)], 5)
    assert entries(s) == [(0, 1), (3, 4)] and s.bound == 5


def test_make_spectrum_sorts_and_aggregates():
    s = sp([(3, 2), (0, 1), (3, 2)], 3)
    assert entries(s) == [(0, 1), (3, 4)] and s.bound == 3


def test_make_spectrum_rejects_entry_above_bound():
    with pytest.raises(EntryAboveBound):
        sp([(6, 1)], 5)


@pytest.mark.parametrize("mult", [0, -1])
def test_make_spectrum_rejects_bad_multiplicity(mult):
    with pytest.raises(NonPositiveMultiplicity):
        sp([(1, mult)], 5)


def test_direct_construction_checks_order():
    with pytest.raises(ValueError):
        Spectrum(((F(2), 1), (F(1), 1)), F(3))


def test_rationals_are_lowest_terms():
    s = sp([(F(2, 4), 1)], F(6, 4))
    assert s.entries[0][0].denominator == 2 and s.bound == F(3, 2)


def test_floats_refused():
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert as_rational("3/6") == F(1, 2)


def test_format_rational():
    assert format_rational(F(36, 5)) == "36/5"
    assert format_rational(F(-4)) == "-4"
    assert format_rational(INF) == "inf"


def test_empty_bundle():
    assert EMPTY.is_empty_bundle
    assert not sp([], 3).is_empty_bundle
    assert EMPTY.min_value == INF


# -- scale, shift, merge ----------------------------------------------------------

def test_scale_linear():
    s = scale(sp([(0, 1), (1, 2)], 4), 2)
    assert entries(s) == [(0, 1), (2, 2)] and s.bound == 8


def test_scale_circle_spectrum_for_clifford_torus():
    circle = sp([(0, 1), (1, 2), (4, 2)], 4)
    s = scale(circle, 2)
    assert entries(s) == [(0, 1), (2, 2), (8, 2)] and s.bound == 8


def test_scale_empty():
    assert scale(EMPTY, 3) == EMPTY


@pytest.mark.parametrize("c", [0, -1])
def test_scale_rejects_non_positive(c):
    with pytest.raises(NonPositiveScale):
        scale(sp([(0, 1)], 1), c)


def test_shift_examples():
    a = shift(sp([(0, 1)], 3), -4)
    assert entries(a) == [(-4, 1)] and a.bound == -1
    b = shift(sp([(2, 2), (4, 1)], 4), -4)
    assert entries(b) == [(-2, 2), (0, 1)] and b.bound == 0
    assert shift(EMPTY, 7) == EMPTY


def test_merge_examples():
    m = merge(sp([(0, 1)], 5), sp([(0, 2), (3, 1)], 4))
    assert entries(m) == [(0, 3), (3, 1)] and m.bound == 4
    s = sp([(1, 1)], 2)
    assert merge(EMPTY, s) == s
    clifford = merge(sp([(-4, 1)], 0), sp([(-2, 4)], 0))
    assert entries(clifford) == [(-4, 1), (-2, 4)] and clifford.bound == 0


def test_merge_truncates_to_smaller_bound():
    m = merge(sp([(0, 1), (5, 1)], 5), sp([(1, 1)], 2))
    assert entries(m) == [(0, 1), (1, 1)] and m.bound == 2


# -- minkowski sum -------------------------------------------------------------------

def test_minkowski_circle_pairs():
    s = sp([(0, 1), (1, 2)], 4)
    got = minkowski_sum(s, s)
    assert entries(got) == [(0, 1), (1, 4), (2, 4)] and got.bound == 4


def test_minkowski_identity_element():
    s = sp([(1, 2), (3, 1)], 3)
    assert minkowski_sum(sp([(0, 1)]), s) == s


def test_minkowski_bound_rule():
    got = minkowski_sum(sp([(-4, 1)], 0), sp([(0, 1), (3, 4)], 3))
    assert entries(got) == [(-4, 1), (-1, 4)] and got.bound == -1


def test_minkowski_empty_bundle_absorbs():
    assert minkowski_sum(EMPTY, sp([(0, 1)], 3)) == EMPTY
    assert minkowski_sum(sp([(0, 1)], 3), EMPTY) == EMPTY


# -- counting -------------------------------------------------------------------------

CLIFFORD_JACOBI = sp([(-4, 1), (-2, 4), (0, 4)], 0)


def test_count_below_clifford_index():
    assert count_below(CLIFFORD_JACOBI, 0) == 5


def test_count_below_under_minimum():
    assert count_below(CLIFFORD_JACOBI, -5) == 0


def test_count_below_past_bound():
    with pytest.raises(BoundExceeded):
        count_below(sp([(0, 1), (3, 4)], 3), 4)


def test_multiplicity_examples():
    assert multiplicity_at(CLIFFORD_JACOBI, 0) == 4
    assert multiplicity_at(sp([(0, 1)], 1), F(1, 2)) == 0
    with pytest.raises(BoundExceeded):
        multiplicity_at(sp([(-4, 1)], 0), 1)


def test_counts_on_empty_bundle():
    assert count_below(EMPTY, 100) == 0
    assert multiplicity_at(EMPTY, 0) == 0


# -- properties -----------------------------------------------------------------------

@given(spectra(), spectra())
def test_minkowski_matches_brute_force(s1, s2):
    got = minkowski_sum(s1, s2)
    want = brute_force_pairs(list(s1.entries), list(s2.entries), got.bound)
    assert list(got.entries) == want


@given(spectra(), spectra(), rationals())
def test_count_below_matches_brute_force(s1, s2, t):
    got = minkowski_sum(s1, s2)
    if t > got.bound:
        return
    pairs = brute_force_pairs(list(s1.entries), list(s2.entries), got.bound)
    assert count_below(got, t) == sum(m for v, m in pairs if v < t)


@given(spectra(), spectra())
def test_minkowski_commutative(s1, s2):
    assert minkowski_sum(s1, s2) == minkowski_sum(s2, s1)


@given(spectra(max_entries=5), spectra(max_entries=5), spectra(max_entries=5))
def test_minkowski_associative_on_overlap(a, b, c):
    left = minkowski_sum(minkowski_sum(a, b), c)
    right = minkowski_sum(a, minkowski_sum(b, c))
    t = min(left.bound, right.bound)
    assert truncate(left, t) == truncate(right, t)


@given(spectra(), spectra(), spectra())
def test_merge_commutative_associative(a, b, c):
    assert merge(a, b) == merge(b, a)
    assert merge(merge(a, b), c) == merge(a, merge(b, c))


@given(spectra(), spectra(), rationals(0, 5).filter(lambda c: c > 0))
def test_scale_distributes(a, b, c):
    assert scale(merge(a, b), c) == merge(scale(a, c), scale(b, c))
    assert scale(minkowski_sum(a, b), c) == minkowski_sum(scale(a, c), scale(b, c))


@given(spectra(), rationals(0, 5).filter(lambda c: c > 0))
def test_scale_inverse(s, c):
    assert scale(scale(s, c), 1 / c) == s


@given(spectra(), rationals())
def test_strict_plus_point_is_non_strict(s, t):
    if t > s.bound:
        with pytest.raises(BoundExceeded):
            count_below(s, t)
        return
    assert count_below(s, t) + multiplicity_at(s, t) == count_below(s, t, strict=False)


@given(spectra(), rationals())
def test_truncate_keeps_prefix(s, t):
    r = truncate(s, t)
    assert r.bound == min(s.bound, t)
    assert all(v <= r.bound for v in r.values)
    assert [e for e in s.entries if e[0] <= r.bound] == list(r.entries)


@given(st.lists(st.tuples(rationals(), st.integers(1, 3)), max_size=10))
def test_make_spectrum_total_multiplicity(pairs):
    s = sp(pairs)
    assert s.total_multiplicity == sum(m for _, m in pairs)
    assert s.values == sorted(set(v for v, _ in pairs))
    assert s.bound == INF and not math.isfinite(s.bound)
