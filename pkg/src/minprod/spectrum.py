"""Truncated eigenvalue multisets over exact rationals.

A :class:`Spectrum` lists every eigenvalue of some operator in
``(-inf, bound]`` together with its multiplicity, and says nothing about
what lies above ``bound``.  All operations propagate that completeness
bound so that any count taken below it is certified.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Union

from .errors import BoundExceeded, EntryAboveBound, NonPositiveMultiplicity, NonPositiveScale

__all__ = [
    "INF",
    "EMPTY",
    "Spectrum",
    "as_rational",
    "format_rational",
    "make_spectrum",
    "scale",
    "shift",
    "merge",
    "minkowski_sum",
    "truncate",
    "count_below",
    "multiplicity_at",
]

# Sentinel for an unbounded completeness bound. Eigenvalues themselves are
# always Fractions.
INF = math.inf

Bound = Union[Fraction, float]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings; floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _as_bound(b) -> Bound:
    if b == INF or (isinstance(b, str) and b.strip().lower() in ("inf", "+inf", "infinity")):
        return INF
    return as_rational(b)


def format_rational(x) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Spectrum:
    entries: tuple[tuple[Fraction, int], ...]
    bound: Bound

    def __post_init__(self):
        prev = None
        for value, mult in self.entries:
            if mult <= 0:
                raise NonPositiveMultiplicity(f"multiplicity {mult} at {value}")
            if value > self.bound:
                raise EntryAboveBound(f"value {value} exceeds bound {self.bound}")
            if prev is not None and value <= prev:
                raise ValueError("entry values must be strictly increasing")
            prev = value

    @property
    def is_empty_bundle(self) -> bool:
        """True for the spectrum of an operator on a rank-0 bundle."""
        return not self.entries and self.bound == INF

    @property
    def min_value(self) -> Bound:
        """Certified lower bound on the spectrum: the least eigenvalue if one is
        listed, otherwise the completeness bound itself."""
        return self.entries[0][0] if self.entries else self.bound

    @property
    def values(self) -> list[Fraction]:
        return [v for v, _ in self.entries]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.entries)

    def __iter__(self) -> Iterator[tuple[Fraction, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        body = ", ".join(f"({format_rational(v)}, {m})" for v, m in self.entries)
        return f"{{{body}; bound {format_rational(self.bound)}}}"


EMPTY = Spectrum((), INF)


def _aggregate(pairs: Iterable[tuple[Fraction, int]]) -> tuple[tuple[Fraction, int], ...]:
    # input must already be sorted by value
    return tuple(
        (value, sum(m for _, m in group))
        for value, group in itertools.groupby(pairs, key=lambda e: e[0])
    )


def make_spectrum(entries: Iterable[tuple[object, int]], bound=INF) -> Spectrum:
    """Sort, merge duplicate values and validate against ``bound``."""
    bound = _as_bound(bound)
    cleaned = []
    for value, mult in entries:
        value = as_rational(value)
        if not isinstance(mult, int) or isinstance(mult, bool) or mult <= 0:
            raise NonPositiveMultiplicity(f"multiplicity {mult!r} at {value}")
        if value > bound:
            raise EntryAboveBound(f"value {value} exceeds bound {format_rational(bound)}")
        cleaned.append((value, mult))
    cleaned.sort(key=lambda e: e[0])
    return Spectrum(_aggregate(cleaned), bound)


def truncate(s: Spectrum, t) -> Spectrum:
    t = _as_bound(t)
    if s.is_empty_bundle:
        return s
    return Spectrum(tuple(e for e in s.entries if e[0] <= t), min(s.bound, t))


def scale(s: Spectrum, c) -> Spectrum:
    c = as_rational(c)
    if c <= 0:
        raise NonPositiveScale(f"scale factor must be positive, got {c}")
    bound = s.bound if s.bound == INF else s.bound * c
    return Spectrum(tuple((v * c, m) for v, m in s.entries), bound)


def shift(s: Spectrum, c) -> Spectrum:
    c = as_rational(c)
    if s.is_empty_bundle:
        return s
    bound = s.bound if s.bound == INF else s.bound + c
    return Spectrum(tuple((v + c, m) for v, m in s.entries), bound)


def merge(s1: Spectrum, s2: Spectrum) -> Spectrum:
    """Multiset union, as for an operator that is block diagonal."""
    bound = min(s1.bound, s2.bound)
    merged = heapq.merge(
        (e for e in s1.entries if e[0] <= bound),
        (e for e in s2.entries if e[0] <= bound),
        key=lambda e: e[0],
    )
    return Spectrum(_aggregate(merged), bound)


def minkowski_sum(s1: Spectrum, s2: Spectrum) -> Spectrum:
    """Spectrum of ``A (x) 1 + 1 (x) B`` from the spectra of ``A`` and ``B``.

    Values add and multiplicities multiply.  The result is certified up to
    ``min(bound1 + min2, bound2 + min1)``: any pair summing to at most that
    value has both addends inside their certified ranges.
    """
    if s1.is_empty_bundle or s2.is_empty_bundle:
        return EMPTY
    bound = min(s1.bound + s2.min_value, s2.bound + s1.min_value)

    def row(v1: Fraction, m1: int) -> Iterator[tuple[Fraction, int]]:
        for v2, m2 in s2.entries:
            total = v1 + v2
            if total > bound:
                return
            yield total, m1 * m2

    rows = [row(v1, m1) for v1, m1 in s1.entries if v1 + s2.min_value <= bound]
    return Spectrum(_aggregate(heapq.merge(*rows, key=lambda e: e[0])), bound)


def _certify(s: Spectrum, t: Fraction) -> None:
    if t > s.bound:
        raise BoundExceeded(
            f"spectrum is certified only up to {format_rational(s.bound)}, "
            f"cannot certify a count at {format_rational(t)}"
        )


def count_below(s: Spectrum, t, strict: bool = True) -> int:
    """Multiplicity-weighted count of eigenvalues ``< t`` (or ``<= t``)."""
    t = as_rational(t)
    _certify(s, t)
    if strict:
        return sum(m for v, m in s.entries if v < t)
    return sum(m for v, m in s.entries if v <= t)


def multiplicity_at(s: Spectrum, t) -> int:
    t = as_rational(t)
    _certify(s, t)
    for v, m in s.entries:
        if v == t:
            return m
        if v > t:
            break
    return 0
