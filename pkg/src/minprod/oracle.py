"""Brute-force reference computations.

Nothing here imports the engine; the point of these functions is to be
slow, obvious, and independent of the code they check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import numpy as np

__all__ = [
    "brute_force_pairs",
    "harmonic_multiplicity",
    "clifford_direct_count",
    "run_oracle_suite",
]

# Large prime for the modular rank certificate; p**2 fits in int64.
_PRIME = 2_147_483_647


def brute_force_pairs(l1, l2, t):
    """All pairwise sums ``a + b <= t`` with multiplicity products, aggregated.

    ``l1`` and ``l2`` are plain lists of ``(value, multiplicity)``.
    Returns a list of ``(value, multiplicity)`` sorted by value.
    """
    t = Fraction(t)
    table = {}
    for a, ma in l1:
        for b, mb in l2:
            s = Fraction(a) + Fraction(b)
            if s <= t:
                table[s] = table.get(s, 0) + ma * mb
    return sorted(table.items())


def _monomials(nvars, degree):
    """Exponent tuples of all monomials of the given total degree."""
    out = []
    for cut in itertools.combinations(range(degree + nvars - 1), nvars - 1):
        prev = -1
        exps = []
        for c in cut:
            exps.append(c - prev - 1)
            prev = c
        exps.append(degree + nvars - 1 - prev - 1)
        out.append(tuple(exps))
    return out


def _rank_mod_p(matrix):
    a = np.array(matrix, dtype=np.int64) % _PRIME
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), _PRIME - 2, _PRIME)
        a[rank] = (a[rank] * inv) % _PRIME
        below = np.nonzero(a[rank + 1:, col])[0] + rank + 1
        if below.size:
            factors = a[below, col].reshape(-1, 1)
            a[below] = (a[below] - factors * a[rank]) % _PRIME
        rank += 1
    return rank


def _rank_exact(matrix):
    m = [[Fraction(x) for x in row] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rank + 1, rows):
            if m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def _rank(matrix):
    # Rank over Q is at least the rank mod p, so full row rank mod p is an
    # exact certificate; anything else falls back to rational elimination.
    if not matrix:
        return 0
    r = _rank_mod_p(matrix)
    if r == len(matrix):
        return r
    return _rank_exact(matrix)


def harmonic_multiplicity(m, k):
    """Dimension of degree-``k`` harmonic polynomials in ``m + 1`` variables.

    Computed as dim(homogeneous degree k) - rank(Laplacian onto degree k-2)
    by building the Laplacian matrix on monomials explicitly.
    """
    nvars = m + 1
    source = _monomials(nvars, k)
    if k < 2:
        return len(source)
    target = _monomials(nvars, k - 2)
    index = {mono: i for i, mono in enumerate(target)}
    matrix = [[0] * len(source) for _ in target]
    for j, mono in enumerate(source):
        for i, e in enumerate(mono):
            if e >= 2:
                lowered = mono[:i] + (e - 2,) + mono[i + 1:]
                matrix[index[lowered]][j] += e * (e - 1)
    return len(source) - _rank(matrix)


def clifford_direct_count(dims, mode="index"):
    """Index or nullity of the Clifford product of great spheres ``S^{n_j}``.

    Carries five spectral counts through the factor-by-factor induction:
    Jacobi multiplicities at ``-2n``, ``-n`` and ``0``, and Laplace
    multiplicities at ``n`` and ``2n``.  No spectra are enumerated.
    """
    if len(dims) < 2:
        raise ValueError("need at least two factors")
    if mode not in ("index", "nullity"):
        raise ValueError(f"unknown mode {mode!r}")
    # a single great sphere: rank-0 normal bundle, first eigenvalue n with n+1
    # coordinate functions, nothing at 2n
    at_minus_2n, at_minus_n, at_zero = 0, 0, 0
    lap_n, lap_2n = dims[0] + 1, 0
    for m in dims[1:]:
        new = m + 1
        at_minus_2n, at_minus_n, at_zero, lap_n, lap_2n = (
            at_minus_2n + 1,
            lap_n + new + at_minus_2n * new + at_minus_n,
            lap_n * new + lap_2n + at_minus_n * new + at_zero,
            lap_n + new,
            lap_2n + lap_n * new,
        )
    if mode == "index":
        return at_minus_2n + at_minus_n
    return at_zero


def _sphere_list(m, top):
    """Naive Laplace eigenvalue list of the unit ``S^m`` up to ``top``."""
    out = []
    k = 0
    while k * (k + m - 1) <= top:
        out.append((Fraction(k * (k + m - 1)), harmonic_multiplicity(m, k)))
        k += 1
    return out


def run_oracle_suite(max_m=4, max_k=6):
    """Self-checks exposed on the command line; returns (name, ok) pairs."""
    results = []
    for m in range(1, max_m + 1):
        for k in range(0, max_k + 1):
            expected = comb(m + k, k) - (comb(m + k - 2, k - 2) if k >= 2 else 0)
            results.append((f"harmonic_multiplicity({m},{k}) == {expected}",
                            harmonic_multiplicity(m, k) == expected))
    circle = _sphere_list(1, 4)
    pairs = brute_force_pairs(circle, circle, 2)
    results.append(("S1 x S1 pair table", pairs == [(0, 1), (1, 4), (2, 4)]))
    for dims, idx, nul in [((1, 1), 5, 4), ((1, 1, 1), 14, 24), ((2, 2), 5 + 2, 9)]:
        results.append((f"clifford_direct_count{dims}",
                        clifford_direct_count(list(dims), "index") == idx
                        and clifford_direct_count(list(dims), "nullity") == nul))
    return results
