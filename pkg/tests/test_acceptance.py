"""Acceptance suite: ten criteria, exact arithmetic, zero tolerance.

Each criterion records one PASS/FAIL line (printed in the pytest terminal
summary, or directly when this file is run as a script).
"""

from __future__ import annotations

import random
import sys
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb

import pytest

from minprod.analyzer import (
    constant_S_families,
    degenerate,
    index,
    killing_dimension,
    lower_bounds,
    mu1,
    nullity,
)
from minprod.catalog import (
    flat_torus,
    isoparametric_hypersurface,
    named_surface,
    otfkm_focal,
    sphere,
    veronese,
)
from minprod.composer import (
    Leaf,
    Product,
    binary_product,
    jacobi_upto,
    laplace_upto,
    product_descriptor,
    scalar_curvature,
    scalar_ratio_defect,
    second_fundamental,
)
from minprod.oracle import brute_force_pairs, clifford_direct_count, harmonic_multiplicity
from minprod.spectrum import make_spectrum, minkowski_sum

F = Fraction

RESULTS: dict[int, str] = {}

TITLES = {
    1: "Clifford hypersurfaces: Ind = n+3, Null = (n1+1)(n2+1)",
    2: "Clifford k-factor products: closed forms and direct count",
    3: "least Jacobi eigenvalue rule",
    4: "first Laplace eigenvalue suite",
    5: "first-eigenfunction biconditional on a 20-case grid",
    6: "curvature identities",
    7: "Killing identity and degeneracy",
    8: "oracle equivalence",
    9: "index and nullity lower bounds",
    10: "stage-l spectral facts of Clifford intermediates",
}


def record(number: int, failures: list) -> None:
    status = "PASS" if not failures else f"FAIL ({len(failures)} problems, first: {failures[0]})"
    line = f"criterion {number:>2} {status}: {TITLES[number]}"
    RESULTS[number] = line
    print(line, flush=True)
    assert not failures, failures[:5]


# -- shared data ----------------------------------------------------------------

@lru_cache(maxsize=None)
def clifford(dims: tuple):
    return product_descriptor(Product(tuple(Leaf(sphere(m)) for m in dims)))


def suite_one():
    return [(a, b) for a in range(1, 6) for b in range(1, 6)]


def suite_two():
    out = []
    for k in range(2, 6):
        out.extend(product(range(1, 5), repeat=k))
    return out


def pair_sum(dims):
    return sum((a + 1) * (b + 1) for a, b in combinations(dims, 2))


# -- criteria ---------------------------------------------------------------------

def criterion_1():
    failures = []
    for a, b in suite_one():
        d = clifford((a, b))
        n = a + b
        got = (index(d), nullity(d))
        want = (n + 3, (a + 1) * (b + 1))
        if got != want:
            failures.append(f"S^{a} x S^{b}: got {got}, want {want}")
    return failures


def criterion_2():
    failures = []
    for dims in suite_two():
        k, n = len(dims), sum(dims)
        d = clifford(dims)
        got = (index(d), nullity(d))
        closed = ((k - 1) * (n + k + 1), (k - 1) * pair_sum(dims))
        direct = (clifford_direct_count(list(dims), "index"),
                  clifford_direct_count(list(dims), "nullity"))
        if not got == closed == direct:
            failures.append(f"{dims}: spectral {got}, closed {closed}, direct {direct}")
    return failures


def criterion_3():
    failures = []
    cases = [(a, b) for a, b in suite_one()] + suite_two()
    for dims in cases:
        d = clifford(tuple(dims))
        n = d.n
        f1, f2 = d.factors
        terms = [F(-2 * n)]
        for f in (f1, f2):
            if f.p > 0:
                terms.append(F(n, f.n) * jacobi_upto(f, -f.n).entries[0][0])
        got = mu1(d)
        if got != min(terms) or got > -2 * n:
            failures.append(f"{dims}: mu1 {got}, rule {min(terms)}")
    return failures


def criterion_4():
    failures = []
    for dims in [tuple(x) for x in suite_one()] + suite_two():
        d = clifford(dims)
        n = d.n
        first = [v for v in laplace_upto(d, n).values if v > 0]
        if first[:1] != [n] or d.lambda1 != n:
            failures.append(f"{dims}: lambda1 {first[:1]} / {d.lambda1}, want {n}")
    for k in (2, 3, 4):
        t = flat_torus(k, 2)
        positive = [v for v in t.laplace.values if v > 0]
        if positive[0] != F(2, k * k):
            failures.append(f"torus k={k}: lattice lambda1 {positive[0]}")
        for l in range(1, k):
            v = F(2 * l * l, k * k)
            mult = dict(t.laplace.entries).get(v, 0)
            if mult < 2:
                failures.append(f"torus k={k}: 2l^2/k^2 = {v} has multiplicity {mult}")
    for m in range(1, 6):
        d = product_descriptor(Product((Leaf(otfkm_focal(3)), Leaf(sphere(m)))))
        if not (d.lambda1 < d.n and d.flags.by_first_eigenfunctions is False):
            failures.append(f"otfkm(3) x S^{m}: lambda1 {d.lambda1}, n {d.n}")
    return failures


def grid_pairs():
    base = [
        sphere(1), sphere(3), sphere(2, 1), flat_torus(2), flat_torus(3), veronese(),
        isoparametric_hypersurface(4, 2), otfkm_focal(1), otfkm_focal(3),
        named_surface("lawson", 2, 3), named_surface("bipolar_tau31"),
    ]
    rng = random.Random(31)
    pairs = list(combinations(base, 2))
    rng.shuffle(pairs)
    return pairs[:20]


def criterion_5():
    failures = []
    pairs = grid_pairs()
    seen = set()
    for f1, f2 in pairs:
        d = binary_product(f1, f2)
        n = f1.n + f2.n
        lam = min(F(n, f1.n) * f1.lambda1, F(n, f2.n) * f2.lambda1)
        conj = bool(f1.flags.by_first_eigenfunctions and f2.flags.by_first_eigenfunctions)
        if d.lambda1 != lam or d.flags.by_first_eigenfunctions != (lam == n) or (lam == n) != conj:
            failures.append(f"{d.name}: lambda1 {d.lambda1}, flag {d.flags.by_first_eigenfunctions}, "
                            f"conjunction {conj}")
        seen.add(conj)
    if len(pairs) != 20 or seen != {True, False}:
        failures.append(f"grid has {len(pairs)} cases covering {seen}")
    return failures


def criterion_6():
    failures = []
    for dims in suite_two():
        d = clifford(dims)
        if d.S != (len(dims) - 1) * d.n:
            failures.append(f"{dims}: S {d.S}")
    for m in range(1, 7):
        n = m + 2
        S, _ = second_fundamental(Product((Leaf(sphere(m)), Leaf(veronese()))))
        if S != F(5 * n, 3):
            failures.append(f"S^{m} x Veronese: S {S}")
    # family (1): r Veronese surfaces with great spheres, built as real products
    for r in range(0, 3):
        for dims in [(), (1,), (2, 3), (1, 1, 2)]:
            k = len(dims)
            if r + k < 2:
                continue
            leaves = [Leaf(veronese()) for _ in range(r)] + [Leaf(sphere(m)) for m in dims]
            expr = Product(tuple(leaves))
            S, _ = second_fundamental(expr)
            fam = constant_S_families(r, dims)
            n = 2 * r + sum(dims)
            d = product_descriptor(expr)
            if not (S == fam.S == n * (F(5 * r, 3) + k - 1) and d.p == fam.p == 3 * r + k - 1):
                failures.append(f"family r={r} dims={dims}: S {S} / {fam.S}, p {d.p} / {fam.p}")
    # family (2): products of isoparametric hypersurfaces
    for items in [((4, 2), (3, 3)), ((2, 1), (5, 4)), ((3, 6), (2, 2), (1, 1))]:
        expr = Product(tuple(Leaf(isoparametric_hypersurface(m, g)) for m, g in items))
        S, _ = second_fundamental(expr)
        fam = constant_S_families(isoparametric=items)
        n, g = sum(m for m, _ in items), sum(g for _, g in items)
        d = product_descriptor(expr)
        if not (S == fam.S == (g - 1) * n and d.p == fam.p == 2 * len(items) - 1):
            failures.append(f"isoparametric {items}: S {S} / {fam.S}")
    # Gauss equation and the scalar-curvature ratio identity
    known = [sphere(1), sphere(2), sphere(3, 2), veronese(), isoparametric_hypersurface(4, 2),
             isoparametric_hypersurface(3, 6), clifford((1, 1)), clifford((1, 2))]
    for f1, f2 in product(known, repeat=2):
        d = binary_product(f1, f2)
        R = scalar_curvature(d)
        R1, R2 = f1.n * (f1.n - 1) - f1.S, f2.n * (f2.n - 1) - f2.S
        if R != d.n * (d.n - 1) - d.S or F(R, d.n) != F(R1, f1.n) + F(R2, f2.n):
            failures.append(f"{d.name}: R {R}")
        if scalar_ratio_defect(d) != 0:
            failures.append(f"{d.name}: ratio defect")
    return failures


def criterion_7():
    failures = []
    for k in range(2, 7):
        for dims in product(range(1, 6), repeat=k):
            n = sum(dims)
            lhs = (n + k) * (n + k - 1) // 2 - sum(m * (m + 1) // 2 for m in dims)
            if lhs != pair_sum(dims) or killing_dimension(dims) != lhs:
                failures.append(f"{dims}: killing {lhs} vs {pair_sum(dims)}")
            closed_null = (k - 1) * pair_sum(dims)
            if (closed_null > lhs) != (k >= 3):
                failures.append(f"{dims}: closed-form degeneracy")
    for dims in suite_two():
        if degenerate(clifford(dims)) is not (len(dims) >= 3):
            failures.append(f"{dims}: degenerate() = {degenerate(clifford(dims))}")
    return failures


def random_spectrum(rng):
    size = rng.randint(1, 30)
    values = set()
    while len(values) < size:
        values.add(F(rng.randint(-60, 60), rng.randint(1, 6)))
    pairs = [(v, rng.randint(1, 5)) for v in values]
    bound = max(values) + F(rng.randint(0, 12), rng.randint(1, 4))
    return pairs, make_spectrum(pairs, bound)


def criterion_8():
    failures = []
    rng = random.Random(8)
    for trial in range(100):
        p1, s1 = random_spectrum(rng)
        p2, s2 = random_spectrum(rng)
        got = minkowski_sum(s1, s2)
        want = brute_force_pairs(p1, p2, got.bound)
        if list(got.entries) != want:
            failures.append(f"trial {trial}: engine and brute force differ")
        if got.bound != min(s1.bound + s2.entries[0][0], s2.bound + s1.entries[0][0]):
            failures.append(f"trial {trial}: bound {got.bound}")
    for m in range(1, 7):
        for k in range(0, 9):
            want = comb(m + k, k) - (comb(m + k - 2, k - 2) if k >= 2 else 0)
            if harmonic_multiplicity(m, k) != want:
                failures.append(f"harmonic ({m},{k})")
    return failures


def criterion_9():
    failures = []
    cases = [clifford(tuple(x)) for x in suite_one()] + [clifford(x) for x in suite_two() if len(x) <= 3]
    torus = clifford((1, 1))
    cases += [
        binary_product(torus, torus),
        binary_product(torus, clifford((1, 2))),
        binary_product(clifford((1, 2)), clifford((2, 2))),
        binary_product(torus, sphere(2)),
        binary_product(sphere(3), clifford((1, 1, 1))),
        binary_product(sphere(2, 2), sphere(1)),
    ]
    evaluated = {"index >= n+p+1": 0, "index >= Ind1+Ind2": 0, "nullity >= Null1": 0}
    for d in cases:
        for c in lower_bounds(d):
            if c.skipped:
                continue
            for key in evaluated:
                if c.name.startswith(key):
                    evaluated[key] += 1
            if c.satisfied is not True or c.satisfied != (c.value >= c.threshold):
                failures.append(f"{d.name}: {c.name} with {c.value} < {c.threshold}")
    for key, count in evaluated.items():
        if count == 0:
            failures.append(f"bound '{key}' was never evaluated")
    return failures


def criterion_10():
    failures = []
    for l in (2, 3, 4):
        for dims in product(range(1, 5), repeat=l):
            d = clifford(dims)
            n = d.n
            coords = sum(m + 1 for m in dims)
            pairs = pair_sum(dims)
            jac = list(jacobi_upto(d, 0).entries)
            lap = list(laplace_upto(d, 2 * n).entries)
            want_jac = [(-2 * n, l - 1), (-n, (l - 1) * coords), (0, (l - 1) * pairs)]
            want_lap = [(0, 1), (n, coords), (2 * n, pairs)]
            if jac != want_jac:
                failures.append(f"{dims}: Jacobi {jac}")
            if lap != want_lap:
                failures.append(f"{dims}: Laplace {lap}")
    return failures


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    record(number, CRITERIA[number]())


if __name__ == "__main__":
    bad = 0
    for number, fn in CRITERIA.items():
        try:
            record(number, fn())
        except AssertionError:
            bad += 1
    sys.exit(1 if bad else 0)
