"""Index, nullity, first-eigenvalue and curvature analyses of descriptors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .catalog import FactProvenance, ManifoldDescriptor, VALID_G
from .composer import (
    Expression,
    Product,
    jacobi_blocks,
    jacobi_upto,
    lambda1_of,
    laplace_upto,
    leaves,
    product_descriptor,
    scalar_curvature,
    second_fundamental,
)
from .errors import BoundExceeded, InsufficientData, InvalidG, InvariantViolation, NotConstant
from .spectrum import count_below, multiplicity_at

__all__ = [
    "Breakdown",
    "BoundCheck",
    "GapIndex",
    "AverageS",
    "FamilyValue",
    "AnalysisReport",
    "index",
    "nullity",
    "mu1",
    "counting_breakdown",
    "mu1_rule",
    "lambda1_rule",
    "killing_dimension",
    "clifford_closed_form",
    "lower_bounds",
    "degenerate",
    "gap_index_formula",
    "average_S_identity",
    "constant_S_classify",
    "constant_S_families",
    "analyze",
    "analyze_expression",
]

SPECTRAL = "spectral-composition"


def index(d: ManifoldDescriptor) -> int:
    """Morse index: number of negative Jacobi eigenvalues with multiplicity."""
    jac = jacobi_upto(d, 0)
    return 0 if jac.is_empty_bundle else count_below(jac, 0)


def nullity(d: ManifoldDescriptor) -> int:
    jac = jacobi_upto(d, 0)
    return 0 if jac.is_empty_bundle else multiplicity_at(jac, 0)


def mu1(d: ManifoldDescriptor) -> Optional[Fraction]:
    """Least Jacobi eigenvalue; ``None`` for a rank-0 normal bundle."""
    jac = jacobi_upto(d, -d.n)
    if jac.is_empty_bundle:
        return None
    if not jac.entries:
        raise InvariantViolation(f"{d.name}: no Jacobi eigenvalue <= -n")
    return jac.entries[0][0]


@dataclass(frozen=True)
class Breakdown:
    """Per-block counts for a binary product (all multiplicity weighted).

    ``I0``/``N0``: pairs of Laplace eigenvalues other than the (0, 0) pair
    whose rescaled sum is below / equal to 2.  ``I1``/``N1``: Jacobi
    eigenvalues of the first factor paired with nonzero Laplace eigenvalues
    of the second; ``Ihat1``/``Nhat1`` the mirror image.
    """

    ind1: int
    ind2: int
    null1: int
    null2: int
    I0: int
    I1: int
    Ihat1: int
    N0: int
    N1: int
    Nhat1: int

    @property
    def index(self) -> int:
        return self.ind1 + self.ind2 + 1 + self.I0 + self.I1 + self.Ihat1

    @property
    def nullity(self) -> int:
        return self.null1 + self.null2 + self.N0 + self.N1 + self.Nhat1


def counting_breakdown(d1: ManifoldDescriptor, d2: ManifoldDescriptor) -> Breakdown:
    v0, v1, v2 = jacobi_blocks(d1, d2, 0)
    ind1, ind2 = index(d1), index(d2)
    null1, null2 = nullity(d1), nullity(d2)
    # the (0, 0) Laplace pair sits at -2n, so it is negative and never null;
    # pairs with a zero Laplace eigenvalue in V1/V2 reproduce the factor's
    # own Jacobi spectrum
    return Breakdown(
        ind1=ind1,
        ind2=ind2,
        null1=null1,
        null2=null2,
        I0=count_below(v0, 0) - 1,
        I1=(count_below(v1, 0) if not v1.is_empty_bundle else 0) - ind1,
        Ihat1=(count_below(v2, 0) if not v2.is_empty_bundle else 0) - ind2,
        N0=multiplicity_at(v0, 0),
        N1=(multiplicity_at(v1, 0) if not v1.is_empty_bundle else 0) - null1,
        Nhat1=(multiplicity_at(v2, 0) if not v2.is_empty_bundle else 0) - null2,
    )


def mu1_rule(d1: ManifoldDescriptor, d2: ManifoldDescriptor) -> Fraction:
    """Least Jacobi eigenvalue of the product from factor data alone."""
    n = d1.n + d2.n
    terms = [Fraction(-2 * n)]
    for d in (d1, d2):
        m = mu1(d)
        if m is not None:
            terms.append(Fraction(n, d.n) * m)
    value = min(terms)
    assert value <= -2 * n
    return value


def lambda1_rule(d1: ManifoldDescriptor, d2: ManifoldDescriptor):
    """``(lambda1, immersed_by_first_eigenfunctions)`` of the product."""
    l1, l2 = lambda1_of(d1), lambda1_of(d2)
    missing = [d.name for d, lam in ((d1, l1), (d2, l2)) if lam is None]
    if missing:
        raise InsufficientData(f"first eigenvalue of {', '.join(missing)} unavailable")
    n = d1.n + d2.n
    lam = min(Fraction(n, d1.n) * l1, Fraction(n, d2.n) * l2)
    return lam, lam == n


def killing_dimension(dims) -> int:
    """dim SO(n+k) minus the isotropy of the Clifford product of ``S^{n_j}``."""
    n, k = sum(dims), len(dims)
    return (n + k) * (n + k - 1) // 2 - sum(m * (m + 1) // 2 for m in dims)


def clifford_closed_form(dims):
    """``(index, nullity, killing_dim)`` of the Clifford product of great spheres."""
    dims = list(dims)
    k = len(dims)
    if k < 2:
        raise ValueError("need at least two factors")
    n = sum(dims)
    pair_sum = sum((dims[i] + 1) * (dims[j] + 1) for i in range(k) for j in range(i + 1, k))
    return (k - 1) * (n + k + 1), (k - 1) * pair_sum, killing_dimension(dims)


@dataclass(frozen=True)
class BoundCheck:
    name: str
    value: Optional[int] = None
    threshold: Optional[int] = None
    satisfied: Optional[bool] = None
    skipped: Optional[str] = None


def _maybe(fn, d):
    try:
        return fn(d)
    except (InsufficientData, BoundExceeded):
        return None


def _index_or_known(d):
    v = _maybe(index, d)
    return d.known_index if v is None else v


def _nullity_or_known(d):
    v = _maybe(nullity, d)
    return d.known_nullity if v is None else v


def _check(name, value, threshold, skip=None):
    if skip is None and value is None:
        skip = "value unavailable"
    if skip is not None:
        return BoundCheck(name, value, threshold, None, skip)
    return BoundCheck(name, value, threshold, value >= threshold)


def lower_bounds(d: ManifoldDescriptor, factors=None) -> list:
    """Evaluate every applicable lower bound on index and nullity."""
    checks = []
    floor = d.n + d.p + 1
    tg = d.flags.totally_geodesic
    skip = None
    if tg is True:
        skip = "totally geodesic"
    elif tg is None:
        skip = "totally geodesic flag unknown"
    checks.append(_check("index >= n+p+1 (not totally geodesic)", _index_or_known(d), floor, skip))
    mult = None
    if skip is None:
        try:
            mult = multiplicity_at(jacobi_upto(d, -d.n), -d.n)
        except (InsufficientData, BoundExceeded):
            mult = None
    checks.append(_check("Jacobi multiplicity at -n >= n+p+1", mult, floor, skip))

    factors = factors if factors is not None else d.factors
    names = ("index >= Ind1+Ind2+n+p+2 (full, non-geodesic factors)",
             "nullity >= Null1+Null2+3(n1+p1+1)(n2+p2+1) (full, non-geodesic factors)")
    sphere_names = ("index >= Ind1+n+p1+3 (full factor times great sphere)",
                    "nullity >= (n1+1)(n2+1) (full factor times great sphere)")
    if factors is None:
        for name in names + sphere_names:
            checks.append(BoundCheck(name, skipped="not a binary product"))
        return checks
    f1, f2 = factors
    ind, nul = _index_or_known(d), _nullity_or_known(d)
    skip = None
    if not (f1.flags.full is True and f2.flags.full is True):
        skip = "a factor is not known to be full"
    elif not (f1.flags.totally_geodesic is False and f2.flags.totally_geodesic is False):
        skip = "a factor is totally geodesic"
    i1, i2 = _index_or_known(f1), _index_or_known(f2)
    z1, z2 = _nullity_or_known(f1), _nullity_or_known(f2)
    t_ind = None if i1 is None or i2 is None else i1 + i2 + d.n + d.p + 2
    t_nul = None
    if z1 is not None and z2 is not None:
        t_nul = z1 + z2 + 3 * (f1.n + f1.p + 1) * (f2.n + f2.p + 1)
    if skip is None and (t_ind is None or t_nul is None):
        skip = "factor index or nullity unavailable"
    checks.append(_check(names[0], ind, t_ind, skip))
    checks.append(_check(names[1], nul, t_nul, skip))

    def great_sphere(f):
        return f.flags.totally_geodesic is True and f.p == 0

    other = None
    if great_sphere(f2) and f1.flags.full is True:
        other, sph = f1, f2
    elif great_sphere(f1) and f2.flags.full is True:
        other, sph = f2, f1
    if other is None:
        for name in sphere_names:
            checks.append(BoundCheck(name, skipped="no great-sphere factor with a full partner"))
        return checks
    io = _index_or_known(other)
    t = None if io is None else io + d.n + other.p + 3
    checks.append(_check(sphere_names[0], ind, t, None if t is not None else "factor index unavailable"))
    checks.append(_check(sphere_names[1], nul, (other.n + 1) * (sph.n + 1)))
    return checks


def degenerate(d: ManifoldDescriptor) -> Optional[bool]:
    """Whether Jacobi fields exceed Killing fields; only decided for Clifford
    products of great spheres, ``None`` otherwise."""
    dims = d.great_sphere_dims
    if dims is None or len(dims) < 2:
        return None
    try:
        return nullity(d) > killing_dimension(dims)
    except (InsufficientData, BoundExceeded):
        return None


@dataclass(frozen=True)
class GapIndex:
    hypotheses_hold: bool
    verified_up_to: Optional[Fraction]
    predicted_index: Optional[int]
    reason: str = ""


def _gap_data(d: ManifoldDescriptor):
    """``(alpha, dim E_{lambda_1})`` if ``d`` meets the spectral-gap hypotheses."""
    if lambda1_of(d) != d.n:
        return None, f"{d.name} is not immersed by first eigenfunctions"
    lap = laplace_upto(d, 2 * d.n)
    if any(d.n < v < 2 * d.n for v, _ in lap.entries):
        return None, f"{d.name} has Laplace eigenvalues strictly between n and 2n"
    jac = jacobi_upto(d, -d.n)
    if jac.is_empty_bundle:
        alpha = 0
    else:
        if multiplicity_at(jac, -d.n) == 0:
            return None, f"{d.name}: -n is not the next Jacobi eigenvalue"
        if jac.entries[0][0] < -2 * d.n:
            return None, f"{d.name}: least Jacobi eigenvalue is below -2n"
        alpha = count_below(jac, -d.n)
    return (alpha, multiplicity_at(lap, d.n)), ""


def gap_index_formula(d1: ManifoldDescriptor, d2: ManifoldDescriptor) -> GapIndex:
    """Index of the product predicted from first-eigenspace data alone.

    Applies when both factors are immersed by first eigenfunctions, have no
    Laplace eigenvalues in ``(n_j, 2 n_j)``, have ``-n_j`` as the Jacobi
    eigenvalue right after the ``alpha_j`` eigenvalues below it, and have
    least Jacobi eigenvalue at least ``-2 n_j``.  The hypotheses are checked
    on spectra certified up to ``2 n_j``.
    """
    g1, why1 = _gap_data(d1)
    if g1 is None:
        return GapIndex(False, None, None, why1)
    g2, why2 = _gap_data(d2)
    if g2 is None:
        return GapIndex(False, None, None, why2)
    (a1, e1), (a2, e2) = g1, g2
    predicted = index(d1) + index(d2) + 1 + (1 + a2) * e1 + (1 + a1) * e2
    return GapIndex(True, Fraction(2 * max(d1.n, d2.n)), predicted)


@dataclass(frozen=True)
class AverageS:
    value: Fraction
    floor: Fraction
    satisfied: bool
    equality: bool
    all_leaves_geodesic: bool


def average_S_identity(expr: Expression) -> Optional[AverageS]:
    """Average of S over the product and the floor ``(k-1) n``.

    Equality must hold exactly when every leaf has vanishing S.
    """
    got = second_fundamental(expr)
    if got is None:
        return None
    value, _ = got
    ls = leaves(expr)
    floor = Fraction((len(ls) - 1) * sum(d.n for d in ls))
    zero = all(d.S == 0 for d in ls)
    result = AverageS(value, floor, value >= floor, value == floor, zero)
    if result.equality != zero:
        raise InvariantViolation("equality in the S floor must match geodesic leaves")
    return result


def constant_S_classify(expr: Expression):
    """Label a binary product with constant S: ``clifford`` (S = n),
    ``veronese-gap`` (S = 5n/3) or ``other`` (S > 5n/3)."""
    if not isinstance(expr, Product) or len(expr.children) != 2:
        raise ValueError("classification applies to a binary product")
    for d in leaves(expr):
        if d.S is None:
            raise InsufficientData(f"S of {d.name} unknown")
        if not d.S_constant:
            raise NotConstant(f"S of {d.name} is only known on average")
    S, _ = second_fundamental(expr)
    n = sum(d.n for d in leaves(expr))
    if S == n:
        return "clifford", S
    if S == Fraction(5 * n, 3):
        return "veronese-gap", S
    if S > Fraction(5 * n, 3):
        return "other", S
    raise InvariantViolation(f"constant S = {S} in (n, 5n/3) cannot occur")


@dataclass(frozen=True)
class FamilyValue:
    S: Fraction
    n: int
    p: int


def constant_S_families(veronese_count: int = 0, sphere_dims=(), isoparametric=None) -> FamilyValue:
    """Constant S of the standard families of minimal products.

    Either ``r = veronese_count`` Veronese surfaces together with great
    spheres of the given dimensions, or a list of ``(n_j, g_j)``
    isoparametric hypersurfaces.
    """
    if isoparametric is not None:
        items = list(isoparametric)
        for _, g in items:
            if g not in VALID_G:
                raise InvalidG(f"g must be one of {VALID_G}, got {g}")
        n = sum(m for m, _ in items)
        g_total = sum(g for _, g in items)
        return FamilyValue(Fraction((g_total - 1) * n), n, 2 * len(items) - 1)
    r, k = veronese_count, len(sphere_dims)
    if r < 0 or r + k < 1:
        raise ValueError("need at least one factor")
    n = sum(sphere_dims) + 2 * r
    return FamilyValue(n * (Fraction(5 * r, 3) + k - 1), n, 3 * r + k - 1)


@dataclass
class AnalysisReport:
    name: str
    n: int
    p: int
    index: Optional[int] = None
    nullity: Optional[int] = None
    mu1: Optional[Fraction] = None
    lambda1: Optional[Fraction] = None
    by_first_eigenfunctions: Optional[bool] = None
    breakdown: Optional[Breakdown] = None
    bounds: list = field(default_factory=list)
    S: Optional[Fraction] = None
    S_constant: bool = True
    R: Optional[Fraction] = None
    killing_dim: Optional[int] = None
    degenerate: Optional[bool] = None
    closed_form: Optional[tuple] = None
    provenance: dict = field(default_factory=dict)
    unavailable: dict = field(default_factory=dict)


def analyze(d: ManifoldDescriptor) -> AnalysisReport:
    """Everything the engine can say about ``d``; missing inputs are recorded
    in ``unavailable`` rather than raised."""
    rep = AnalysisReport(name=d.name, n=d.n, p=d.p)
    prov = rep.provenance

    def attempt(key, fn):
        try:
            return fn()
        except (InsufficientData, BoundExceeded) as exc:
            rep.unavailable[key] = str(exc)
            return None

    rep.index = attempt("index", lambda: index(d))
    if rep.index is not None:
        prov["index"] = FactProvenance(SPECTRAL, "negative eigenvalues of the composed Jacobi spectrum")
    elif d.known_index is not None:
        rep.index = d.known_index
        prov["index"] = d.provenance.get("known_index")
        rep.unavailable.pop("index", None)
    rep.nullity = attempt("nullity", lambda: nullity(d))
    if rep.nullity is not None:
        prov["nullity"] = FactProvenance(SPECTRAL, "zero eigenspace of the composed Jacobi spectrum")
    elif d.known_nullity is not None:
        rep.nullity = d.known_nullity
        prov["nullity"] = d.provenance.get("known_nullity")
        rep.unavailable.pop("nullity", None)
    rep.mu1 = attempt("mu1", lambda: mu1(d))
    if rep.mu1 is not None:
        prov["mu1"] = FactProvenance(SPECTRAL, "least eigenvalue of the composed Jacobi spectrum")
    rep.lambda1 = lambda1_of(d)
    if rep.lambda1 is not None:
        prov["lambda1"] = d.provenance.get("lambda1") or FactProvenance(
            SPECTRAL, "least positive eigenvalue of the Laplace spectrum")
    rep.by_first_eigenfunctions = d.flags.by_first_eigenfunctions
    if d.factors is not None:
        rep.breakdown = attempt("breakdown", lambda: counting_breakdown(*d.factors))
        if rep.breakdown is not None:
            prov["breakdown"] = FactProvenance(
                SPECTRAL, "block counts with the zero Laplace eigenvalue contributions removed")
            if rep.index is not None and rep.breakdown.index != rep.index:
                raise InvariantViolation("block assembly disagrees with the spectral index")
            if rep.nullity is not None and rep.breakdown.nullity != rep.nullity:
                raise InvariantViolation("block assembly disagrees with the spectral nullity")
    rep.bounds = lower_bounds(d)
    if rep.bounds:
        prov["bounds"] = FactProvenance(
            "closed-form", "index and nullity floors for minimal submanifolds and products")
    rep.S, rep.S_constant = d.S, d.S_constant
    if d.S is not None:
        prov["S"] = d.provenance.get("S") or FactProvenance("closed-form", "S = n(k - 1 + sum S_j / n_j)")
        rep.R = scalar_curvature(d)
        prov["R"] = FactProvenance("closed-form", "Gauss equation R = n(n-1) - S")
    dims = d.great_sphere_dims
    if dims is not None and len(dims) >= 2:
        rep.closed_form = clifford_closed_form(dims)
        rep.killing_dim = rep.closed_form[2]
        prov["killing_dim"] = FactProvenance(
            "closed-form", "dim SO(n+k) - sum dim SO(n_j+1) for Clifford products")
        rep.degenerate = degenerate(d)
        if rep.degenerate is not None:
            prov["degenerate"] = FactProvenance("closed-form", "nullity compared with Killing dimension")
        prov["closed_form"] = FactProvenance(
            "closed-form", "Clifford index (k-1)(n+k+1) and nullity (k-1) sum (n_i+1)(n_j+1)")
    return rep


def analyze_expression(expr: Expression, bound=None) -> AnalysisReport:
    return analyze(product_descriptor(expr, bound))
