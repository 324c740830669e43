"""Minimal products ``(c_1 f_1, ..., c_k f_k)`` of minimal submanifolds.

Binary products are the primitive; k-ary products are left folds.  Spectra
are pulled from the factors on demand: to certify a product spectrum up to
``T`` the required factor bounds are solved backwards from the Minkowski
bound identity, and factors with a spectrum source are regenerated as deep
as needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Optional, Union

from .catalog import FactProvenance, Flags, ManifoldDescriptor
from .errors import BoundExceeded, InsufficientData, InvariantViolation
from .spectrum import (
    Spectrum,
    as_rational,
    format_rational,
    merge,
    minkowski_sum,
    scale,
    shift,
    truncate,
)

__all__ = [
    "Leaf",
    "Product",
    "ProductWeights",
    "leaves",
    "expression_name",
    "minimal_weights",
    "laplace_upto",
    "jacobi_upto",
    "lambda1_of",
    "product_laplace",
    "jacobi_blocks",
    "product_jacobi",
    "binary_product",
    "product_descriptor",
    "second_fundamental",
    "scalar_curvature",
    "scalar_ratio_defect",
]


@dataclass(frozen=True)
class Leaf:
    descriptor: ManifoldDescriptor


@dataclass(frozen=True)
class Product:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("a product needs at least two factors")
        object.__setattr__(self, "children", tuple(self.children))


Expression = Union[Leaf, Product]


def leaves(expr: Expression) -> list[ManifoldDescriptor]:
    if isinstance(expr, Leaf):
        return [expr.descriptor]
    out = []
    for child in expr.children:
        out.extend(leaves(child))
    return out


def expression_name(expr: Expression) -> str:
    if isinstance(expr, Leaf):
        return expr.descriptor.name
    return "product(" + ", ".join(expression_name(c) for c in expr.children) + ")"


@dataclass(frozen=True)
class ProductWeights:
    """Squared weights ``c_j^2 = n_j / n``; they sum to exactly 1."""

    squares: tuple

    def __post_init__(self):
        if sum(self.squares) != 1:
            raise InvariantViolation("squared weights must sum to 1")


def minimal_weights(dims) -> ProductWeights:
    dims = list(dims)
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise ValueError("need at least two positive dimensions")
    n = sum(dims)
    return ProductWeights(tuple(Fraction(d, n) for d in dims))


# -- spectra on demand ---------------------------------------------------------

def _fetch(d: ManifoldDescriptor, which: str, bound) -> Spectrum:
    stored = getattr(d, which)
    if stored is not None and stored.bound >= bound:
        return stored
    source = getattr(d, f"{which}_source")
    if source is not None:
        return source(bound)
    label = "Laplace" if which == "laplace" else "Jacobi"
    # argument-free leaves read better without their empty parentheses
    shown = d.name[:-2] if d.name.endswith("()") else d.name
    if stored is None:
        raise InsufficientData(f"{label} spectrum of {shown} unavailable")
    raise BoundExceeded(
        f"{label} spectrum of {shown} is certified only up to "
        f"{format_rational(stored.bound)}; at least {format_rational(bound)} is required"
    )


def laplace_upto(d: ManifoldDescriptor, bound) -> Spectrum:
    """Laplace spectrum of ``d`` certified at least up to ``bound``."""
    return _fetch(d, "laplace", max(as_rational(bound), Fraction(0)))


def jacobi_upto(d: ManifoldDescriptor, bound) -> Spectrum:
    return _fetch(d, "jacobi", as_rational(bound))


def lambda1_of(d: ManifoldDescriptor) -> Optional[Fraction]:
    """First eigenvalue from the stored fact, else from a stored spectrum."""
    if d.lambda1 is not None:
        return d.lambda1
    if d.laplace is not None:
        positive = [v for v, _ in d.laplace.entries if v > 0]
        if positive:
            return positive[0]
    return None


def _ratios(d1, d2):
    n = d1.n + d2.n
    return n, Fraction(n, d1.n), Fraction(n, d2.n)


def product_laplace(d1: ManifoldDescriptor, d2: ManifoldDescriptor, bound) -> Spectrum:
    """Laplace spectrum of the minimal product, certified to ``bound``."""
    bound = as_rational(bound)
    n, r1, r2 = _ratios(d1, d2)
    l1 = laplace_upto(d1, bound / r1)
    l2 = laplace_upto(d2, bound / r2)
    return truncate(minkowski_sum(scale(l1, r1), scale(l2, r2)), bound)


def jacobi_blocks(d1: ManifoldDescriptor, d2: ManifoldDescriptor, bound):
    """The three invariant blocks of the product Jacobi operator, up to ``bound``.

    Returns ``(V0, V1, V2)``: sections along the new unit normal, sections of
    the first factor's normal bundle, and of the second's.
    """
    bound = as_rational(bound)
    n, r1, r2 = _ratios(d1, d2)
    j1 = jacobi_upto(d1, bound / r1)
    j2 = jacobi_upto(d2, bound / r2)
    need1 = [(bound + 2 * n) / r1]
    need2 = [(bound + 2 * n) / r2]
    if not j1.is_empty_bundle:
        need2.append((bound - r1 * j1.min_value) / r2)
    if not j2.is_empty_bundle:
        need1.append((bound - r2 * j2.min_value) / r1)
    l1 = scale(laplace_upto(d1, max(need1)), r1)
    l2 = scale(laplace_upto(d2, max(need2)), r2)
    v0 = truncate(shift(minkowski_sum(l1, l2), -2 * n), bound)
    v1 = truncate(minkowski_sum(scale(j1, r1), l2), bound)
    v2 = truncate(minkowski_sum(scale(j2, r2), l1), bound)
    return v0, v1, v2


def product_jacobi(d1: ManifoldDescriptor, d2: ManifoldDescriptor, bound) -> Spectrum:
    v0, v1, v2 = jacobi_blocks(d1, d2, bound)
    return merge(merge(v0, v1), v2)


# -- descriptors -------------------------------------------------------------

def _and(a, b):
    if a is False or b is False:
        return False
    if a is True and b is True:
        return True
    return None


def _try(fn, *args):
    try:
        return fn(*args)
    except (InsufficientData, BoundExceeded):
        return None


def binary_product(d1: ManifoldDescriptor, d2: ManifoldDescriptor,
                   laplace_bound=None, jacobi_bound=None, name=None) -> ManifoldDescriptor:
    """Descriptor of the minimal product of two descriptors.

    Spectra are stored only for the bounds given; either way the result can
    regenerate them on demand.  Missing factor data leaves the affected
    spectrum unset rather than failing.
    """
    n, r1, r2 = _ratios(d1, d2)
    p = d1.p + d2.p + 1
    prov = {
        "n": FactProvenance("closed-form", "dimensions add"),
        "p": FactProvenance("closed-form", "codimensions add, plus one new normal"),
    }
    lam1, lam2 = lambda1_of(d1), lambda1_of(d2)
    lam = None
    if lam1 is not None and lam2 is not None:
        lam = min(r1 * lam1, r2 * lam2)
        prov["lambda1"] = FactProvenance(
            "closed-form", "first-eigenvalue rule lambda1 = n * min(lambda1_j / n_j)")
    by_first = _and(d1.flags.by_first_eigenfunctions, d2.flags.by_first_eigenfunctions)
    if lam is not None:
        by_first = lam == n
    flags = Flags(
        minimal=True,
        totally_geodesic=False,
        full=_and(d1.flags.full, d2.flags.full),
        orientable=_and(d1.flags.orientable, d2.flags.orientable),
        flat_normal_bundle=_and(d1.flags.flat_normal_bundle, d2.flags.flat_normal_bundle),
        parallel_mean_curvature=_and(d1.flags.parallel_mean_curvature,
                                     d2.flags.parallel_mean_curvature),
        by_first_eigenfunctions=by_first,
    )
    S = None
    S_constant = True
    if d1.S is not None and d2.S is not None:
        S = n * (1 + d1.S / d1.n + d2.S / d2.n)
        S_constant = d1.S_constant and d2.S_constant
        prov["S"] = FactProvenance("closed-form", "S = n(k - 1 + sum S_j / n_j)")
    laplace = jacobi = None
    if laplace_bound is not None:
        laplace = _try(product_laplace, d1, d2, laplace_bound)
        if laplace is not None:
            prov["laplace"] = FactProvenance(
                "spectral-composition", "Minkowski sum of rescaled factor spectra")
    if jacobi_bound is not None:
        jacobi = _try(product_jacobi, d1, d2, jacobi_bound)
        if jacobi is not None:
            prov["jacobi"] = FactProvenance(
                "spectral-composition", "union of the three invariant Jacobi blocks")
    return ManifoldDescriptor(
        name=name or f"product({d1.name}, {d2.name})",
        n=n,
        p=p,
        flags=flags,
        laplace=laplace,
        jacobi=jacobi,
        S=S,
        S_constant=S_constant,
        lambda1=lam,
        provenance=prov,
        factors=(d1, d2),
        laplace_source=partial(product_laplace, d1, d2),
        jacobi_source=partial(product_jacobi, d1, d2),
    )


def product_descriptor(expr: Expression, bound=None, jacobi_bound=None) -> ManifoldDescriptor:
    """Evaluate a product expression by left folds of binary products.

    ``bound`` is the Laplace depth to store (default ``2n``); ``jacobi_bound``
    the Jacobi depth (default 0, enough for index and nullity).
    """
    if isinstance(expr, Leaf):
        return expr.descriptor
    children = [product_descriptor(c) if isinstance(c, Product) else c.descriptor
                for c in expr.children]
    total_n = sum(c.n for c in children)
    bound = Fraction(2 * total_n) if bound is None else as_rational(bound)
    jacobi_bound = Fraction(0) if jacobi_bound is None else as_rational(jacobi_bound)
    d = children[0]
    for i, child in enumerate(children[1:], start=2):
        last = i == len(children)
        d = binary_product(
            d, child,
            laplace_bound=bound if last else None,
            jacobi_bound=jacobi_bound if last else None,
            name=expression_name(expr) if last else None,
        )
    return d


# -- curvature -------------------------------------------------------------------

def second_fundamental(expr: Expression):
    """``(S, constant)`` for the product, or ``None`` if any leaf S is unknown.

    ``constant`` is False when some leaf only supplies an average of S, in
    which case the value is the average of S over the product.
    """
    ls = leaves(expr)
    if any(d.S is None for d in ls):
        return None
    if len(ls) == 1:
        return ls[0].S, ls[0].S_constant
    n = sum(d.n for d in ls)
    S = n * (len(ls) - 1 + sum(d.S / d.n for d in ls))
    return S, all(d.S_constant for d in ls)


def scalar_ratio_defect(d: ManifoldDescriptor) -> Optional[Fraction]:
    """``R/n - R_1/n_1 - R_2/n_2`` for a binary product, which must vanish."""
    if d.factors is None:
        return None
    d1, d2 = d.factors
    if d.S is None or d1.S is None or d2.S is None:
        return None

    def ratio(x):
        return (x.n * (x.n - 1) - x.S) / x.n

    return ratio(d) - ratio(d1) - ratio(d2)


def scalar_curvature(d: ManifoldDescriptor) -> Optional[Fraction]:
    """Scalar curvature ``R = n(n-1) - S`` of a minimal submanifold."""
    if d.S is None:
        return None
    defect = scalar_ratio_defect(d)
    if defect is not None and defect != 0:
        raise InvariantViolation(f"{d.name}: scalar curvature ratio identity fails by {defect}")
    return d.n * (d.n - 1) - d.S
