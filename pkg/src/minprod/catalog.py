"""Spectral descriptors of minimal submanifolds of spheres.

Built-in families (great spheres, the flat tori in S^5, the Veronese
surface, isoparametric hypersurfaces, OT-FKM focal submanifolds, Lawson
surfaces) plus a JSON descriptor format for user-supplied data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import partial
from math import comb
from typing import Callable, Optional

import jsonschema

from .errors import InvalidG, InvariantViolation, SchemaError
from .spectrum import (
    EMPTY,
    INF,
    Spectrum,
    as_rational,
    count_below,
    make_spectrum,
    multiplicity_at,
)

__all__ = [
    "Flags",
    "FactProvenance",
    "ManifoldDescriptor",
    "harmonic_dimension",
    "sphere",
    "flat_torus",
    "veronese",
    "isoparametric_hypersurface",
    "otfkm_focal",
    "named_surface",
    "validate",
    "load_descriptor",
    "load_descriptor_file",
    "dump_descriptor",
    "descriptor_to_dict",
    "spectrum_to_dict",
    "spectrum_from_dict",
    "DESCRIPTOR_SCHEMA",
]

SOURCES = ("closed-form", "spectral-composition", "catalog built-in", "user file")
VALID_G = (1, 2, 3, 4, 6)


@dataclass(frozen=True)
class Flags:
    """Geometric predicates; ``None`` means unknown."""

    minimal: bool = True
    totally_geodesic: Optional[bool] = None
    full: Optional[bool] = None
    orientable: Optional[bool] = None
    flat_normal_bundle: Optional[bool] = None
    parallel_mean_curvature: Optional[bool] = None
    by_first_eigenfunctions: Optional[bool] = None


FLAG_NAMES = tuple(Flags.__dataclass_fields__)


@dataclass(frozen=True)
class FactProvenance:
    source: str
    detail: str

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown provenance source {self.source!r}")

    def __str__(self):
        return f"{self.source}: {self.detail}"


@dataclass(frozen=True)
class ManifoldDescriptor:
    """A minimal submanifold ``M^n -> S^{n+p}`` described by its spectral data.

    ``laplace`` / ``jacobi`` are ``None`` when only facts (lambda1, S, flags)
    are known.  ``laplace_source`` / ``jacobi_source``, when present,
    regenerate the corresponding spectrum to any requested bound.
    """

    name: str
    n: int
    p: int
    flags: Flags = Flags()
    laplace: Optional[Spectrum] = None
    jacobi: Optional[Spectrum] = None
    S: Optional[Fraction] = None
    S_constant: bool = True
    known_index: Optional[int] = None
    known_nullity: Optional[int] = None
    lambda1: Optional[Fraction] = None
    provenance: dict = field(default_factory=dict, compare=False)
    factors: Optional[tuple] = field(default=None, compare=False, repr=False)
    laplace_source: Optional[Callable] = field(default=None, compare=False, repr=False)
    jacobi_source: Optional[Callable] = field(default=None, compare=False, repr=False)

    @property
    def great_sphere_dims(self) -> Optional[tuple]:
        """Factor dimensions if this is a great sphere or a Clifford product of
        great spheres, else ``None``."""
        if self.factors is None:
            if self.flags.totally_geodesic and self.p == 0:
                return (self.n,)
            return None
        dims = ()
        for f in self.factors:
            sub = f.great_sphere_dims
            if sub is None:
                return None
            dims += sub
        return dims

    @property
    def facts_only(self) -> bool:
        return self.laplace is None and self.jacobi is None


def _stamp(source, detail, *names):
    prov = FactProvenance(source, detail)
    return {name: prov for name in names}


# -- great spheres -----------------------------------------------------------

def harmonic_dimension(m: int, k: int) -> int:
    """Multiplicity of ``k(k+m-1)`` in the Laplace spectrum of the unit ``S^m``."""
    if k < 0:
        return 0
    return comb(m + k, k) - (comb(m + k - 2, k - 2) if k >= 2 else 0)


def _sphere_laplace(m: int, bound) -> Spectrum:
    bound = as_rational(bound)
    entries = []
    k = 0
    while k * (k + m - 1) <= bound:
        entries.append((k * (k + m - 1), harmonic_dimension(m, k)))
        k += 1
    return make_spectrum(entries, bound)


def _sphere_jacobi(m: int, p: int, bound) -> Spectrum:
    # normal bundle is trivial of rank p and the shape operators vanish, so
    # the Jacobi operator is p copies of Delta + m
    if p == 0:
        return EMPTY
    bound = as_rational(bound)
    entries = []
    k = 0
    while k * (k + m - 1) - m <= bound:
        entries.append((k * (k + m - 1) - m, p * harmonic_dimension(m, k)))
        k += 1
    return make_spectrum(entries, bound)


def sphere(m: int, p: int = 0, bound=None, jacobi_bound=None) -> ManifoldDescriptor:
    """Totally geodesic ``S^m`` in ``S^{m+p}``."""
    if m < 1 or p < 0:
        raise ValueError("sphere needs m >= 1 and p >= 0")
    bound = Fraction(2 * m) if bound is None else as_rational(bound)
    jacobi_bound = bound if jacobi_bound is None else as_rational(jacobi_bound)
    name = f"sphere({m})" if p == 0 else f"sphere({m}, codim={p})"
    flags = Flags(
        totally_geodesic=True,
        full=(p == 0),
        orientable=True,
        flat_normal_bundle=True,
        parallel_mean_curvature=True,
        by_first_eigenfunctions=True,
    )
    prov = {}
    prov.update(_stamp("catalog built-in", "great sphere", "n", "p", "S"))
    prov.update(_stamp("catalog built-in", "spherical harmonics k(k+m-1)", "laplace", "lambda1"))
    prov.update(_stamp("catalog built-in", "p copies of Delta + m", "jacobi"))
    prov.update(_stamp("closed-form", "great sphere index p and nullity (m+1)p",
                       "known_index", "known_nullity"))
    return ManifoldDescriptor(
        name=name,
        n=m,
        p=p,
        flags=flags,
        laplace=_sphere_laplace(m, bound),
        jacobi=_sphere_jacobi(m, p, jacobi_bound),
        S=Fraction(0),
        known_index=p,
        known_nullity=(m + 1) * p,
        lambda1=Fraction(m),
        provenance=prov,
        laplace_source=partial(_sphere_laplace, m),
        jacobi_source=partial(_sphere_jacobi, m, p),
    )


# -- flat minimal tori in S^5 --------------------------------------------------

def _torus_laplace(k: int, bound) -> Spectrum:
    # induced metric (2k^2/(4k^2-1))(du^2 + dv^2) on R^2 / <(2pi,0), (pi, pi*s)>,
    # s^2 = 4k^2 - 1; dual lattice points (a, (2b-a)/s) give
    # lambda = (a^2 s^2 + (2b-a)^2) / (2k^2)
    bound = as_rational(bound)
    s2 = 4 * k * k - 1
    budget = 2 * k * k * bound
    entries = []
    if budget >= 0:
        a_max = math.isqrt(math.floor(budget / s2))
        for a in range(-a_max, a_max + 1):
            rest = budget - a * a * s2
            if rest < 0:
                continue
            t_max = math.isqrt(math.floor(rest))
            for t in range(-t_max, t_max + 1):
                if (t - a) % 2:
                    continue
                entries.append((Fraction(a * a * s2 + t * t, 2 * k * k), 1))
    return make_spectrum(entries, bound)


def flat_torus(k: int, bound=None) -> ManifoldDescriptor:
    """Embedded flat minimal torus in ``S^5`` with lattice parameter ``k``."""
    if k < 2:
        raise ValueError("flat_torus needs k >= 2")
    bound = Fraction(4) if bound is None else as_rational(bound)
    prov = {}
    prov.update(_stamp("catalog built-in", "flat torus in S^5", "n", "p"))
    prov.update(_stamp("catalog built-in", "dual-lattice enumeration", "laplace"))
    prov.update(_stamp("closed-form", "least nonzero dual-lattice norm 2/k^2", "lambda1"))
    return ManifoldDescriptor(
        name=f"torus(k={k})",
        n=2,
        p=3,
        flags=Flags(totally_geodesic=False, full=True, orientable=True,
                    by_first_eigenfunctions=False),
        laplace=_torus_laplace(k, bound),
        lambda1=Fraction(2, k * k),
        provenance=prov,
        laplace_source=partial(_torus_laplace, k),
    )


# -- Veronese surface ------------------------------------------------------------

def _veronese_laplace(bound) -> Spectrum:
    # even spherical harmonics on the sphere of curvature 1/3
    bound = as_rational(bound)
    entries = []
    k = 0
    while Fraction(k * (k + 1), 3) <= bound:
        entries.append((Fraction(k * (k + 1), 3), 2 * k + 1))
        k += 2
    return make_spectrum(entries, bound)


def veronese(bound=None) -> ManifoldDescriptor:
    """Veronese surface ``RP^2 -> S^4``."""
    bound = Fraction(4) if bound is None else as_rational(bound)
    prov = {}
    prov.update(_stamp("catalog built-in", "Veronese surface", "n", "p", "S", "lambda1"))
    prov.update(_stamp("catalog built-in", "even harmonics, curvature 1/3", "laplace"))
    return ManifoldDescriptor(
        name="veronese()",
        n=2,
        p=2,
        flags=Flags(totally_geodesic=False, full=True, orientable=False,
                    parallel_mean_curvature=True, by_first_eigenfunctions=True),
        laplace=_veronese_laplace(bound),
        S=Fraction(4, 3),
        lambda1=Fraction(2),
        provenance=prov,
        laplace_source=_veronese_laplace,
    )


# -- facts-only families ---------------------------------------------------------

def isoparametric_hypersurface(n: int, g: int) -> ManifoldDescriptor:
    """Minimal isoparametric hypersurface with ``g`` principal curvatures."""
    if g not in VALID_G:
        raise InvalidG(f"g must be one of {VALID_G}, got {g}")
    if n < 1:
        raise ValueError("n must be positive")
    prov = {}
    prov.update(_stamp("catalog built-in", "isoparametric hypersurface", "n", "p", "lambda1"))
    prov.update(_stamp("closed-form", "S = (g-1)n", "S"))
    return ManifoldDescriptor(
        name=f"isoparametric({n}, g={g})",
        n=n,
        p=1,
        flags=Flags(totally_geodesic=(g == 1), full=(g != 1), orientable=True,
                    flat_normal_bundle=True, parallel_mean_curvature=True,
                    by_first_eigenfunctions=True),
        S=Fraction((g - 1) * n),
        lambda1=Fraction(n),
        provenance=prov,
    )


def otfkm_focal(k: int) -> ManifoldDescriptor:
    """Focal submanifold ``M_2`` of OT-FKM type with multiplicities ``(1, k)``."""
    if k < 1:
        raise ValueError("otfkm_focal needs k >= 1")
    lam = Fraction(min(4, 2 + k))
    prov = {}
    prov.update(_stamp("catalog built-in", "OT-FKM focal submanifold, dim k+2, codim k+1", "n", "p"))
    prov.update(_stamp("closed-form", "lambda1 = min(4, 2+k)", "lambda1"))
    return ManifoldDescriptor(
        name=f"otfkm(k={k})",
        n=k + 2,
        p=k + 1,
        flags=Flags(totally_geodesic=False, by_first_eigenfunctions=(lam == k + 2)),
        lambda1=lam,
        provenance=prov,
    )


def named_surface(which: str, m: int = 1, k: int = 1) -> ManifoldDescriptor:
    """``"lawson"`` (the surface xi_{m,k} in S^3) or ``"bipolar_tau31"``
    (the bipolar Lawson Klein bottle in S^4)."""
    if which == "lawson":
        if m < 1 or k < 1:
            raise ValueError("lawson needs m, k >= 1")
        name, p, orientable = f"lawson({m}, {k})", 1, True
        normal = True
    elif which == "bipolar_tau31":
        name, p, orientable = "bipolar_tau31()", 2, False
        normal = None
    else:
        raise ValueError(f"unknown surface {which!r}")
    prov = {}
    prov.update(_stamp("catalog built-in", name, "n", "p"))
    prov.update(_stamp("catalog built-in", "immersed by first eigenfunctions", "lambda1"))
    return ManifoldDescriptor(
        name=name,
        n=2,
        p=p,
        flags=Flags(totally_geodesic=False, full=True, orientable=orientable,
                    flat_normal_bundle=normal, by_first_eigenfunctions=True),
        lambda1=Fraction(2),
        provenance=prov,
    )


# -- validation ------------------------------------------------------------------

def validate(d: ManifoldDescriptor) -> ManifoldDescriptor:
    """Check the structural invariants of a descriptor; returns it unchanged."""

    def fail(msg):
        raise InvariantViolation(f"{d.name}: {msg}")

    if d.n < 1 or d.p < 0:
        fail("need n >= 1 and p >= 0")
    if not d.flags.minimal:
        fail("only minimal submanifolds are supported")
    if d.lambda1 is not None:
        if d.lambda1 <= 0:
            fail("lambda1 must be positive")
        if d.lambda1 > d.n:
            fail(f"lambda1 = {d.lambda1} exceeds n = {d.n}; coordinate functions "
                 "of a minimal immersion have eigenvalue n")
    fe = d.flags.by_first_eigenfunctions
    if fe is True and d.lambda1 is not None and d.lambda1 != d.n:
        fail("immersed by first eigenfunctions requires lambda1 = n")
    if fe is False and d.lambda1 is not None and d.lambda1 == d.n:
        fail("lambda1 = n contradicts by_first_eigenfunctions = false")

    lap = d.laplace
    if lap is not None:
        if lap.is_empty_bundle:
            fail("a Laplace spectrum cannot be empty")
        if lap.entries and lap.entries[0][0] < 0:
            fail("Laplace eigenvalues are non-negative")
        if lap.bound >= 0 and multiplicity_at(lap, 0) != 1:
            fail("eigenvalue 0 must be simple on a closed connected manifold")
        if lap.bound >= d.n:
            need = d.n + d.p + 1 if d.flags.full else d.n + 1
            if multiplicity_at(lap, d.n) < need:
                fail(f"eigenvalue n = {d.n} needs multiplicity >= {need} "
                     "(coordinate functions)")
        positive = [v for v, _ in lap.entries if v > 0]
        if d.lambda1 is not None:
            if lap.bound >= d.lambda1 and (not positive or positive[0] != d.lambda1):
                fail("lambda1 disagrees with the Laplace spectrum")
        if fe is not None and lap.bound >= d.n and positive:
            if (positive[0] == d.n) != fe:
                fail("by_first_eigenfunctions disagrees with the Laplace spectrum")

    jac = d.jacobi
    if jac is not None:
        if d.p == 0 and not jac.is_empty_bundle:
            fail("codimension 0 has a rank-0 normal bundle: Jacobi spectrum must be empty")
        if d.p > 0 and jac.is_empty_bundle:
            fail("positive codimension needs a nonempty Jacobi spectrum")
        if d.p > 0 and jac.bound >= -d.n and multiplicity_at(jac, -d.n) < 1:
            fail("normal parts of constant vectors give Jacobi eigenvalue -n")
        if jac.bound >= 0 and not jac.is_empty_bundle:
            if d.known_index is not None and count_below(jac, 0) != d.known_index:
                fail("known index disagrees with the Jacobi spectrum")
            if d.known_nullity is not None and multiplicity_at(jac, 0) != d.known_nullity:
                fail("known nullity disagrees with the Jacobi spectrum")
    if d.flags.totally_geodesic:
        if d.S is not None and d.S != 0:
            fail("totally geodesic needs S = 0")
    elif d.flags.totally_geodesic is False and d.S is not None and d.S == 0 and d.S_constant:
        fail("S = 0 forces totally geodesic")
    if d.S is not None and d.S < 0:
        fail("S is a squared norm")
    for key in ("n", "p", "laplace", "jacobi", "S", "known_index", "known_nullity", "lambda1"):
        if getattr(d, key) is not None and key not in d.provenance:
            fail(f"field {key} has no provenance")
    return d


# -- descriptor files ------------------------------------------------------------

_RATIONAL = {
    "type": "array",
    "items": [{"type": "integer"}, {"type": "integer", "minimum": 1}],
    "minItems": 2,
    "maxItems": 2,
}
_SPECTRUM = {
    "type": "object",
    "required": ["bound", "entries"],
    "additionalProperties": False,
    "properties": {
        "bound": {"oneOf": [_RATIONAL, {"const": "inf"}]},
        "entries": {
            "type": "array",
            "items": {
                "type": "array",
                "items": [{"type": "integer"}, {"type": "integer", "minimum": 1},
                          {"type": "integer", "minimum": 1}],
                "minItems": 3,
                "maxItems": 3,
            },
        },
    },
}
_TRISTATE = {"type": ["boolean", "null"]}

DESCRIPTOR_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["name", "n", "p"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "n": {"type": "integer", "minimum": 1},
        "p": {"type": "integer", "minimum": 0},
        "flags": {
            "type": "object",
            "additionalProperties": False,
            "properties": {name: _TRISTATE for name in FLAG_NAMES},
        },
        "laplace": _SPECTRUM,
        "jacobi": _SPECTRUM,
        "S": {
            "type": "object",
            "required": ["value"],
            "additionalProperties": False,
            "properties": {"value": _RATIONAL, "constant": {"type": "boolean"}},
        },
        "lambda1": _RATIONAL,
        "index": {"type": "integer", "minimum": 0},
        "nullity": {"type": "integer", "minimum": 0},
    },
}


def _rat_out(x):
    x = Fraction(x)
    return [x.numerator, x.denominator]


def spectrum_to_dict(s: Spectrum):
    return {
        "bound": "inf" if s.bound == INF else _rat_out(s.bound),
        "entries": [[v.numerator, v.denominator, m] for v, m in s.entries],
    }


def spectrum_from_dict(doc) -> Spectrum:
    bound = INF if doc["bound"] == "inf" else Fraction(*doc["bound"])
    return make_spectrum(((Fraction(a, b), m) for a, b, m in doc["entries"]), bound)


def descriptor_to_dict(d: ManifoldDescriptor) -> dict:
    out = {"name": d.name, "n": d.n, "p": d.p,
           "flags": {name: getattr(d.flags, name) for name in FLAG_NAMES}}
    if d.laplace is not None:
        out["laplace"] = spectrum_to_dict(d.laplace)
    if d.jacobi is not None:
        out["jacobi"] = spectrum_to_dict(d.jacobi)
    if d.S is not None:
        out["S"] = {"value": _rat_out(d.S), "constant": d.S_constant}
    if d.lambda1 is not None:
        out["lambda1"] = _rat_out(d.lambda1)
    if d.known_index is not None:
        out["index"] = d.known_index
    if d.known_nullity is not None:
        out["nullity"] = d.known_nullity
    return out


def dump_descriptor(d: ManifoldDescriptor) -> str:
    return json.dumps(descriptor_to_dict(d), indent=2) + "\n"


def _from_dict(doc, origin) -> ManifoldDescriptor:
    try:
        jsonschema.validate(doc, DESCRIPTOR_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{origin}: {where}: {exc.message}") from None
    flags = Flags(**{k: v for k, v in doc.get("flags", {}).items()})
    if flags.minimal is None:
        flags = replace(flags, minimal=True)
    kwargs = {}
    if "laplace" in doc:
        kwargs["laplace"] = spectrum_from_dict(doc["laplace"])
    if "jacobi" in doc:
        kwargs["jacobi"] = spectrum_from_dict(doc["jacobi"])
    if "S" in doc:
        kwargs["S"] = Fraction(*doc["S"]["value"])
        kwargs["S_constant"] = doc["S"].get("constant", True)
    if "lambda1" in doc:
        kwargs["lambda1"] = Fraction(*doc["lambda1"])
    if "index" in doc:
        kwargs["known_index"] = doc["index"]
    if "nullity" in doc:
        kwargs["known_nullity"] = doc["nullity"]
    present = ["n", "p"] + [
        name for name in ("laplace", "jacobi", "S", "lambda1", "known_index", "known_nullity")
        if name in kwargs
    ]
    d = ManifoldDescriptor(
        name=doc["name"], n=doc["n"], p=doc["p"], flags=flags,
        provenance=_stamp("user file", origin, *present), **kwargs,
    )
    return validate(d)


def load_descriptor(document, origin: str = "<document>"):
    """Parse descriptor JSON text (or an already-decoded dict).

    A document may hold one descriptor object or ``{"descriptors": [...]}``;
    the latter returns a list.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{origin}: not valid JSON: {exc}") from None
    if isinstance(document, dict) and set(document) == {"descriptors"}:
        items = document["descriptors"]
        if not isinstance(items, list):
            raise SchemaError(f"{origin}: 'descriptors' must be a list")
        return [_from_dict(item, origin) for item in items]
    return _from_dict(document, origin)


def load_descriptor_file(path):
    with open(path, encoding="utf-8") as fh:
        return load_descriptor(fh.read(), origin=str(path))
