"""Exact eigenvalue bookkeeping for Clifford-type products of minimal immersions into spheres."""

from .errors import (
    BoundExceeded,
    InsufficientData,
    InvalidG,
    InvariantViolation,
    MinprodError,
    NotConstant,
    ParseError,
    SchemaError,
)
from .spectrum import INF, Spectrum, make_spectrum

__all__ = [
    "BoundExceeded",
    "InsufficientData",
    "InvalidG",
    "InvariantViolation",
    "MinprodError",
    "NotConstant",
    "ParseError",
    "SchemaError",
    "INF",
    "Spectrum",
    "make_spectrum",
]
