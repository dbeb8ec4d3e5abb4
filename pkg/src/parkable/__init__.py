"""Executable characterizations of centrally symmetric convex bodies and ellipsoids."""

from .config import DEFAULT, Tolerances
from .errors import (
    BodyFormatError,
    DegenerateDirectionError,
    DimensionError,
    GeometryError,
    InfeasibleError,
    PreconditionError,
)
from .geometry import AffineSubspace, ConvexBody, convex_hull

__version__ = "0.1.0"

__all__ = [
    "DEFAULT",
    "AffineSubspace",
    "BodyFormatError",
    "ConvexBody",
    "DegenerateDirectionError",
    "DimensionError",
    "GeometryError",
    "InfeasibleError",
    "PreconditionError",
    "Tolerances",
    "convex_hull",
]
