"""Convex polytopes, hulls, LP feasibility and direction sampling."""

from .body import (
    AffineSubspace,
    ConvexBody,
    HPolytope,
    Section,
    convex_hull,
    enumerate_vertices,
    from_halfspaces,
    hausdorff,
    minkowski_erode,
    project,
    section,
    support,
    support_set,
)
from .lp import FeasibilityResult, Status, lp_feasible, solve_lp

__all__ = [
    "AffineSubspace",
    "ConvexBody",
    "FeasibilityResult",
    "HPolytope",
    "Section",
    "Status",
    "convex_hull",
    "enumerate_vertices",
    "from_halfspaces",
    "hausdorff",
    "lp_feasible",
    "minkowski_erode",
    "project",
    "section",
    "solve_lp",
    "support",
    "support_set",
]
