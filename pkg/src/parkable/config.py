"""Numeric tolerances and sampling defaults.

All thresholds live in one frozen dataclass so that a report can echo the
exact configuration it was produced with.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # incidence / containment tests, absolute
    geom: float = 1e-9
    # LP feasibility margin, absolute (rows are unit-normalized)
    lp: float = 1e-9
    # sections with inradius below section * diameter are degenerate
    section: float = 1e-6
    # global centre of symmetry of a body, relative to diameter
    symmetry: float = 1e-6
    # section centres, collinearity and coplanarity scans, relative
    scan: float = 5e-2
    # parking slack for discretized smooth bodies, relative to diameter
    park: float = 1e-5
    # quadric fit residual and facet gap
    ellipsoid: float = 5e-2
    # projection operator norms must stay below 1 + projection
    projection: float = 5e-3
    # planarity of silhouettes, relative to diameter
    blaschke: float = 5e-2
    # angular tolerance (radians) for the supporting-direction cone
    psi: float = 0.2
    # angular tolerance (radians) for the subspace involution audit
    involution: float = 2e-2

    def replace(self, **changes: float) -> "Tolerances":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)


DEFAULT = Tolerances()

DEFAULT_DIRECTIONS = 512
DEFAULT_OFFSETS = (0.0, 0.2, -0.2, 0.4, -0.4, 0.6, -0.6, 0.8, -0.8)
