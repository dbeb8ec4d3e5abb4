"""Parking one convex body inside another, universal parkability and the
direction map of the parked translate."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, DEFAULT_DIRECTIONS, DEFAULT_OFFSETS, Tolerances
from .errors import DimensionError, InfeasibleError, PreconditionError
from .geometry.body import (
    AffineSubspace,
    ConvexBody,
    HPolytope,
    Section,
    as_vector,
    convex_hull,
    enumerate_vertices,
    minkowski_erode,
    orthonormal_complement,
    project,
    section,
    support,
)
from .geometry.lp import Status, lp_feasible
from .geometry.sampling import directions as sample_directions
from .symmetry import symmetry_center


@dataclass(frozen=True)
class ParkResult:
    """Verdict of :func:`park`.

    ``witness`` is a translation ``v`` with ``0 in C + v`` and ``C + v`` inside
    ``B``; ``margin`` is the LP margin (negative when infeasible: the uniform
    relaxation the joint system would need).
    """

    status: Status
    witness: np.ndarray | None
    margin: float
    feasible_set: HPolytope | None = None

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


def park_system(inner: ConvexBody, outer: ConvexBody) -> HPolytope:
    """``(-C) & (B - C)`` as one inequality system in ``v``.

    Erosion rows that cannot bind anywhere on ``-C`` (their slack there
    exceeds the half-diameter of ``C``, hence any attainable LP margin) are
    dropped.
    """
    h_plus = support(inner, outer.normals)
    h_minus = support(inner, -outer.normals)
    eroded = outer.offsets - h_plus
    keep = eroded - h_minus <= 0.5 * inner.diameter + 1e-9
    return HPolytope(
        np.vstack([outer.normals[keep], -inner.normals]),
        np.concatenate([eroded[keep], inner.offsets]),
    )


def park(
    inner: ConvexBody,
    outer: ConvexBody,
    tol: Tolerances = DEFAULT,
    slack: float | None = None,
    want_set: bool = False,
    check: bool = True,
) -> ParkResult:
    """Is there ``v`` with ``0 in C + v`` and ``C + v`` contained in ``B``?

    ``slack`` is the absolute LP margin accepted as feasible (default
    ``tol.lp``); scans over discretized smooth bodies pass a slack
    proportional to the diameter.  ``C`` itself need not lie in ``B``, only
    some translate of it; the verdict depends on ``C`` up to translation.
    """
    if inner.dim != outer.dim:
        raise DimensionError(f"C lives in R^{inner.dim}, B in R^{outer.dim}")
    eps = tol.geom * max(1.0, outer.diameter)
    if check:
        if not outer.contains(inner.vertices, eps).all():
            eroded = minkowski_erode(outer, inner)
            if not lp_feasible(eroded.normals, eroded.offsets, tol=eps).feasible:
                raise PreconditionError("C not contained in B: no translate of C fits")
        if not outer.contains(np.zeros(outer.dim), eps):
            raise PreconditionError("0 is not in B")
    system = park_system(inner, outer)
    res = lp_feasible(system.normals, system.offsets, tol=tol.lp if slack is None else slack, cap=max(outer.diameter, 1.0))
    fs = system if want_set else None
    return ParkResult(res.status, res.witness, res.margin, fs)


def symmetric_hull(body: ConvexBody, u) -> ConvexBody:
    """``conv((C + u) | -(C + u))``."""
    u = as_vector(u, body.dim)
    moved = body.vertices + u
    return convex_hull(np.vstack([moved, -moved]))


def minimum_radius(body: ConvexBody) -> float:
    """Radius beyond which no translate ``C + u`` with ``|u| = R`` contains 0."""
    return float(np.linalg.norm(body.vertices, axis=1).max() + body.diameter)


@dataclass
class UniversalResult:
    passed: bool
    radius: float
    n_checked: int
    witness: np.ndarray | None = None
    margins: list[float] = field(default_factory=list)

    @property
    def min_margin(self) -> float:
        return min(self.margins, default=np.inf)


def sphere_radius(body: ConvexBody, radius: float | None = None) -> float:
    """Validate ``radius`` against :func:`minimum_radius`, or pick a default."""
    bound = minimum_radius(body)
    if radius is None:
        # a body sitting at the origin only needs u != 0
        return 2.0 * bound if bound > 0 else 1.0
    if radius <= bound:
        raise PreconditionError(f"radius {radius:g} too small: need R > {bound:.6g}")
    return float(radius)


def universal_parkability(
    body: ConvexBody,
    radius: float | None = None,
    dirs: int | np.ndarray = 256,
    tol: Tolerances = DEFAULT,
    stop_at_first: bool = True,
) -> UniversalResult:
    """Park ``C + u`` in its symmetric hull for ``u`` on the radius-``R`` sphere."""
    r = sphere_radius(body, radius)
    units = sample_directions(body.dim, dirs) if np.isscalar(dirs) else np.asarray(dirs, dtype=float)
    out = UniversalResult(True, r, 0)
    for d in units:
        u = r * d / np.linalg.norm(d)
        moved = body.translate(u)
        hull = symmetric_hull(body, u)
        res = park(moved, hull, tol, slack=tol.geom * max(1.0, hull.diameter))
        out.n_checked += 1
        out.margins.append(res.margin)
        if not res.feasible and out.passed:
            out.passed = False
            out.witness = u
            if stop_at_first:
                break
    return out


@dataclass(frozen=True)
class PhiSample:
    u: np.ndarray
    direction: np.ndarray
    uniqueness_residual: float
    witness: np.ndarray


def _max_pairwise_angle(vectors: np.ndarray) -> float:
    if len(vectors) < 2:
        return 0.0
    cos = np.clip(vectors @ vectors.T, -1.0, 1.0)
    return float(np.arccos(cos.min()))


def phi_direction(body: ConvexBody, u, tol: Tolerances = DEFAULT) -> PhiSample:
    """Direction in which ``C + u`` is translated to park it in its symmetric hull."""
    u = as_vector(u, body.dim)
    moved = body.translate(u)
    hull = symmetric_hull(body, u)
    eps = tol.geom * max(1.0, hull.diameter)
    if moved.contains(np.zeros(body.dim), eps):
        raise PreconditionError("0 already lies in C + u; the direction is undefined")
    res = park(moved, hull, tol, slack=eps, want_set=True)
    if not res.feasible:
        raise InfeasibleError(f"C + u is not parkable in its symmetric hull (margin {res.margin:.3g})")
    fs = res.feasible_set
    verts = enumerate_vertices(fs.normals, fs.offsets, tol=max(eps, 1e-9))
    norms = np.linalg.norm(verts, axis=1) if len(verts) else np.zeros(0)
    verts = verts[norms > eps]
    spread = _max_pairwise_angle(verts / np.linalg.norm(verts, axis=1, keepdims=True)) if len(verts) else 0.0
    w = res.witness
    return PhiSample(u, w / np.linalg.norm(w), spread, w)


def phi_projection_symmetry_check(body: ConvexBody, u, tol: Tolerances = DEFAULT) -> float:
    """Symmetry residual of the projection of ``C + u`` along its parking direction."""
    sample = phi_direction(body, u, tol)
    plane = AffineSubspace(np.zeros(body.dim), orthonormal_complement(sample.direction[None, :], body.dim))
    shadow = project(body.translate(sample.u), plane)
    return symmetry_center(shadow, tol.symmetry).residual


def embed_section(sec: Section) -> ConvexBody:
    """Re-embed a hyperplane section (stored in chart coordinates) in ambient space."""
    plane, local = sec.subspace, sec.body
    basis = plane.directions
    normals = local.facet_normals @ basis
    offsets = local.facet_offsets + normals @ plane.base
    n = plane.normals[0]
    level = float(n @ plane.base)
    frame = AffineSubspace(plane.base, basis)
    return ConvexBody(
        plane.lift(local.vertices),
        np.vstack([normals, n, -n]),
        np.concatenate([offsets, [level, -level]]),
        local.facets,
        local.affine_dim,
        frame,
    )


@dataclass
class ScanResult:
    """Outcome of a section scan; ``failures`` holds ``(normal, offset, margin)``."""

    n_checked: int = 0
    n_skipped: int = 0
    failures: list[tuple[np.ndarray, float, float]] = field(default_factory=list)
    min_margin: float = np.inf

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def pass_rate(self) -> float:
        if self.n_checked == 0:
            return 1.0
        return 1.0 - len(self.failures) / self.n_checked


def section_level(body: ConvexBody, normal: np.ndarray, fraction: float) -> float:
    """Offset of the plane ``fraction`` of the half-width from the middle of the support band."""
    hi, lo = support(body, normal), -support(body, -normal)
    return 0.5 * (hi + lo) + fraction * 0.5 * (hi - lo)


def condition_iii_scan(
    body: ConvexBody,
    dirs: int | np.ndarray = DEFAULT_DIRECTIONS,
    offsets=DEFAULT_OFFSETS,
    tol: Tolerances = DEFAULT,
    max_failures: int | None = None,
) -> ScanResult:
    """Park every sampled hyperplane section of ``body`` back inside ``body``."""
    if body.is_flat:
        raise PreconditionError("body must be full-dimensional")
    eps = tol.geom * max(1.0, body.diameter)
    if not (body.offsets > eps).all():
        raise PreconditionError("0 must be interior to the body")
    normals = sample_directions(body.dim, dirs) if np.isscalar(dirs) else np.asarray(dirs, dtype=float)
    slack = tol.park * body.diameter
    out = ScanResult()
    for n in normals:
        n = n / np.linalg.norm(n)
        for frac in offsets:
            plane = AffineSubspace.hyperplane(n, section_level(body, n, frac))
            sec = section(body, plane, tol)
            if sec.empty or sec.degenerate or not sec.meets_interior:
                out.n_skipped += 1
                continue
            res = park(embed_section(sec), body, tol, slack=slack, check=False)
            out.n_checked += 1
            out.min_margin = min(out.min_margin, res.margin)
            if not res.feasible:
                out.failures.append((n, float(frac), res.margin))
                if max_failures is not None and len(out.failures) >= max_failures:
                    return out
    return out
