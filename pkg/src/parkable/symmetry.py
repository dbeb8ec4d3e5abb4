"""Centres of symmetry, section-centre lines, chord-midpoint planes and the
subspace involution built from them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, DEFAULT_DIRECTIONS, DEFAULT_OFFSETS, Tolerances
from .errors import DimensionError, GeometryError, PreconditionError
from .geometry.body import (
    AffineSubspace,
    ConvexBody,
    as_vector,
    convex_hull,
    hausdorff_directions,
    orthonormal_complement,
    project,
    section,
    support,
    support_set,
    unit,
)
from .geometry.hull import affine_frame
from .geometry.sampling import directions as sample_directions


@dataclass(frozen=True)
class SymmetryReport:
    """``center`` is set only when ``residual <= tolerance``; ``candidate`` always is."""

    center: np.ndarray | None
    residual: float
    candidate: np.ndarray

    @property
    def symmetric(self) -> bool:
        return self.center is not None


def symmetry_residual(body: ConvexBody, p, n_directions: int = DEFAULT_DIRECTIONS) -> float:
    """``hausdorff(K, 2p - K) / diameter(K)`` on the sampled direction set."""
    if body.diameter == 0.0:
        return float(np.linalg.norm(body.vertices[0] - p))
    dirs = hausdorff_directions(body.dim, body, n_directions=n_directions)
    gap = support(body, dirs) - support(body, -dirs) - 2.0 * dirs @ p
    return float(np.abs(gap).max() / body.diameter)


def symmetry_center(body: ConvexBody, tol: float = DEFAULT.symmetry, n_directions: int = DEFAULT_DIRECTIONS) -> SymmetryReport:
    """Find ``p`` with ``K = 2p - K``.

    The candidate solves ``h(u) - h(-u) = 2 p . u`` in the least-squares
    sense over all facet normals and a direction lattice, then the same
    equations are checked in the max norm.  Flat bodies are handled in the
    chart of their affine hull.
    """
    if body.is_flat and body.affine_dim > 0:
        origin, basis, _ = affine_frame(body.vertices)
        frame = AffineSubspace(origin, basis)
        local = convex_hull(frame.chart(body.vertices))
        rep = symmetry_center(local, tol, n_directions)
        cand = frame.lift(rep.candidate)
        return SymmetryReport(None if rep.center is None else cand, rep.residual, cand)
    if body.diameter == 0.0:
        p = body.vertices[0].copy()
        return SymmetryReport(p, 0.0, p)
    dirs = hausdorff_directions(body.dim, body, n_directions=n_directions)
    gap = support(body, dirs) - support(body, -dirs)
    p, *_ = np.linalg.lstsq(2.0 * dirs, gap, rcond=None)
    residual = float(np.abs(gap - 2.0 * dirs @ p).max() / body.diameter)
    return SymmetryReport(p if residual <= tol else None, residual, p)


def _require_symmetric(body: ConvexBody, tol: Tolerances) -> None:
    res = symmetry_residual(body, np.zeros(body.dim))
    if res > tol.symmetry:
        raise PreconditionError(
            f"body is not centrally symmetric about 0 (residual {res:.3g} > {tol.symmetry:g})"
        )


def _level(body: ConvexBody, normal: np.ndarray, fraction: float) -> float:
    hi, lo = support(body, normal), -support(body, -normal)
    return 0.5 * (hi + lo) + fraction * 0.5 * (hi - lo)


def fit_line(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares line through 0: unit direction and max point distance."""
    moment = points.T @ points
    _, vecs = np.linalg.eigh(moment)
    d = vecs[:, -1]
    d = d * np.sign(d[np.argmax(np.abs(d))])
    dist = np.linalg.norm(points - np.outer(points @ d, d), axis=1)
    return d, float(dist.max(initial=0.0))


def fit_plane(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares plane through 0: unit normal and max point distance."""
    moment = points.T @ points
    _, vecs = np.linalg.eigh(moment)
    n = vecs[:, 0]
    n = n * np.sign(n[np.argmax(np.abs(n))])
    return n, float(np.abs(points @ n).max(initial=0.0))


@dataclass
class CenterLineResult:
    """Outcome of a section-centre scan for one plane direction.

    ``failure`` is ``None`` on success, ``"centerless"`` when some section
    has no centre (``witness_offset`` names it) and ``"noncollinear"`` when
    all centres exist but ``residual`` exceeds the tolerance.
    """

    normal: np.ndarray
    direction: np.ndarray | None
    residual: float
    centers: np.ndarray
    offsets: list[float]
    failure: str | None = None
    witness_offset: float | None = None
    witness_residual: float | None = None
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return self.failure is None


def section_center_line(
    body: ConvexBody,
    normal,
    offsets=DEFAULT_OFFSETS,
    tol: Tolerances = DEFAULT,
    check_symmetry: bool = True,
) -> CenterLineResult:
    """Centres of the parallel sections ``(H + x) & B`` and the line through them."""
    if body.dim != 3:
        raise DimensionError("section-centre lines are defined for bodies in R^3")
    n = unit(normal)
    if check_symmetry:
        _require_symmetric(body, tol)
    centers, used, skipped = [], [], 0
    for frac in offsets:
        plane = AffineSubspace.hyperplane(n, _level(body, n, frac))
        sec = section(body, plane, tol)
        if sec.empty or sec.degenerate or not sec.meets_interior:
            skipped += 1
            continue
        rep = symmetry_center(sec.body, tol.scan)
        if rep.center is None:
            return CenterLineResult(
                n, None, np.inf, np.array(centers).reshape(-1, 3), used,
                failure="centerless", witness_offset=float(frac),
                witness_residual=rep.residual, skipped=skipped,
            )
        centers.append(plane.lift(rep.center))
        used.append(float(frac))
    if not centers:
        raise GeometryError("all sections are degenerate")
    pts = np.array(centers)
    if np.linalg.norm(pts, axis=1).max() <= tol.geom * max(1.0, body.diameter):
        raise GeometryError("section centres do not determine a line")
    d, dist = fit_line(pts)
    # orient the line to make an acute angle with the plane normal
    if d @ n < 0:
        d = -d
    residual = dist / body.diameter
    failure = None if residual <= tol.scan else "noncollinear"
    return CenterLineResult(n, d, residual, pts, used, failure=failure, skipped=skipped)


@dataclass
class MidpointPlaneResult:
    direction: np.ndarray
    normal: np.ndarray
    residual: float
    midpoints: np.ndarray

    def passed(self, tol: float) -> bool:
        return self.residual <= tol


def chord_midpoints(body: ConvexBody, direction, grid: int = 15, shrink: float = 0.02) -> np.ndarray:
    """Midpoints of the chords ``(L + y) & B`` for ``y`` on a grid in ``L^perp``."""
    d = unit(direction)
    perp = orthonormal_complement(d[None, :], body.dim)
    shadow = project(body, AffineSubspace(np.zeros(body.dim), perp))
    lo, hi = shadow.vertices.min(axis=0), shadow.vertices.max(axis=0)
    axes = [np.linspace(a, b, grid) for a, b in zip(lo, hi)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    margin = shrink * body.diameter
    inside = np.all(mesh @ shadow.normals.T <= shadow.offsets - margin, axis=1)
    ys = mesh[inside] @ perp  # base points in R^n, orthogonal to d

    rates = body.normals @ d
    slack = body.offsets[None, :] - ys @ body.normals.T
    pos, neg = rates > 1e-14, rates < -1e-14
    t_hi = np.min(np.where(pos, slack / np.where(pos, rates, 1.0), np.inf), axis=1)
    t_lo = np.max(np.where(neg, slack / np.where(neg, rates, 1.0), -np.inf), axis=1)
    ok = t_hi > t_lo
    return ys[ok] + 0.5 * (t_lo[ok] + t_hi[ok])[:, None] * d


def chord_midpoint_plane(
    body: ConvexBody,
    direction,
    grid: int = 15,
    tol: Tolerances = DEFAULT,
    check_symmetry: bool = True,
) -> MidpointPlaneResult:
    """Least-squares plane through 0 of the midpoints of chords parallel to ``direction``."""
    if body.dim != 3:
        raise DimensionError("chord-midpoint planes are defined for bodies in R^3")
    d = unit(direction)
    if check_symmetry:
        _require_symmetric(body, tol)
    mids = chord_midpoints(body, d, grid)
    if len(mids) < 3:
        raise GeometryError("fewer than three non-degenerate chords")
    n, dist = fit_plane(mids)
    if n @ d < 0:
        n = -n
    return MidpointPlaneResult(d, n, dist / body.diameter, mids)


@dataclass(frozen=True)
class PrimeResult:
    subspace: AffineSubspace
    residual: float
    failure: str | None = None


def subspace_prime(body: ConvexBody, subspace: AffineSubspace, tol: Tolerances = DEFAULT) -> PrimeResult:
    """The involution: plane -> line of section centres, line -> plane of midpoints."""
    if not subspace.is_linear:
        raise PreconditionError("subspace must be linear")
    n = body.dim
    if subspace.dim == n:
        return PrimeResult(AffineSubspace.span(np.zeros((0, n)), n), 0.0)
    if subspace.dim == 0:
        return PrimeResult(AffineSubspace(np.zeros(n), np.eye(n)), 0.0)
    if subspace.dim == n - 1:
        res = section_center_line(body, subspace.normals[0], tol=tol)
        if res.direction is None:
            raise GeometryError(f"section at offset {res.witness_offset} has no centre")
        return PrimeResult(AffineSubspace.line(res.direction), res.residual, res.failure)
    if subspace.dim == 1:
        res = chord_midpoint_plane(body, subspace.directions[0], tol=tol)
        return PrimeResult(AffineSubspace.hyperplane(res.normal), res.residual)
    raise DimensionError("subspace_prime supports R^3 subspaces")


def _angle(a: np.ndarray, b: np.ndarray) -> float:
    """Angle between two lines (directions up to sign)."""
    c = abs(float(a @ b)) / (np.linalg.norm(a) * np.linalg.norm(b))
    return float(np.arccos(min(1.0, c)))


@dataclass
class InvolutionAudit:
    pairs: list[tuple[AffineSubspace, AffineSubspace]] = field(default_factory=list)
    reversal_angles: list[float] = field(default_factory=list)
    involution_residuals: list[float] = field(default_factory=list)
    intersection_ranks: list[int] = field(default_factory=list)
    tol: float = DEFAULT.involution

    @property
    def reversal_violations(self) -> int:
        return sum(a > self.tol for a in self.reversal_angles)

    @property
    def involution_violations(self) -> int:
        return sum(a > self.tol for a in self.involution_residuals)

    @property
    def intersection_violations(self) -> int:
        return sum(r != 3 for r in self.intersection_ranks)

    @property
    def passed(self) -> bool:
        return not (self.reversal_violations or self.involution_violations or self.intersection_violations)


def random_flags(n_flags: int, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Seeded (line direction, plane normal) pairs with the line inside the plane."""
    rng = np.random.default_rng(seed)
    flags = []
    for _ in range(n_flags):
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        l = rng.normal(size=3)
        l -= (l @ n) * n
        l /= np.linalg.norm(l)
        flags.append((l, n))
    return flags


def involution_audit(body: ConvexBody, flags, tol: Tolerances = DEFAULT) -> InvolutionAudit:
    """Check inclusion reversal, ``H'' = H`` and ``H & H' = 0`` on sampled flags."""
    _require_symmetric(body, tol)
    audit = InvolutionAudit(tol=tol.involution)
    for l, n in flags:
        plane = AffineSubspace.hyperplane(n)
        line = AffineSubspace.line(l)
        h_prime = section_center_line(body, n, tol=tol, check_symmetry=False)
        if h_prime.direction is None:
            raise GeometryError(f"plane {n} has a centreless section")
        a = h_prime.direction
        l_prime = chord_midpoint_plane(body, l, tol=tol, check_symmetry=False).normal
        audit.pairs.append((plane, AffineSubspace.line(a)))
        audit.pairs.append((line, AffineSubspace.hyperplane(l_prime)))
        # H' (a line) must lie in L' (a plane)
        audit.reversal_angles.append(float(np.arcsin(min(1.0, abs(a @ l_prime)))))
        # H'' = H and L'' = L
        h_second = chord_midpoint_plane(body, a, tol=tol, check_symmetry=False).normal
        audit.involution_residuals.append(_angle(h_second, n))
        l_second = section_center_line(body, l_prime, tol=tol, check_symmetry=False)
        if l_second.direction is None:
            raise GeometryError(f"plane {l_prime} has a centreless section")
        audit.involution_residuals.append(_angle(l_second.direction, l))
        # H & H' = 0 and L & L' = 0
        audit.intersection_ranks.append(int(np.linalg.matrix_rank(np.vstack([plane.directions, a]))))
        audit.intersection_ranks.append(
            int(np.linalg.matrix_rank(np.vstack([l, AffineSubspace.hyperplane(l_prime).directions])))
        )
    return audit


@dataclass
class SupportsResult:
    passed: bool
    witness: np.ndarray | None
    failures: list[np.ndarray]


def supports_criterion_2d(body: ConvexBody, n_directions: int = 360, tol: Tolerances = DEFAULT) -> SupportsResult:
    """For each direction, is 0 in the hull of the two opposite contact faces?"""
    if body.dim != 2 or body.affine_dim != 2:
        raise DimensionError("the supporting-chord criterion is planar")
    eps = tol.geom * max(1.0, body.diameter)
    if not np.all(body.offsets > eps):
        raise PreconditionError("0 must be interior to the body")
    t = 2 * np.pi * np.arange(n_directions) / n_directions
    failures = []
    for v in np.column_stack([np.cos(t), np.sin(t)]):
        ids = np.union1d(support_set(body, v, eps), support_set(body, -v, eps))
        contact = convex_hull(body.vertices[ids])
        if not contact.contains(np.zeros(2), eps):
            failures.append(v)
    return SupportsResult(not failures, failures[0] if failures else None, failures)


@dataclass
class ProjectionCenterResult:
    consistent: bool
    body_center: np.ndarray | None
    body_residual: float
    centerless_normals: list[np.ndarray]
    mismatches: list[np.ndarray]


def projection_center_check(body: ConvexBody, n_planes: int = 64, tol: Tolerances = DEFAULT) -> ProjectionCenterResult:
    """Compare the centre of ``body`` with centres of its planar projections."""
    if body.dim != 3:
        raise DimensionError("projection_center_check needs a body in R^3")
    whole = symmetry_center(body, tol.symmetry)
    centerless, mismatches = [], []
    for n in sample_directions(3, n_planes):
        plane = AffineSubspace(np.zeros(3), orthonormal_complement(n[None, :], 3))
        shadow = project(body, plane)
        rep = symmetry_center(shadow, tol.symmetry)
        if rep.center is None:
            centerless.append(n)
        elif whole.center is not None:
            if np.linalg.norm(rep.center - plane.chart(whole.center)) > tol.symmetry * body.diameter * 10:
                mismatches.append(n)
    if whole.center is not None:
        consistent = not centerless and not mismatches
    else:
        consistent = bool(centerless)
    return ProjectionCenterResult(consistent, whole.center, whole.residual, centerless, mismatches)


def reflect_vertices_residual(body: ConvexBody, center) -> float:
    """Largest distance from a reflected vertex ``2c - v`` to the vertex set, over diameter."""
    c = as_vector(center, body.dim)
    refl = 2 * c - body.vertices
    d2 = ((refl[:, None, :] - body.vertices[None, :, :]) ** 2).sum(-1)
    return float(np.sqrt(d2.min(axis=1).max()) / max(body.diameter, 1e-300))


@dataclass
class SectionScanResult:
    """Outcome of the section-centre scan.

    ``failures`` lists ``(normal, offset, residual)`` for sections without a
    centre; ``line_residuals`` holds the collinearity residual of every
    direction whose sections all have centres.
    """

    symmetric: bool
    body_residual: float
    n_checked: int = 0
    n_skipped: int = 0
    failures: list[tuple[np.ndarray, float, float]] = field(default_factory=list)
    max_section_residual: float = 0.0
    line_residuals: list[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.symmetric and not self.failures

    @property
    def max_line_residual(self) -> float:
        return max(self.line_residuals, default=0.0)


def condition_ii_scan(
    body: ConvexBody,
    dirs: int | np.ndarray = DEFAULT_DIRECTIONS,
    offsets=DEFAULT_OFFSETS,
    tol: Tolerances = DEFAULT,
    max_failures: int | None = None,
) -> SectionScanResult:
    """Central symmetry of ``body`` plus a centre for every sampled plane section.

    A body that is not symmetric about 0 fails without scanning.
    """
    if body.dim != 3 or body.is_flat:
        raise DimensionError("the section scan needs a full-dimensional body in R^3")
    residual = symmetry_residual(body, np.zeros(3))
    out = SectionScanResult(residual <= tol.symmetry, residual)
    if not out.symmetric:
        return out
    normals = sample_directions(3, dirs) if np.isscalar(dirs) else np.asarray(dirs, dtype=float)
    for n in normals:
        n = n / np.linalg.norm(n)
        centers = []
        for frac in offsets:
            plane = AffineSubspace.hyperplane(n, _level(body, n, frac))
            sec = section(body, plane, tol)
            if sec.empty or sec.degenerate or not sec.meets_interior:
                out.n_skipped += 1
                continue
            rep = symmetry_center(sec.body, tol.scan)
            out.n_checked += 1
            out.max_section_residual = max(out.max_section_residual, rep.residual)
            if rep.center is None:
                out.failures.append((n, float(frac), rep.residual))
                if max_failures is not None and len(out.failures) >= max_failures:
                    return out
            else:
                centers.append(plane.lift(rep.center))
        if len(centers) == len(offsets) and centers:
            _, dist = fit_line(np.array(centers))
            out.line_residuals.append(dist / body.diameter)
    return out
