"""Shadow boundaries, plane sections lying in them, and the cone of common
supporting directions along a central section."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .config import DEFAULT, Tolerances
from .errors import DimensionError, GeometryError, PreconditionError
from .geometry.body import (
    AffineSubspace,
    ConvexBody,
    convex_hull,
    orthonormal_complement,
    section,
    support,
    unit,
)
from .geometry.lp import solve_lp
from .geometry.sampling import directions as sample_directions


@dataclass(frozen=True, eq=False)
class Silhouette:
    """Faces of ``body`` that project onto the boundary of its shadow along ``direction``.

    ``shadow`` is the projection in the chart given by the rows of ``basis``.
    """

    direction: np.ndarray
    basis: np.ndarray
    shadow: ConvexBody
    vertex_ids: np.ndarray
    edge_ids: np.ndarray  # pairs of vertex indices
    facet_ids: np.ndarray

    def segments(self, body: ConvexBody) -> tuple[np.ndarray, np.ndarray]:
        """Endpoints of silhouette edges and of the edges bounding silhouette facets."""
        pairs = [tuple(e) for e in self.edge_ids]
        for f in self.facet_ids:
            cyc = body.facets[f]
            pairs += [(a, b) for a, b in zip(cyc, cyc[1:] + cyc[:1])]
        pairs = np.array(sorted({(min(a, b), max(a, b)) for a, b in pairs}), dtype=int).reshape(-1, 2)
        return body.vertices[pairs[:, 0]], body.vertices[pairs[:, 1]]


def _require_solid3(body: ConvexBody) -> None:
    if body.dim != 3:
        raise DimensionError("illumination tests are defined for bodies in R^3")
    if body.is_flat:
        raise PreconditionError("body must be full-dimensional")


def shadow_boundary_distance(shadow: ConvexBody, pts: np.ndarray) -> np.ndarray:
    """Distance from chart points inside the shadow to its boundary (0 on the boundary)."""
    return np.maximum(0.0, np.min(shadow.offsets - pts @ shadow.normals.T, axis=-1))


def silhouette(body: ConvexBody, direction, tol: Tolerances = DEFAULT) -> Silhouette:
    _require_solid3(body)
    d = unit(direction)
    basis = orthonormal_complement(d[None, :], 3)
    chart = body.vertices @ basis.T
    shadow = convex_hull(chart)
    eps = tol.geom * max(1.0, body.diameter)
    # slack of every vertex against every shadow edge line
    slack = shadow.offsets[None, :] - chart @ shadow.normals.T
    on_line = slack <= eps
    vids = np.flatnonzero(on_line.any(axis=1))
    edges = body.edges
    both = on_line[edges[:, 0]] & on_line[edges[:, 1]]
    eids = edges[both.any(axis=1)]
    fids = np.flatnonzero(np.abs(body.facet_normals @ d) <= tol.geom)
    return Silhouette(d, basis, shadow, vids, eids, fids)


def _point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from each row of ``p`` to the nearest of the segments ``a[k]b[k]``."""
    ab = b - a
    len2 = np.maximum((ab * ab).sum(axis=1), 1e-300)
    t = np.clip(((p[:, None, :] - a[None]) * ab[None]).sum(-1) / len2, 0.0, 1.0)
    closest = a[None] + t[..., None] * ab[None]
    return np.linalg.norm(p[:, None, :] - closest, axis=-1).min(axis=1)


def _point_facet_distance(p: np.ndarray, body: ConvexBody, fids: np.ndarray) -> np.ndarray:
    """Distance to the union of the listed facets, for points whose foot lands inside one."""
    best = np.full(len(p), np.inf)
    for f in fids:
        n, off = body.normals[f], body.offsets[f]
        cyc = list(body.facets[f])
        verts = body.vertices[cyc]
        h = p @ n - off
        foot = p - h[:, None] * n
        inside = np.ones(len(p), dtype=bool)
        for a, b in zip(verts, np.roll(verts, -1, axis=0)):
            inside &= np.cross(b - a, foot - a) @ n >= -1e-12
        best = np.where(inside, np.minimum(best, np.abs(h)), best)
    return best


def boundary_samples(local: ConvexBody, plane: AffineSubspace, per_edge: int = 4) -> np.ndarray:
    """Points along the boundary of a planar section, lifted to R^3."""
    v = local.vertices
    nxt = np.roll(v, -1, axis=0)
    ts = np.arange(per_edge) / per_edge
    pts = (v[:, None, :] + ts[None, :, None] * (nxt - v)[:, None, :]).reshape(-1, v.shape[1])
    return plane.lift(pts)


def planarity_residual(body: ConvexBody, sil: Silhouette, plane: AffineSubspace, tol: Tolerances = DEFAULT) -> float:
    """Max distance from the boundary of ``plane & body`` to the silhouette, over the diameter.

    Returns ``inf`` when the plane misses the interior.
    """
    sec = section(body, plane, tol)
    if sec.empty or not sec.meets_interior or sec.body.affine_dim < 2:
        return np.inf
    pts = boundary_samples(sec.body, plane)
    a, b = sil.segments(body)
    dist = _point_segment_distance(pts, a, b) if len(a) else np.full(len(pts), np.inf)
    if len(sil.facet_ids):
        dist = np.minimum(dist, _point_facet_distance(pts, body, sil.facet_ids))
    return float(dist.max() / body.diameter)


def _plane_from(params: np.ndarray) -> tuple[np.ndarray, float]:
    theta, phi, c = params
    n = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    return n, float(c)


def _params_from(normal: np.ndarray, offset: float) -> np.ndarray:
    n = unit(normal)
    return np.array([np.arccos(np.clip(n[2], -1, 1)), np.arctan2(n[1], n[0]), offset])


def _plane_through(points: np.ndarray) -> tuple[np.ndarray, float] | None:
    c = points.mean(axis=0)
    _, s, vt = np.linalg.svd(points - c)
    if len(points) == 3 and s[1] <= 1e-9 * max(s[0], 1e-300):
        return None
    n = vt[-1]
    return n, float(n @ c)


@dataclass
class BlaschkeResult:
    verdict: bool
    residual: float
    normal: np.ndarray
    offset: float
    evaluations: int
    silhouette: Silhouette = field(repr=False)


def weak_blaschke_test(
    body: ConvexBody,
    direction,
    n_seeds: int = 64,
    steps: int = 200,
    seed: int = 0,
    tol: Tolerances = DEFAULT,
) -> BlaschkeResult:
    """Search for a plane whose section boundary lies in the silhouette along ``direction``.

    Seeds: the least-squares plane through the silhouette vertices, the
    central plane orthogonal to the direction, then planes through seeded
    triples of silhouette vertices; each is refined by a Nelder-Mead run of
    at most ``steps`` evaluations.  The search stops as soon as a plane
    within ``tol.blaschke`` is found.
    """
    sil = silhouette(body, direction, tol)
    if len(sil.vertex_ids) == 0:  # pragma: no cover - a body always casts a shadow
        raise GeometryError("empty silhouette")
    sv = body.vertices[sil.vertex_ids]
    seeds: list[tuple[np.ndarray, float]] = []
    first = _plane_through(sv)
    if first is not None:
        seeds.append(first)
    seeds.append((sil.direction, float(sil.direction @ body.vertex_centroid())))
    rng = np.random.default_rng(seed)
    attempts = 0
    while len(seeds) < n_seeds and len(sv) >= 3 and attempts < 20 * n_seeds:
        attempts += 1
        plane = _plane_through(sv[rng.choice(len(sv), 3, replace=False)])
        if plane is not None:
            seeds.append(plane)

    evals = 0

    def objective(params):
        nonlocal evals
        evals += 1
        n, c = _plane_from(params)
        return planarity_residual(body, sil, AffineSubspace.hyperplane(n, c), tol)

    best = (np.inf, seeds[0][0], seeds[0][1])
    for n0, c0 in seeds:
        x0 = _params_from(n0, c0 / np.linalg.norm(n0))
        val = objective(x0)
        if val < best[0]:
            best = (val, *_plane_from(x0))
        if best[0] <= tol.blaschke:
            break
        if not np.isfinite(val):
            continue
        res = minimize(
            objective, x0, method="Nelder-Mead",
            options={"maxfev": steps, "xatol": 1e-6, "fatol": 1e-9, "initial_simplex": _simplex(x0, body.diameter)},
        )
        if res.fun < best[0]:
            best = (float(res.fun), *_plane_from(res.x))
        if best[0] <= tol.blaschke:
            break
    return BlaschkeResult(bool(best[0] <= tol.blaschke), float(best[0]), best[1], best[2], evals, sil)


def _simplex(x0: np.ndarray, scale: float) -> np.ndarray:
    steps = np.array([0.1, 0.1, 0.05 * scale])
    return np.vstack([x0] + [x0 + np.eye(3)[k] * steps[k] for k in range(3)])


@dataclass
class ConeSet:
    """Directions ``w`` (with ``w . v > 0``) of lines supporting the body along ``boundary & v^perp``.

    ``deviation`` is the smallest achievable tangency defect (see
    :func:`tangency_defect`); the set is empty when it exceeds
    ``sin(tol.psi)``.  ``generators`` are unit vectors spanning the accepted
    directions (hull vertices of the accepted grid points in the gnomonic
    chart centred at ``v``, plus the refined optimum).
    """

    v: np.ndarray
    generators: np.ndarray
    deviation: float
    best: np.ndarray

    @property
    def empty(self) -> bool:
        return len(self.generators) == 0


def _active_normals(body: ConvexBody, pts: np.ndarray, eps: float) -> np.ndarray:
    """Active facet normals per point, padded with NaN rows to a common count."""
    slack = body.offsets[None, :] - pts @ body.normals.T
    active = slack <= eps
    width = max(int(active.sum(axis=1).max(initial=0)), 1)
    out = np.full((len(pts), width, body.dim), np.nan)
    for i, row in enumerate(active):
        ns = body.normals[row]
        out[i, : len(ns)] = ns
    return out


def tangency_defect(active: np.ndarray, w: np.ndarray) -> np.ndarray:
    """How far lines along ``w`` are from supporting the body at each sampled point.

    At a boundary point with active facet normals ``n_i`` the line
    ``p + t w`` supports the body iff some normal in their cone is
    orthogonal to ``w``, i.e. iff ``min n_i . w <= 0 <= max n_i . w``.  The
    defect is 0 then and ``min |n_i . w|`` otherwise; the maximum over
    points is returned for each row of ``w``.  ``active`` is the padded
    array from :func:`_active_normals`.
    """
    w = np.atleast_2d(w)
    dots = np.einsum("pkd,wd->wpk", np.nan_to_num(active), w)
    pad = np.isnan(active[..., 0])[None]
    lo = np.where(pad, np.inf, dots).min(axis=2)
    hi = np.where(pad, -np.inf, dots).max(axis=2)
    defect = np.where(lo > 0, lo, np.where(hi < 0, -hi, 0.0))
    defect[:, np.isinf(lo[0])] = 0.0  # points with no active facet (cannot happen on the boundary)
    return defect.max(axis=1)


def psi_cone(body: ConvexBody, v, tol: Tolerances = DEFAULT, grid: int = 4096) -> ConeSet:
    """Directions of lines supporting ``body`` at every point of ``boundary & v^perp``.

    The boundary of the central section is sampled at its vertices and edge
    midpoints.  The defect is minimized over an antipodally symmetric
    direction grid restricted to ``w . v > 0`` and the minimizer is refined
    by Nelder-Mead in the gnomonic chart.
    """
    _require_solid3(body)
    v = unit(v)
    eps = tol.geom * max(1.0, body.diameter)
    if not (body.offsets > eps).all():
        raise PreconditionError("0 must be interior to the body")
    plane = AffineSubspace.hyperplane(v)
    sec = section(body, plane, tol)
    if sec.empty or sec.degenerate:
        raise GeometryError("central section is degenerate")
    loc = sec.body.vertices
    pts = plane.lift(np.vstack([loc, 0.5 * (loc + np.roll(loc, -1, axis=0))]))
    active = _active_normals(body, pts, eps)

    half = sample_directions(3, grid // 2)
    cand = np.vstack([half, -half])
    cand = cand[cand @ v > 1e-12]
    defects = tangency_defect(active, cand)
    basis = plane.directions

    def chart_defect(z):
        return float(tangency_defect(active, unit(v + basis.T @ z))[0])

    k = int(np.argmin(defects))
    z0 = basis @ (cand[k] / (cand[k] @ v))
    res = minimize(chart_defect, z0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxfev": 400})
    best = unit(v + basis.T @ res.x)
    deviation = min(float(res.fun), float(defects[k]))
    if deviation > np.sin(tol.psi):
        return ConeSet(v, np.zeros((0, 3)), deviation, best)
    ok = cand[defects <= np.sin(tol.psi)]
    zs = np.vstack([(ok / (ok @ v)[:, None]) @ basis.T, res.x[None, :]])
    hull = convex_hull(zs)
    gens = np.array([unit(v + basis.T @ z) for z in hull.vertices])
    return ConeSet(v, gens, deviation, best)


@dataclass
class DualBlaschkeResult:
    passed: bool
    empty_directions: list[np.ndarray]
    deviations: np.ndarray


def dual_blaschke_check(body: ConvexBody, dirs: int | np.ndarray = 64, tol: Tolerances = DEFAULT) -> DualBlaschkeResult:
    vs = sample_directions(3, dirs) if np.isscalar(dirs) else np.asarray(dirs, dtype=float)
    empty, devs = [], []
    for v in vs:
        cone = psi_cone(body, v, tol)
        devs.append(cone.deviation)
        if cone.empty:
            empty.append(unit(v))
    return DualBlaschkeResult(not empty, empty, np.array(devs))


def line_supports(body: ConvexBody, p, w, tol: float = 1e-9) -> bool:
    """Does the line ``p + t w`` avoid the interior of ``body``?

    Decided by an LP over ``t``: the line meets the interior iff some point
    on it has positive slack in every inequality.
    """
    p, w = np.asarray(p, float), unit(w)
    slack = body.offsets - body.normals @ p
    rate = body.normals @ w
    # max s  s.t.  rate_i t + s <= slack_i,  s <= 1
    A = np.column_stack([rate, np.ones(len(rate))])
    A = np.vstack([A, [0.0, 1.0]])
    b = np.concatenate([slack, [1.0]])
    sol = solve_lp(np.array([0.0, -1.0]), A, b)
    return bool(sol.optimal and sol.x[1] <= tol * max(1.0, body.diameter))
