"""Polytopes in dual representation and the operations built on them.

A :class:`ConvexBody` carries both its vertex list and its facet
inequalities.  Lower-dimensional bodies (sections, segments, points) are
allowed; their inequality system then also holds a pair of opposite rows for
every direction normal to the affine hull, so ``normals @ x <= offsets``
always describes the set exactly.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from ..config import DEFAULT, DEFAULT_DIRECTIONS
from ..errors import DegenerateDirectionError, DimensionError, GeometryError
from .hull import affine_frame, hull_3d, monotone_chain
from .lp import lp_feasible, solve_lp
from .sampling import directions as sample_directions


def as_vector(x, dim: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if not np.isfinite(v).all():
        raise GeometryError(f"non-finite coordinates: {v}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionError(f"expected a {dim}-vector, got {v.shape[0]} coordinates")
    return v


def unit(x) -> np.ndarray:
    v = as_vector(x)
    norm = np.linalg.norm(v)
    if norm <= 1e-14:
        raise DegenerateDirectionError("degenerate direction")
    return v / norm


def orthonormal_complement(vectors: np.ndarray, dim: int) -> np.ndarray:
    """Rows spanning the orthogonal complement of the row space of ``vectors``."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vectors.size == 0:
        return np.eye(dim)
    _, s, vt = np.linalg.svd(vectors, full_matrices=True)
    rank = int(np.sum(s > 1e-12 * max(s.max(initial=0.0), 1.0)))
    return vt[rank:]


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """``base + span(directions)`` with orthonormal ``directions`` (one per row)."""

    base: np.ndarray
    directions: np.ndarray

    def __post_init__(self):
        base = as_vector(self.base)
        dirs = np.asarray(self.directions, dtype=float).reshape(-1, base.shape[0])
        if dirs.shape[0]:
            gram = dirs @ dirs.T
            if np.abs(gram - np.eye(dirs.shape[0])).max() > 1e-8:
                raise GeometryError("subspace directions must be orthonormal")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "directions", dirs)

    @classmethod
    def hyperplane(cls, normal, offset: float = 0.0) -> "AffineSubspace":
        """The hyperplane ``{x : n . x = offset}`` for a (normalized) ``normal``."""
        n = unit(normal)
        return cls(offset * n, orthonormal_complement(n[None, :], n.shape[0]))

    @classmethod
    def line(cls, direction, base=None) -> "AffineSubspace":
        d = unit(direction)
        b = np.zeros_like(d) if base is None else as_vector(base, d.shape[0])
        # keep the base point canonical: the foot of the perpendicular from 0
        b = b - (b @ d) * d
        return cls(b, d[None, :])

    @classmethod
    def span(cls, vectors, dim: int | None = None) -> "AffineSubspace":
        vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
        n = vecs.shape[1] if dim is None else dim
        if vecs.size == 0:
            return cls(np.zeros(n), np.zeros((0, n)))
        _, s, vt = np.linalg.svd(vecs, full_matrices=False)
        rank = int(np.sum(s > 1e-12 * max(s.max(), 1.0)))
        return cls(np.zeros(n), vt[:rank])

    @property
    def ambient_dim(self) -> int:
        return self.base.shape[0]

    @property
    def dim(self) -> int:
        return self.directions.shape[0]

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    @property
    def is_linear(self) -> bool:
        return bool(np.abs(self.base).max(initial=0.0) <= 1e-12)

    @functools.cached_property
    def normals(self) -> np.ndarray:
        return orthonormal_complement(self.directions, self.ambient_dim)

    def chart(self, x) -> np.ndarray:
        """Coordinates of (the projection of) ``x`` in this subspace's frame."""
        return (np.asarray(x, dtype=float) - self.base) @ self.directions.T

    def lift(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float) @ self.directions + self.base

    def translate(self, t) -> "AffineSubspace":
        return AffineSubspace(self.base + as_vector(t, self.ambient_dim), self.directions)

    def distance(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.linalg.norm((x - self.base) @ self.normals.T, axis=-1)


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """Polytope with vertex list and inequality system ``normals @ x <= offsets``.

    ``facets`` lists, for each genuine facet (the first ``len(facets)`` rows of
    the inequality system), the vertex indices incident to it, in cyclic order
    for polygons.  Rows past those are the equality pairs of a flat body.
    """

    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    facets: tuple[tuple[int, ...], ...]
    affine_dim: int
    frame: AffineSubspace | None = field(default=None)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def is_flat(self) -> bool:
        return self.affine_dim < self.dim

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    @property
    def facet_normals(self) -> np.ndarray:
        return self.normals[: self.n_facets]

    @property
    def facet_offsets(self) -> np.ndarray:
        return self.offsets[: self.n_facets]

    @functools.cached_property
    def diameter(self) -> float:
        v = self.vertices
        best = 0.0
        for start in range(0, len(v), 512):
            block = v[start : start + 512]
            d2 = ((block[:, None, :] - v[None, :, :]) ** 2).sum(-1)
            best = max(best, float(d2.max()))
        return float(np.sqrt(best))

    @functools.cached_property
    def edges(self) -> np.ndarray:
        """Vertex index pairs of the edges (polygons and 3D polytopes)."""
        pairs: set[tuple[int, int]] = set()
        if self.affine_dim == 3:
            for cyc in self.facets:
                for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                    pairs.add((min(a, b), max(a, b)))
        elif self.affine_dim == 2:
            for a, b in self.facets:
                pairs.add((min(a, b), max(a, b)))
        elif self.affine_dim == 1:
            pairs.add((0, 1))
        return np.array(sorted(pairs), dtype=int).reshape(-1, 2)

    def support(self, u) -> float:
        return support(self, u)

    def contains(self, x, tol: float = DEFAULT.geom) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.all(x @ self.normals.T <= self.offsets + tol, axis=-1)

    def translate(self, t) -> "ConvexBody":
        t = as_vector(t, self.dim)
        frame = None if self.frame is None else self.frame.translate(t)
        return ConvexBody(
            self.vertices + t,
            self.normals,
            self.offsets + self.normals @ t,
            self.facets,
            self.affine_dim,
            frame,
        )

    def negate(self) -> "ConvexBody":
        frame = None if self.frame is None else AffineSubspace(-self.frame.base, self.frame.directions)
        return ConvexBody(-self.vertices, -self.normals, self.offsets, self.facets, self.affine_dim, frame)

    def linear_image(self, matrix) -> "ConvexBody":
        return convex_hull(self.vertices @ np.asarray(matrix, dtype=float).T)

    def vertex_centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)


@dataclass(frozen=True, eq=False)
class HPolytope:
    """Inequality-only polytope ``{x : normals @ x <= offsets}``."""

    normals: np.ndarray
    offsets: np.ndarray

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def contains(self, x, tol: float = DEFAULT.geom) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.all(x @ self.normals.T <= self.offsets + tol, axis=-1)

    def feasibility(self, tol: float = DEFAULT.lp):
        return lp_feasible(self.normals, self.offsets, tol=tol)

    def vertices(self, tol: float = 1e-9) -> np.ndarray:
        return enumerate_vertices(self.normals, self.offsets, tol=tol)

    def intersect(self, other: "HPolytope") -> "HPolytope":
        return HPolytope(
            np.vstack([self.normals, other.normals]),
            np.concatenate([self.offsets, other.offsets]),
        )


# ---------------------------------------------------------------------------
# construction


def _polygon_rows(chart_pts: np.ndarray, cycle: list[int]):
    """Outward unit normals and offsets of a CCW polygon in its plane."""
    a = np.asarray(cycle)
    b = np.roll(a, -1)
    edge = chart_pts[b] - chart_pts[a]
    normals = np.column_stack([edge[:, 1], -edge[:, 0]])
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    offsets = np.einsum("ij,ij->i", normals, chart_pts[a])
    return normals, offsets, list(zip(a.tolist(), b.tolist()))


def convex_hull(points, tol: float = 1e-9) -> ConvexBody:
    """Minimal dual representation of the hull of ``points`` (ambient dim <= 3).

    Lower-dimensional point sets produce flat bodies whose inequality system
    pins the orthogonal directions with equality pairs.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise GeometryError("convex hull of an empty point set")
    if not np.isfinite(pts).all():
        raise GeometryError("non-finite point coordinates")
    n = pts.shape[1]
    origin, basis, complement = affine_frame(pts, tol)
    k = basis.shape[0]
    if k == n:
        origin, basis, complement = np.zeros(n), np.eye(n), np.zeros((0, n))
    if k == n and n == 3:
        ids, facets = hull_3d(pts)
        remap = {old: new for new, old in enumerate(ids)}
        verts = pts[ids]
        normals = np.array([f[0] for f in facets])
        offsets = np.array([f[1] for f in facets])
        cycles = tuple(tuple(remap[i] for i in f[2]) for f in facets)
        return ConvexBody(verts, normals, offsets, cycles, 3, None)
    if k > 3:
        raise DimensionError("facet enumeration is implemented for dimension <= 3 only")

    frame = AffineSubspace(origin, basis)
    chart = frame.chart(pts)
    if k == 0:
        verts = origin[None, :]
        cn, co, cf = np.zeros((0, 0)), np.zeros(0), []
        local = np.zeros((1, 0))
    elif k == 1:
        lo, hi = int(np.argmin(chart[:, 0])), int(np.argmax(chart[:, 0]))
        verts = pts[[lo, hi]]
        local = chart[[lo, hi]]
        cn = np.array([[-1.0], [1.0]])
        co = np.array([-local[0, 0], local[1, 0]])
        cf = [(0,), (1,)]
    elif k == 2:
        cycle = monotone_chain(chart)
        verts = pts[cycle]
        local = chart[cycle]
        cn, co, cf = _polygon_rows(local, list(range(len(cycle))))
    else:  # k == 3 < n cannot happen for n <= 3
        raise DimensionError("unsupported dimension")

    # lift chart facets, then pin the complement
    rows = [cn @ basis] if k else []
    offs = [co + (cn @ basis) @ origin] if k else []
    if complement.shape[0]:
        rows += [complement, -complement]
        offs += [complement @ origin, -(complement @ origin)]
    normals = np.vstack(rows) if rows else np.zeros((0, n))
    offsets = np.concatenate(offs) if offs else np.zeros(0)
    if k == n:
        frame = None
    return ConvexBody(verts, normals, offsets, tuple(tuple(f) for f in cf), k, frame)


def from_halfspaces(normals, offsets, tol: float = 1e-9) -> ConvexBody | None:
    """Bounded H-polytope to a :class:`ConvexBody`; ``None`` when empty."""
    verts = enumerate_vertices(normals, offsets, tol=tol)
    if len(verts) == 0:
        return None
    return convex_hull(verts)


def enumerate_vertices(normals, offsets, tol: float = 1e-9, max_combinations: int = 60000) -> np.ndarray:
    """Vertices of a bounded ``{x : A x <= b}`` in low dimension.

    Small systems are enumerated combinatorially (robust for degenerate,
    lower-dimensional polytopes).  Large ones fall back to the extreme points
    found by optimizing over a direction lattice with the LP solver.
    """
    A = np.atleast_2d(np.asarray(normals, dtype=float))
    b = np.asarray(offsets, dtype=float)
    norms = np.linalg.norm(A, axis=1)
    keep = norms > 1e-14
    A, b = A[keep] / norms[keep, None], b[keep] / norms[keep]
    m, d = A.shape
    scale = max(1.0, np.abs(b).max(initial=0.0))
    if m < d:
        return np.zeros((0, d))

    from math import comb

    if comb(m, d) <= max_combinations:
        combos = np.array(list(itertools.combinations(range(m), d)), dtype=int)
        mats = A[combos]
        rhs = b[combos]
        dets = np.linalg.det(mats)
        ok = np.abs(dets) > 1e-10
        if not ok.any():
            return np.zeros((0, d))
        sols = np.linalg.solve(mats[ok], rhs[ok][..., None])[..., 0]
        inside = np.all(sols @ A.T <= b + tol * scale, axis=1)
        cand = sols[inside]
    else:
        probes = sample_directions(d, 256) if d > 1 else np.array([[1.0], [-1.0]])
        cand = []
        box = 1e6 * scale
        rows = np.vstack([A, np.eye(d), -np.eye(d)])
        offs = np.concatenate([b, np.full(2 * d, box)])
        for c in probes:
            sol = solve_lp(-c, rows, offs)
            if sol.optimal:
                cand.append(sol.x)
        cand = np.array(cand).reshape(-1, d)
    if len(cand) == 0:
        return np.zeros((0, d))
    return _dedupe(cand, 1e-9 * scale)


def _dedupe(points: np.ndarray, tol: float) -> np.ndarray:
    pts = np.round(points / max(tol, 1e-15)) * max(tol, 1e-15)
    order = np.lexsort(pts.T[::-1])
    out = []
    for i in order:
        if out and np.abs(points[i] - out[-1]).max() <= 10 * tol:
            continue
        out.append(points[i])
    return np.array(out)


# ---------------------------------------------------------------------------
# support, projection, sections, erosion, distance


def support(body: ConvexBody, u) -> float | np.ndarray:
    """Support value ``max_{v in body} v . u``; vectorized over rows of ``u``."""
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != body.dim:
        raise DimensionError(f"direction has {u.shape[-1]} coordinates, body lives in R^{body.dim}")
    if u.ndim == 1:
        if np.linalg.norm(u) <= 1e-14:
            raise DegenerateDirectionError("degenerate direction")
        return float(np.max(body.vertices @ u))
    if (np.linalg.norm(u, axis=1) <= 1e-14).any():
        raise DegenerateDirectionError("degenerate direction")
    return np.max(u @ body.vertices.T, axis=1)


def support_set(body: ConvexBody, u, tol: float = DEFAULT.geom) -> np.ndarray:
    """Indices of the vertices attaining the support value in direction ``u``."""
    u = as_vector(u, body.dim)
    if np.linalg.norm(u) <= 1e-14:
        raise DegenerateDirectionError("degenerate direction")
    vals = body.vertices @ u
    return np.flatnonzero(vals >= vals.max() - tol * max(1.0, np.linalg.norm(u)))


def project(body: ConvexBody, subspace: AffineSubspace) -> ConvexBody:
    """Orthogonal projection onto a linear subspace, in its chart coordinates."""
    if subspace.ambient_dim != body.dim:
        raise DimensionError("subspace and body dimensions differ")
    if not subspace.is_linear:
        raise GeometryError("projection target must pass through the origin")
    return convex_hull(subspace.chart(body.vertices))


@dataclass(frozen=True, eq=False)
class Section:
    """Result of intersecting a body with an affine subspace.

    ``body`` is expressed in the chart of ``subspace``; it is ``None`` when the
    intersection is empty.  ``degenerate`` marks intersections whose inradius
    (in the chart) is below the section tolerance; ``meets_interior`` is
    false for sections lying in the boundary of the body.
    """

    subspace: AffineSubspace
    body: ConvexBody | None
    degenerate: bool
    meets_interior: bool

    @property
    def empty(self) -> bool:
        return self.body is None

    def lifted(self) -> ConvexBody:
        if self.body is None:
            raise GeometryError("empty section has no lift")
        return convex_hull(self.subspace.lift(self.body.vertices))

    def lifted_vertices(self) -> np.ndarray:
        return self.subspace.lift(self.body.vertices)


def section(body: ConvexBody, subspace: AffineSubspace, tol=DEFAULT) -> Section:
    """Intersection of ``body`` with a hyperplane or a line."""
    if subspace.ambient_dim != body.dim:
        raise DimensionError("subspace and body dimensions differ")
    eps = tol.geom * max(1.0, body.diameter)
    degenerate_r = tol.section * body.diameter
    if subspace.dim == 1:
        return _line_section(body, subspace, eps, degenerate_r)
    if subspace.codim != 1:
        raise GeometryError("sections are supported for hyperplanes and lines")
    if body.affine_dim < body.dim:
        raise GeometryError("hyperplane sections need a full-dimensional body")
    normal = subspace.normals[0]
    level = float(normal @ subspace.base)
    s = body.vertices @ normal - level
    if s.min() > eps or s.max() < -eps:
        return Section(subspace, None, True, False)
    on = np.abs(s) <= eps
    pts = [body.vertices[on]]
    edges = body.edges
    ea, eb = edges[:, 0], edges[:, 1]
    cross = ((s[ea] < -eps) & (s[eb] > eps)) | ((s[ea] > eps) & (s[eb] < -eps))
    if cross.any():
        a, b_ = ea[cross], eb[cross]
        w = s[a] / (s[a] - s[b_])
        pts.append(body.vertices[a] + w[:, None] * (body.vertices[b_] - body.vertices[a]))
    pts = np.vstack(pts)
    interior = bool(s.min() < -eps and s.max() > eps)
    chart = subspace.chart(pts)
    local = convex_hull(chart)
    if local.affine_dim < subspace.dim:
        return Section(subspace, local, True, interior)
    if local.affine_dim == 2:
        # a planar convex set has inradius >= area / perimeter; only run the
        # inradius LP when that cheap bound is inconclusive
        v = local.vertices
        nxt = np.roll(v, -1, axis=0)
        area = 0.5 * abs(np.sum(v[:, 0] * nxt[:, 1] - v[:, 1] * nxt[:, 0]))
        perimeter = np.linalg.norm(nxt - v, axis=1).sum()
        if area >= degenerate_r * perimeter:
            return Section(subspace, local, False, interior)
    radius = lp_feasible(local.normals, local.offsets, cap=body.diameter).margin
    return Section(subspace, local, bool(radius < degenerate_r), interior)


def _line_section(body, line, eps, degenerate_r) -> Section:
    d = line.directions[0]
    p = line.base
    rates = body.normals @ d
    slack = body.offsets - body.normals @ p
    lo, hi = -np.inf, np.inf
    par = np.abs(rates) <= 1e-14
    if (slack[par] < -eps).any():
        return Section(line, None, True, False)
    pos, neg = rates > 1e-14, rates < -1e-14
    if pos.any():
        hi = float(np.min(slack[pos] / rates[pos]))
    if neg.any():
        lo = float(np.max(slack[neg] / rates[neg]))
    if not np.isfinite(lo) or not np.isfinite(hi):
        raise GeometryError("unbounded line section")
    if hi < lo - eps:
        return Section(line, None, True, False)
    if hi < lo:
        lo = hi = 0.5 * (lo + hi)
    local = convex_hull(np.array([[lo], [hi]]))
    mid = p + 0.5 * (lo + hi) * d
    interior = bool(hi - lo > 2 * eps) and bool(np.all(body.normals @ mid < body.offsets - eps))
    return Section(line, local, bool(0.5 * (hi - lo) < degenerate_r), interior)


def minkowski_erode(outer: ConvexBody, inner: ConvexBody) -> HPolytope:
    """``{v : inner + v is contained in outer}`` as an inequality system."""
    if outer.dim != inner.dim:
        raise DimensionError("bodies live in different dimensions")
    shift = support(inner, outer.normals) if len(outer.normals) else np.zeros(0)
    return HPolytope(outer.normals.copy(), outer.offsets - shift)


def erosion_is_empty(eroded: HPolytope, tol: float = DEFAULT.lp) -> bool:
    return not eroded.feasibility(tol).feasible


def hausdorff(b1: ConvexBody, b2: ConvexBody, n_directions: int = DEFAULT_DIRECTIONS) -> float:
    """Support-function distance over both normal sets plus a direction lattice."""
    if b1.dim != b2.dim:
        raise DimensionError("bodies live in different dimensions")
    dirs = hausdorff_directions(b1.dim, b1, b2, n_directions=n_directions)
    return float(np.max(np.abs(support(b1, dirs) - support(b2, dirs))))


def hausdorff_directions(dim: int, *bodies: ConvexBody, n_directions: int = DEFAULT_DIRECTIONS) -> np.ndarray:
    parts = [b.normals for b in bodies if len(b.normals)]
    parts.append(sample_directions(dim, n_directions))
    dirs = np.vstack(parts)
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
