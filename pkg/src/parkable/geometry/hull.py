"""Convex hulls in dimensions 1 to 3.

Planar hulls use Andrew's monotone chain.  Spatial hulls are delegated to
Qhull (through scipy) and the triangulated output is merged back into
polygonal facets, so every facet carries its full cyclic vertex list.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull

from ..errors import GeometryError


def affine_frame(points: np.ndarray, tol: float = 1e-9):
    """Orthonormal frame of the affine hull of ``points``.

    Returns ``(origin, basis, complement)`` where ``basis`` has one row per
    spanning direction and ``complement`` spans the orthogonal directions.
    The rank cut-off is ``tol`` times the point cloud's extent.
    """
    points = np.asarray(points, dtype=float)
    origin = points.mean(axis=0)
    centred = points - origin
    scale = max(np.abs(centred).max(initial=0.0), 1e-300)
    _, s, vt = np.linalg.svd(centred, full_matrices=True)
    rank = int(np.sum(s > tol * scale * max(1.0, np.sqrt(len(points)))))
    return origin, vt[:rank], vt[rank:]


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def monotone_chain(points: np.ndarray, tol: float = 1e-12) -> list[int]:
    """Indices of the hull vertices of planar ``points``, counter-clockwise.

    Collinear boundary points are dropped.  ``tol`` is relative to the
    squared extent of the input.
    """
    pts = np.asarray(points, dtype=float)
    if len(pts) == 0:
        return []
    extent = np.ptp(pts, axis=0).max(initial=0.0)
    eps = tol * max(extent, 1e-300) ** 2
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    # collapse coincident points
    # consecutive duplicates in lexicographic order are coincident points
    step = np.abs(np.diff(pts[order], axis=0)).max(axis=1)
    keep = np.concatenate([[True], step > 1e-12 * max(extent, 1e-300)])
    uniq = order[keep].tolist()
    if len(uniq) <= 2:
        return uniq
    p = [tuple(pts[i]) for i in uniq]

    lower: list[int] = []
    for k, q in enumerate(p):
        while len(lower) >= 2 and _cross(p[lower[-2]], p[lower[-1]], q) <= eps:
            lower.pop()
        lower.append(k)
    upper: list[int] = []
    for k in range(len(p) - 1, -1, -1):
        q = p[k]
        while len(upper) >= 2 and _cross(p[upper[-2]], p[upper[-1]], q) <= eps:
            upper.pop()
        upper.append(k)
    chain = lower[:-1] + upper[:-1]
    return [uniq[k] for k in chain]


def hull_3d(points: np.ndarray, merge_tol: float = 1e-9):
    """Hull of full-dimensional points in 3D.

    Returns ``(vertex_ids, facets)`` where each facet is
    ``(unit_normal, offset, cyclic_vertex_ids)`` with ids indexing
    ``points``; cycles are counter-clockwise seen from outside.
    """
    pts = np.asarray(points, dtype=float)
    try:
        qh = ConvexHull(pts)
    except Exception as exc:  # scipy raises QhullError for flat input
        raise GeometryError(f"3D hull failed: {exc}") from exc
    scale = max(np.abs(pts).max(), 1e-300)
    eqs = qh.equations
    # merge adjacent coplanar triangles with a union-find over qhull neighbours
    parent = list(range(len(eqs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for s, nbrs in enumerate(qh.neighbors):
        for t in nbrs:
            if t < 0 or t <= s:
                continue
            if (
                np.abs(eqs[s, :3] - eqs[t, :3]).max() <= merge_tol
                and abs(eqs[s, 3] - eqs[t, 3]) <= merge_tol * scale
            ):
                parent[find(t)] = find(s)
    by_root: dict[int, list[int]] = {}
    for s in range(len(eqs)):
        by_root.setdefault(find(s), []).append(s)
    groups = list(by_root.values())

    facets = []
    used: set[int] = set()
    for members in groups:
        ids = sorted({int(v) for s in members for v in qh.simplices[s]})
        normal = np.mean([eqs[s][:3] for s in members], axis=0)
        normal /= np.linalg.norm(normal)
        offset = float(np.max(pts[ids] @ normal))
        cycle = _facet_cycle(pts, ids, normal)
        facets.append((normal, offset, cycle))
        used.update(cycle)
    return sorted(used), facets


def _facet_cycle(pts, ids, normal):
    """Order the extreme points of one planar facet counter-clockwise."""
    sub = pts[ids]
    helper = np.eye(3)[np.argmin(np.abs(normal))]
    e1 = np.cross(normal, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    chart = np.column_stack([sub @ e1, sub @ e2])
    order = monotone_chain(chart)
    return [ids[k] for k in order]
